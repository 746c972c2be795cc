#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hazardfield/expr.hpp"
#include "hazardfield/point.hpp"
#include "hazardfield/wide_real.hpp"

namespace hazardfield {

/// One or more expressions flattened into a straight-line instruction list.
///
/// Shared subtrees (by node identity) are computed once, so a value and its
/// derivatives compiled together cost little more than the largest of them.
/// Immutable after construction; run() may be called concurrently.
class Program {
 public:
  Program() = default;
  explicit Program(const Expr& output);
  explicit Program(std::span<const Expr> outputs);

  std::size_t outputs() const noexcept { return outputs_.size(); }
  std::size_t size() const noexcept { return code_.size(); }

  /// Evaluates every output. `out.size()` must equal outputs().
  /// Throws DomainError.
  void run(const Point& p, std::span<double> out) const;
  void run(const Point& p, std::span<WideReal> out) const;

  /// First output only.
  double value(const Point& p) const;
  WideReal wide_value(const Point& p) const;

  /// Taylor coefficients along one axis: result[k][j] is
  /// (1/j!) d^j f_k / d axis^j at p, for j = 0..order.
  std::vector<std::vector<WideReal>> taylor(const Point& p, Axis axis, int order) const;
  /// Same along the line p + t * direction: coefficient j is
  /// (1/j!) d^j/dt^j f(p + t * direction) at t = 0.
  std::vector<std::vector<WideReal>> taylor(const Point& p, const Point& direction,
                                            int order) const;

 private:
  struct Instruction {
    Expr::Kind kind = Expr::Kind::constant;
    std::uint32_t lhs = 0;
    std::uint32_t rhs = 0;
    double value = 0.0;
    Axis axis = Axis::x;
    Expr source;
  };

  template <class T>
  void execute(const Point& p, std::vector<T>& slots) const;

  [[noreturn]] void domain_failure(std::size_t at, const Point& p, const char* what) const;

  std::vector<Instruction> code_;
  std::vector<std::uint32_t> outputs_;
};

}  // namespace hazardfield
