#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "hazardfield/point.hpp"
#include "hazardfield/wide_real.hpp"

namespace hazardfield {

/// Immutable expression tree over the variables x, y, z.
///
/// Nodes are shared: copying an Expr copies a pointer, and derivative trees
/// reuse the nodes of the expression they were taken from. Safe to share across
/// threads.
class Expr {
 public:
  enum class Kind : std::uint8_t {
    constant,
    variable,
    negate,
    sqrt,
    log,
    exp,
    add,
    sub,
    mul,
    div,
    pow,
  };

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(Axis axis);

  /// Raw node construction, no folding. `kind` must be unary / binary.
  static Expr unary(Kind kind, Expr operand);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);

  Kind kind() const noexcept;
  std::size_t arity() const noexcept;
  Expr child(std::size_t i) const;

  /// Value of a constant node.
  double value() const;
  /// Variable of a variable node.
  Axis axis() const;

  bool is_constant() const noexcept { return kind() == Kind::constant; }
  bool is_constant(double v) const noexcept { return is_constant() && value() == v; }

  /// Bit i set when variable i appears anywhere below this node.
  std::uint8_t variables() const noexcept;
  bool depends_on(Axis a) const noexcept {
    return (variables() >> index(a)) & 1U;
  }

  /// Node identity; equal ids mean the same shared node.
  const void* id() const noexcept { return node_.get(); }

  /// Number of distinct nodes reachable from this one.
  std::size_t node_count() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Folding builders: constant operands are combined and 0/1 identities removed.
// Used by differentiation; parse() builds raw nodes instead.
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr sqrt(const Expr& a);
Expr log(const Expr& a);
Expr exp(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);

/// Parses infix text: decimal numbers, x|y|z, sqrt/log/exp calls, + - * / ^
/// with ^ right-associative and binding tighter than unary minus.
/// Throws ParseError.
Expr parse(std::string_view source);

/// Fully parenthesised canonical text; parse(to_string(e)) evaluates
/// identically to e.
std::string to_string(const Expr& e);
/// As above, cut to at most `max_length` characters (with a trailing "...").
std::string to_string(const Expr& e, std::size_t max_length);

/// IEEE double evaluation. Throws DomainError for log/sqrt of non-positive
/// values, division by zero, and pow outside its real domain.
double evaluate(const Expr& e, const Point& p);
/// Same tree evaluated with extended exponent range.
WideReal evaluate_wide(const Expr& e, const Point& p);

/// Memoising differentiator for one variable. Reusing an instance across
/// repeated derivatives keeps shared subtrees shared.
class Differentiator {
 public:
  explicit Differentiator(Axis axis) : axis_(axis) {}

  Axis axis() const noexcept { return axis_; }
  Expr operator()(const Expr& e);

 private:
  Axis axis_;
  // Keyed by node id; the source Expr keeps the key alive.
  std::unordered_map<const void*, std::pair<Expr, Expr>> memo_;
};

/// d e / d v. Not simplified beyond local constant folding.
Expr differentiate(const Expr& e, Axis v);

/// n-fold derivative along v, n >= 1.
Expr nth_partial(const Expr& e, Axis v, int n);

/// log(e) with products, quotients, powers, exp and sqrt expanded
/// (log(a*b) -> log a + log b, log(a^b) -> b*log a, ...). Valid wherever it
/// evaluates without a DomainError; elsewhere fall back to log(e).
Expr log_expand(const Expr& e);

}  // namespace hazardfield
