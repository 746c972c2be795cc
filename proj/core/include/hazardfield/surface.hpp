#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hazardfield/expr.hpp"
#include "hazardfield/lattice.hpp"
#include "hazardfield/point.hpp"
#include "hazardfield/program.hpp"
#include "hazardfield/wide_real.hpp"

namespace hazardfield {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Closed box over the first 1 to 3 axes (x, then y, then z).
class DomainBox {
 public:
  DomainBox() = default;
  /// Throws std::invalid_argument unless 1 <= size <= 3 and lo < hi.
  explicit DomainBox(std::vector<Interval> intervals);

  int dimension() const noexcept { return static_cast<int>(intervals_.size()); }
  const Interval& interval(std::size_t i) const { return intervals_.at(i); }
  const Interval& interval(Axis a) const { return interval(index(a)); }
  bool has(Axis a) const noexcept { return static_cast<int>(index(a)) < dimension(); }

  /// Inside, allowing a relative slack of 1e-12 of each side's length so that
  /// coordinates built by adding steps do not fall off the edge by rounding.
  bool contains(const Point& p) const noexcept;

  /// Uniform lattice with `nodes[i]` nodes on axis i (a single entry applies
  /// to every axis). Each count must be >= 2.
  Lattice lattice(const std::vector<std::size_t>& nodes) const;

 private:
  std::vector<Interval> intervals_;
};

/// Closed-form survival function l over a domain box.
class AnalyticSurface {
 public:
  /// Throws std::invalid_argument if the expression uses an axis the box lacks.
  AnalyticSurface(Expr expr, DomainBox domain);

  const Expr& expr() const noexcept { return expr_; }
  const DomainBox& domain() const noexcept { return domain_; }
  int dimension() const noexcept { return domain_.dimension(); }
  /// Compiled form of expr().
  const Program& program() const noexcept { return *program_; }

  /// l(p). Throws OutOfDomainError, DomainError, NonPositiveSurvivalError.
  WideReal value(const Point& p) const;
  /// l(p) without the positivity check.
  WideReal raw_value(const Point& p) const;
  /// ln l(p), computed from the expanded logarithm when it is defined so that
  /// surfaces far outside double range stay accurate.
  double log_value(const Point& p) const;

 private:
  void check_inside(const Point& p) const;

  Expr expr_;
  DomainBox domain_;
  std::shared_ptr<const Program> program_;
  std::shared_ptr<const Program> log_program_;
};

/// Tabulated survival values on a rectilinear grid.
class GridSurface {
 public:
  /// `axes` are strictly increasing with at least 2 nodes each; `values` are
  /// row-major with the last axis fastest. Non-positive values are accepted
  /// here and rejected when used.
  GridSurface(std::vector<std::vector<double>> axes, std::vector<WideReal> values);

  int dimension() const noexcept { return lattice_.dimension(); }
  const Lattice& lattice() const noexcept { return lattice_; }
  const std::vector<WideReal>& values() const noexcept { return values_; }
  const DomainBox& domain() const noexcept { return domain_; }

  /// Multilinear interpolation; exact at nodes. Throws OutOfDomainError,
  /// NonPositiveSurvivalError.
  WideReal value(const Point& p) const;
  WideReal raw_value(const Point& p) const;
  double log_value(const Point& p) const;

  /// Index of `coordinate` on axis `axis` if it is exactly a node.
  std::optional<std::size_t> node_index(std::size_t axis, double coordinate) const;

 private:
  Lattice lattice_;
  std::vector<WideReal> values_;
  DomainBox domain_;
};

using Surface = std::variant<AnalyticSurface, GridSurface>;

WideReal value(const Surface& s, const Point& p);
double log_value(const Surface& s, const Point& p);
const DomainBox& domain(const Surface& s);
int dimension(const Surface& s);

struct Violation {
  Point point{};
  std::optional<WideReal> value;  // absent when evaluation itself failed
  std::string reason;
};

/// Points where l <= 0 or cannot be evaluated. Analytic surfaces are sampled
/// on a uniform lattice with `sampling` nodes per axis (>= 2); grids are
/// checked at every node, which is exhaustive for multilinear interpolation.
std::vector<Violation> validate_positive(const Surface& s, std::size_t sampling);

/// Samples the surface on its uniform lattice. Node values are the analytic
/// values bit for bit. Throws std::invalid_argument for counts < 2.
GridSurface to_grid(const AnalyticSurface& s, const std::vector<std::size_t>& nodes);

/// CSV with header `x[,y[,z]],l`, one row per node, last axis fastest.
/// Throws FormatError carrying the offending line.
GridSurface read_grid_csv(std::istream& in);
GridSurface read_grid_csv(const std::filesystem::path& path);
void write_grid_csv(std::ostream& out, const GridSurface& g);
void write_grid_csv(const std::filesystem::path& path, const GridSurface& g);

}  // namespace hazardfield
