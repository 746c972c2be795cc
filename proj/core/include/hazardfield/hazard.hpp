#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hazardfield/lattice.hpp"
#include "hazardfield/point.hpp"
#include "hazardfield/program.hpp"
#include "hazardfield/surface.hpp"
#include "hazardfield/taylor.hpp"

namespace hazardfield {

/// Force of mortality mu_a = -(1/l) dl/da and its rate dmu_a/da from the
/// symbolic derivatives of an analytic surface, compiled once.
class ExactHazard {
 public:
  explicit ExactHazard(AnalyticSurface surface);

  const AnalyticSurface& surface() const noexcept { return surface_; }

  /// Throws std::invalid_argument for an axis the surface lacks,
  /// OutOfDomainError, NonPositiveSurvivalError, DomainError.
  double mu(const Point& p, Axis axis) const;
  double dmu(const Point& p, Axis axis) const;

 private:
  struct AxisPrograms {
    Program log_derivatives;  // d/da and d2/da2 of the expanded log l
    Program derivatives;      // dl/da and d2l/da2
  };
  const AxisPrograms& programs(Axis axis) const;

  AnalyticSurface surface_;
  std::vector<AxisPrograms> axes_;
};

double mu_exact(const AnalyticSurface& s, const Point& p, Axis axis);
double dmu_exact(const AnalyticSurface& s, const Point& p, Axis axis);

/// mu at p + delta along `axis` from the order-N Taylor series of l and its
/// derivative around p:
///   -sum_{j<=N} delta^j/j! l^(j+1)  /  sum_{j<=N} delta^j/j! l^(j).
/// delta = 0 gives mu_exact at p. Throws NonPositiveSurvivalError when the
/// denominator is <= 0, plus the mu_exact errors at the shifted point.
double mu_shifted(const AnalyticSurface& s, const Point& p, Axis axis, double delta, int order);

struct DmuLimit {
  std::vector<double> estimates;  // (mu_shifted - mu_exact) / delta, per delta
  std::vector<int> orders;        // series order used per delta
  double extrapolated = 0.0;      // polynomial extrapolation to delta = 0
};

/// Difference quotients of the shifted-series mu, each with a series order
/// grown (from 8, doubling, up to 512) until the quotient stops changing.
/// `deltas` is strictly decreasing, positive, with at least 3 entries.
/// Throws ConvergenceError if a series does not settle.
DmuLimit dmu_limit(const AnalyticSurface& s, const Point& p, Axis axis,
                   const std::vector<double>& deltas);

enum class EstimatorMethod { direct, log };

struct EstimatorSpec {
  EstimatorMethod method = EstimatorMethod::direct;
  StencilSpec stencil;
  /// Opt-in second-order one-sided differences where a central stencil does
  /// not fit; without it such nodes raise BoundaryError.
  bool one_sided = false;
};

/// mu along `axis` at grid node p from central differences of l
/// (direct: -(l+ - l-)/(2h l0); log: -(ln l+ - ln l-)/(2h)), with
/// `richardson_levels` h^2-eliminations over steps h, 2h, 4h, ...
/// The step must be a whole multiple of the axis pitch.
double mu_estimate(const GridSurface& g, const Point& p, Axis axis, const EstimatorSpec& spec);

struct HazardSample {
  Point point{};
  std::array<std::optional<double>, 3> mu{};
  std::array<std::optional<double>, 3> dmu{};
};

struct FieldFailure {
  std::size_t node = 0;
  Point point{};
  std::string reason;
  bool boundary = false;  // only BoundaryError, i.e. no stencil fits
};

struct FieldOptions {
  std::vector<Axis> axes{Axis::x};
  bool dmu = false;          // analytic surfaces only
  EstimatorSpec estimator;   // gridded surfaces only
  unsigned threads = 0;      // 0 = hardware concurrency
};

struct FieldGrid {
  Lattice lattice;
  std::vector<Axis> axes;
  bool has_dmu = false;
  std::vector<HazardSample> samples;   // row-major, last axis fastest
  std::vector<FieldFailure> failures;  // in node order
};

/// Evaluates mu (and optionally dmu) at every lattice node: the exact path for
/// analytic surfaces, mu_estimate for grids (whose lattice nodes must be grid
/// nodes). A failing node leaves its sample empty and adds a failure; the
/// sweep goes on. Output does not depend on the thread count.
FieldGrid field(const Surface& s, const Lattice& lattice, const FieldOptions& options);

/// Header `x[,y[,z]],mu_<axis>...[,dmu_<axis>...]`; empty cells for absent values.
void write_field_csv(std::ostream& out, const FieldGrid& f);
void write_field_csv(const std::filesystem::path& path, const FieldGrid& f);

}  // namespace hazardfield
