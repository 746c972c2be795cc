#pragma once

#include <array>
#include <cstddef>

#include "hazardfield/hazard.hpp"
#include "hazardfield/surface.hpp"
#include "hazardfield/wide_real.hpp"

namespace hazardfield {

/// Rectangle [x.lo, x.hi] x [y.lo, y.hi].
struct Region {
  Interval x;
  Interval y;

  double area() const noexcept { return (x.hi - x.lo) * (y.hi - y.lo); }
};

/// Composite Simpson with an even number of panels.
struct QuadratureSpec {
  std::size_t panels = 1024;

  /// Throws std::invalid_argument for odd or zero panel counts.
  void check() const;
};

/// Composite Simpson weights (1, 4, 2, ..., 4, 1) * h / 3 for `panels` panels of width h.
std::vector<double> simpson_weights(std::size_t panels, double h);

/// Sum with pairwise splitting; the order of additions depends only on the size.
WideReal pairwise_sum(const std::vector<WideReal>& terms);

/// Integral of mu_x * l over age [x, x + m], the other coordinates taken from
/// `slice`. Analytic surfaces use the exact mu; grids use mu_estimate at grid
/// nodes, so x, x + m and every quadrature node must be grid nodes (zero steps
/// in `estimator` default to the grid pitch).
WideReal deaths_integral(const Surface& s, const Point& slice, double x, double m,
                         const QuadratureSpec& quad, const EstimatorSpec& estimator = {});

struct IdentityCheck {
  WideReal lhs;
  WideReal rhs;
};

/// lhs: integral of [(f3(t + d) - f3(t - d)) / 2d - d^2/3! * l'''(t)] over
/// [x, x + m], f3 being order-3 truncated expansions around t.
/// rhs: minus deaths_integral. The bracket is l'(t), so both are l(x+m) - l(x).
IdentityCheck corrected_integrand_check(const AnalyticSurface& s, const Point& slice, double x,
                                        double m, double delta, const QuadratureSpec& quad);

struct RegionMeanReport {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  Point attaining_point{};   // node with |mu - mean| smallest, first in row-major order on ties
  double attaining_value = 0.0;
};

/// Mean of mu_axis over the region by tensor-product Simpson with
/// panels[0] x panels[1] panels; min and max over the same nodes.
/// Coordinates beyond y come from `slice`. Any failing node throws, naming it.
RegionMeanReport region_mean(const Surface& s, Axis axis, const Region& region,
                             const std::array<std::size_t, 2>& panels,
                             const EstimatorSpec& estimator = {}, const Point& slice = {},
                             unsigned threads = 0);

struct SpanSlope {
  WideReal integral_of_derivative;  // Simpson of the telescoped derivative
  WideReal endpoint_difference;     // l(x + m) - l(x)
  WideReal mean_value_slope;        // endpoint_difference / m
};

/// Integrates reconstruct_derivative (step `delta`, index `k`) over [x, x + m].
SpanSlope span_slope_check(const AnalyticSurface& s, const Point& slice, double x, double m,
                           const QuadratureSpec& quad = {}, double delta = 0.01, int k = 2);

}  // namespace hazardfield
