#pragma once

#include "hazardfield/point.hpp"
#include "hazardfield/surface.hpp"
#include "hazardfield/wide_real.hpp"

namespace hazardfield {

/// Steps, telescope index and extrapolation depth shared by the expansion
/// identities and the grid estimators.
struct StencilSpec {
  Point steps{};  // per-axis step; only the surface's axes are read
  int k = 1;      // highest retained order is 2k+1
  int richardson_levels = 0;

  /// Throws std::invalid_argument unless every step of the first `dimension`
  /// axes is > 0, k >= 1 and richardson_levels >= 0.
  void check(int dimension) const;
};

/// Sum of the Taylor terms of total order <= `order` of l around `center`,
/// evaluated at center + direction * steps. No remainder term.
struct TruncatedExpansion {
  Point center{};
  Point steps{};
  int order = 0;
  int direction = 1;
  WideReal value;
};

/// Expansion in every axis at once; steps may be 0 on axes that stay fixed.
/// Throws OutOfDomainError if center +- steps leaves the domain, DomainError
/// when a derivative cannot be evaluated.
TruncatedExpansion truncated(const AnalyticSurface& s, const Point& center, const Point& steps,
                             int order, int direction);
/// Along x only, other coordinates held at center.
TruncatedExpansion truncated_1d(const AnalyticSurface& s, const Point& center, double dx,
                                int order, int direction);

/// f(center + steps) - f(center - steps) for expansions of odd `order`.
/// The even terms cancel identically and are not formed, so the result is
/// 2 * sum over odd m <= order of the order-m terms.
WideReal symmetric_difference(const AnalyticSurface& s, const Point& center,
                              const Point& steps, int order);
WideReal symmetric_difference_1d(const AnalyticSurface& s, const Point& center, double dx,
                                 int order);
WideReal symmetric_difference_2d(const AnalyticSurface& s, const Point& center, double dx,
                                 double dy, int order);

/// Both sides of the telescoping identity
///   sum_{j=1..k} [D(2j+1) - D(2j-1)] = D(2k+1) - D(1),
/// D(n) being the order-n symmetric difference. Each side is formed from its
/// own differences.
struct Telescope {
  WideReal lhs;
  WideReal rhs;
};

Telescope telescope(const AnalyticSurface& s, const Point& center, const Point& steps, int k);
Telescope telescope_1d(const AnalyticSurface& s, const Point& center, double dx, int k);
Telescope telescope_2d(const AnalyticSurface& s, const Point& center, double dx, double dy,
                       int k);
/// Step only along `axis`.
Telescope axis_telescope(const AnalyticSurface& s, const Point& center, double step, Axis axis,
                         int k);

/// (1 / 2 step) * [D(2k+1) - sum_{j=1..k} (D(2j+1) - D(2j-1))] along `axis`,
/// which collapses to the first partial.
WideReal reconstruct_derivative(const AnalyticSurface& s, const Point& center, double step,
                                int k, Axis axis = Axis::x);

}  // namespace hazardfield
