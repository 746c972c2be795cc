#include "hazardfield/taylor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hazardfield/errors.hpp"

namespace hazardfield {

void StencilSpec::check(int dimension) const {
  for (int i = 0; i < dimension; ++i) {
    const double d = steps[static_cast<std::size_t>(i)];
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument(std::string("step along ") + axis_name(static_cast<Axis>(i)) +
                                  " must be > 0");
  }
  if (k < 1) throw std::invalid_argument("telescope index k must be >= 1");
  if (richardson_levels < 0) throw std::invalid_argument("richardson levels must be >= 0");
}

namespace {

Point along(const Point& c, const Point& steps, double sign) {
  return {c[0] + sign * steps[0], c[1] + sign * steps[1], c[2] + sign * steps[2]};
}

void require_stencil(const AnalyticSurface& s, const Point& center, const Point& steps) {
  const int d = s.dimension();
  for (std::size_t i = static_cast<std::size_t>(d); i < 3; ++i)
    if (steps[i] != 0.0) throw std::invalid_argument("step on an axis the surface lacks");
  for (double sign : {0.0, 1.0, -1.0}) {
    const Point p = along(center, steps, sign);
    if (!s.domain().contains(p))
      throw OutOfDomainError("stencil point " + to_string(p, d) + " is outside the domain");
  }
}

// c[m] = (1/m!) d^m/dt^m l(center + t * steps) at t = 0, which is the sum of
// all order-m terms of the multivariate expansion with increments `steps`.
std::vector<WideReal> coefficients(const AnalyticSurface& s, const Point& center,
                                   const Point& steps, int order) {
  if (order < 0) throw std::invalid_argument("expansion order must be >= 0");
  require_stencil(s, center, steps);
  return s.program().taylor(center, steps, order).front();
}

void require_odd(int order) {
  if (order < 1 || order % 2 == 0)
    throw std::invalid_argument("symmetric difference order must be odd and >= 1");
}

WideReal odd_sum(const std::vector<WideReal>& c, int order) {
  WideReal sum = 0;
  for (int m = 1; m <= order; m += 2) sum += c[static_cast<std::size_t>(m)];
  return 2 * sum;
}

Point on_axis(Axis a, double step) {
  Point p{};
  p[index(a)] = step;
  return p;
}

}  // namespace

TruncatedExpansion truncated(const AnalyticSurface& s, const Point& center, const Point& steps,
                             int order, int direction) {
  if (direction != 1 && direction != -1) throw std::invalid_argument("direction must be +1 or -1");
  const auto c = coefficients(s, center, steps, order);
  WideReal sum = 0;
  for (int m = 0; m <= order; ++m) {
    const WideReal& term = c[static_cast<std::size_t>(m)];
    sum += (direction < 0 && m % 2 == 1) ? WideReal(-term) : term;
  }
  return {center, steps, order, direction, sum};
}

TruncatedExpansion truncated_1d(const AnalyticSurface& s, const Point& center, double dx,
                                int order, int direction) {
  return truncated(s, center, on_axis(Axis::x, dx), order, direction);
}

WideReal symmetric_difference(const AnalyticSurface& s, const Point& center,
                              const Point& steps, int order) {
  require_odd(order);
  return odd_sum(coefficients(s, center, steps, order), order);
}

WideReal symmetric_difference_1d(const AnalyticSurface& s, const Point& center, double dx,
                                 int order) {
  return symmetric_difference(s, center, on_axis(Axis::x, dx), order);
}

WideReal symmetric_difference_2d(const AnalyticSurface& s, const Point& center, double dx,
                                 double dy, int order) {
  return symmetric_difference(s, center, Point{dx, dy, 0.0}, order);
}

Telescope telescope(const AnalyticSurface& s, const Point& center, const Point& steps, int k) {
  if (k < 1) throw std::invalid_argument("telescope index k must be >= 1");
  const auto c = coefficients(s, center, steps, 2 * k + 1);
  WideReal lhs = 0;
  for (int j = 1; j <= k; ++j) lhs += odd_sum(c, 2 * j + 1) - odd_sum(c, 2 * j - 1);
  const WideReal rhs = odd_sum(c, 2 * k + 1) - odd_sum(c, 1);
  return {lhs, rhs};
}

Telescope telescope_1d(const AnalyticSurface& s, const Point& center, double dx, int k) {
  return telescope(s, center, on_axis(Axis::x, dx), k);
}

Telescope telescope_2d(const AnalyticSurface& s, const Point& center, double dx, double dy,
                       int k) {
  return telescope(s, center, Point{dx, dy, 0.0}, k);
}

Telescope axis_telescope(const AnalyticSurface& s, const Point& center, double step, Axis axis,
                         int k) {
  return telescope(s, center, on_axis(axis, step), k);
}

WideReal reconstruct_derivative(const AnalyticSurface& s, const Point& center, double step,
                                int k, Axis axis) {
  if (k < 1) throw std::invalid_argument("telescope index k must be >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  const auto c = coefficients(s, center, on_axis(axis, step), 2 * k + 1);
  WideReal telescoped = 0;
  for (int j = 1; j <= k; ++j) telescoped += odd_sum(c, 2 * j + 1) - odd_sum(c, 2 * j - 1);
  return (odd_sum(c, 2 * k + 1) - telescoped) / (2 * step);
}

}  // namespace hazardfield
