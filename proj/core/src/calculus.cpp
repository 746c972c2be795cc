#include "hazardfield/calculus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hazardfield/errors.hpp"
#include "hazardfield/taylor.hpp"

namespace hazardfield {

void QuadratureSpec::check() const {
  if (panels < 2 || panels % 2 != 0)
    throw std::invalid_argument("Simpson panel count must be even and >= 2, got " +
                                std::to_string(panels));
}

std::vector<double> simpson_weights(std::size_t panels, double h) {
  QuadratureSpec{panels}.check();
  std::vector<double> w(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    const double c = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] = c * h / 3.0;
  }
  return w;
}

namespace {

WideReal pairwise(const WideReal* t, std::size_t n) {
  if (n <= 8) {
    WideReal s = 0;
    for (std::size_t i = 0; i < n; ++i) s += t[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(t, half) + pairwise(t + half, n - half);
}

// Quadrature abscissae over [lo, hi]. On a grid they must be grid nodes.
std::vector<double> abscissae(const Surface& s, std::size_t axis, double lo, double hi,
                              std::size_t panels) {
  std::vector<double> t(panels + 1);
  if (const auto* g = std::get_if<GridSurface>(&s)) {
    const auto i0 = g->node_index(axis, lo);
    const auto i1 = g->node_index(axis, hi);
    if (!i0 || !i1)
      throw std::invalid_argument("integration limits on a grid must be grid nodes");
    const std::size_t span = *i1 - *i0;
    if (span % panels != 0)
      throw std::invalid_argument(std::to_string(panels) + " panels do not divide the " +
                                  std::to_string(span) + " grid intervals of the span");
    const std::size_t stride = span / panels;
    const auto& a = g->lattice().axis(axis);
    for (std::size_t i = 0; i <= panels; ++i) t[i] = a[*i0 + i * stride];
    return t;
  }
  const double h = (hi - lo) / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) t[i] = lo + static_cast<double>(i) * h;
  t[panels] = hi;
  return t;
}

EstimatorSpec with_default_steps(const Surface& s, EstimatorSpec e) {
  if (const auto* g = std::get_if<GridSurface>(&s)) {
    for (int i = 0; i < g->dimension(); ++i) {
      auto& step = e.stencil.steps[static_cast<std::size_t>(i)];
      if (step == 0.0) {
        const auto& a = g->lattice().axis(static_cast<std::size_t>(i));
        step = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
      }
    }
  }
  return e;
}

void require_span(double x, double m) {
  if (!(m > 0.0) || !std::isfinite(x) || !std::isfinite(m))
    throw std::invalid_argument("integration span needs finite x and m > 0");
}

Point at_x(Point slice, double t) {
  slice[0] = t;
  return slice;
}

}  // namespace

WideReal pairwise_sum(const std::vector<WideReal>& terms) {
  return pairwise(terms.data(), terms.size());
}

WideReal deaths_integral(const Surface& s, const Point& slice, double x, double m,
                         const QuadratureSpec& quad, const EstimatorSpec& estimator) {
  quad.check();
  require_span(x, m);
  const auto t = abscissae(s, 0, x, x + m, quad.panels);
  const auto w = simpson_weights(quad.panels, m / static_cast<double>(quad.panels));
  std::vector<WideReal> terms(t.size());
  if (const auto* g = std::get_if<GridSurface>(&s)) {
    const EstimatorSpec e = with_default_steps(s, estimator);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Point p = at_x(slice, t[i]);
      terms[i] = g->value(p) * (mu_estimate(*g, p, Axis::x, e) * w[i]);
    }
  } else {
    const ExactHazard exact(std::get<AnalyticSurface>(s));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Point p = at_x(slice, t[i]);
      terms[i] = exact.surface().value(p) * (exact.mu(p, Axis::x) * w[i]);
    }
  }
  return pairwise_sum(terms);
}

IdentityCheck corrected_integrand_check(const AnalyticSurface& s, const Point& slice, double x,
                                        double m, double delta, const QuadratureSpec& quad) {
  quad.check();
  require_span(x, m);
  if (!(delta > 0.0)) throw std::invalid_argument("step must be > 0");
  const Surface surface = s;
  const auto t = abscissae(surface, 0, x, x + m, quad.panels);
  const auto w = simpson_weights(quad.panels, m / static_cast<double>(quad.panels));
  const WideReal correction = WideReal(delta) * delta / 6;
  std::vector<WideReal> terms(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Point p = at_x(slice, t[i]);
    const WideReal diff = symmetric_difference_1d(s, p, delta, 3);
    const WideReal third = s.program().taylor(p, Axis::x, 3).front()[3] * 6;
    terms[i] = (diff / (2 * delta) - correction * third) * w[i];
  }
  return {pairwise_sum(terms), -deaths_integral(surface, slice, x, m, quad)};
}

RegionMeanReport region_mean(const Surface& s, Axis axis, const Region& region,
                             const std::array<std::size_t, 2>& panels,
                             const EstimatorSpec& estimator, const Point& slice,
                             unsigned threads) {
  if (dimension(s) < 2) throw std::invalid_argument("region_mean needs a surface in x and y");
  if (!(region.x.lo < region.x.hi) || !(region.y.lo < region.y.hi))
    throw std::invalid_argument("region sides must have positive length");
  const auto tx = abscissae(s, 0, region.x.lo, region.x.hi, panels[0]);
  const auto ty = abscissae(s, 1, region.y.lo, region.y.hi, panels[1]);
  const auto wx = simpson_weights(panels[0], (region.x.hi - region.x.lo) / panels[0]);
  const auto wy = simpson_weights(panels[1], (region.y.hi - region.y.lo) / panels[1]);

  std::vector<std::vector<double>> axes{tx, ty};
  for (int i = 2; i < dimension(s); ++i) axes.push_back({slice[static_cast<std::size_t>(i)]});
  // Lattice axes with one node are fine here: the sweep only visits nodes.
  const Lattice lat(axes);
  FieldOptions opt;
  opt.axes = {axis};
  opt.estimator = with_default_steps(s, estimator);
  opt.threads = threads;
  const FieldGrid f = field(s, lat, opt);
  if (!f.failures.empty()) {
    const FieldFailure& bad = f.failures.front();
    throw Error("region mean: evaluation failed at " + to_string(bad.point, dimension(s)) + ": " +
                bad.reason);
  }

  RegionMeanReport r;
  r.min = std::numeric_limits<double>::infinity();
  r.max = -r.min;
  std::vector<WideReal> terms(f.samples.size());
  for (std::size_t k = 0; k < f.samples.size(); ++k) {
    const auto idx = lat.unflatten(k);
    const double v = *f.samples[k].mu[index(axis)];
    terms[k] = WideReal(v) * (wx[idx[0]] * wy[idx[1]]);
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  r.mean = to_double(pairwise_sum(terms) / region.area());
  // Rounding in the quadrature can put a constant field's mean a hair outside
  // [min, max]; the bound is a property of the exact mean.
  r.mean = std::clamp(r.mean, r.min, r.max);

  double best = std::numeric_limits<double>::infinity();
  for (const HazardSample& sample : f.samples) {
    const double v = *sample.mu[index(axis)];
    if (std::abs(v - r.mean) < best) {
      best = std::abs(v - r.mean);
      r.attaining_point = sample.point;
      r.attaining_value = v;
    }
  }
  return r;
}

SpanSlope span_slope_check(const AnalyticSurface& s, const Point& slice, double x, double m,
                           const QuadratureSpec& quad, double delta, int k) {
  quad.check();
  require_span(x, m);
  const Surface surface = s;
  const auto t = abscissae(surface, 0, x, x + m, quad.panels);
  const auto w = simpson_weights(quad.panels, m / static_cast<double>(quad.panels));
  std::vector<WideReal> terms(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    terms[i] = reconstruct_derivative(s, at_x(slice, t[i]), delta, k, Axis::x) * w[i];
  SpanSlope r;
  r.integral_of_derivative = pairwise_sum(terms);
  r.endpoint_difference = s.raw_value(at_x(slice, x + m)) - s.raw_value(at_x(slice, x));
  r.mean_value_slope = r.endpoint_difference / m;
  return r;
}

}  // namespace hazardfield
