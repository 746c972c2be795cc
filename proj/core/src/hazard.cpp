#include "hazardfield/hazard.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hazardfield/errors.hpp"
#include "hazardfield/parallel.hpp"

namespace hazardfield {

namespace {

void require_axis(int dimension, Axis axis) {
  if (static_cast<int>(index(axis)) >= dimension)
    throw std::invalid_argument(std::string("axis ") + axis_name(axis) +
                                " is not an axis of the surface");
}

void require_inside(const DomainBox& box, const Point& p) {
  if (!box.contains(p))
    throw OutOfDomainError("point " + to_string(p, box.dimension()) + " is outside the domain");
}

}  // namespace

// ---- exact path ------------------------------------------------------------

ExactHazard::ExactHazard(AnalyticSurface surface) : surface_(std::move(surface)) {
  const Expr log_l = log_expand(surface_.expr());
  for (int i = 0; i < surface_.dimension(); ++i) {
    const Axis a = static_cast<Axis>(i);
    Differentiator dl(a);
    const Expr l1 = dl(surface_.expr());
    const Expr l2 = dl(l1);
    Differentiator dlog(a);
    const Expr g1 = dlog(log_l);
    const Expr g2 = dlog(g1);
    const Expr logs[] = {g1, g2};
    const Expr plain[] = {l1, l2};
    axes_.push_back({Program(logs), Program(plain)});
  }
}

const ExactHazard::AxisPrograms& ExactHazard::programs(Axis axis) const {
  require_axis(surface_.dimension(), axis);
  return axes_[index(axis)];
}

double ExactHazard::mu(const Point& p, Axis axis) const {
  const AxisPrograms& pr = programs(axis);
  const WideReal l = surface_.value(p);
  try {
    double g[2];
    pr.log_derivatives.run(p, g);
    if (std::isfinite(g[0])) return -g[0];
  } catch (const DomainError&) {
  }
  WideReal d[2];
  pr.derivatives.run(p, d);
  return to_double(-d[0] / l);
}

double ExactHazard::dmu(const Point& p, Axis axis) const {
  const AxisPrograms& pr = programs(axis);
  const WideReal l = surface_.value(p);
  try {
    double g[2];
    pr.log_derivatives.run(p, g);
    if (std::isfinite(g[1])) return -g[1];
  } catch (const DomainError&) {
  }
  WideReal d[2];
  pr.derivatives.run(p, d);
  const WideReal r = d[0] / l;
  return to_double(-d[1] / l + r * r);
}

double mu_exact(const AnalyticSurface& s, const Point& p, Axis axis) {
  return ExactHazard(s).mu(p, axis);
}

double dmu_exact(const AnalyticSurface& s, const Point& p, Axis axis) {
  return ExactHazard(s).dmu(p, axis);
}

// ---- shifted series --------------------------------------------------------

namespace {

// c holds scaled coefficients delta^j l^(j) / j!, j = 0..order+1.
double series_quotient(const std::vector<WideReal>& c, int order, double delta) {
  WideReal num = 0;
  WideReal den = 0;
  for (int j = 0; j <= order; ++j) {
    const auto u = static_cast<std::size_t>(j);
    den += c[u];
    num += static_cast<double>(j + 1) * c[u + 1];
  }
  if (!(den > 0))
    throw NonPositiveSurvivalError("shifted series denominator " + to_text(den) + " <= 0");
  return to_double(-num / (den * delta));
}

std::vector<WideReal> scaled_jet(const AnalyticSurface& s, const Point& p, Axis axis,
                                 double delta, int order) {
  Point dir{};
  dir[index(axis)] = delta;
  return s.program().taylor(p, dir, order).front();
}

void check_shift(const AnalyticSurface& s, const Point& p, Axis axis, double delta) {
  require_axis(s.dimension(), axis);
  require_inside(s.domain(), p);
  (void)s.value(shifted(p, axis, delta));  // domain and positivity at the shifted point
}

constexpr int kFirstOrder = 8;
constexpr int kMaxOrder = 512;
constexpr double kSettled = 1e-13;

}  // namespace

double mu_shifted(const AnalyticSurface& s, const Point& p, Axis axis, double delta, int order) {
  if (order < 1) throw std::invalid_argument("series order must be >= 1");
  if (delta == 0.0) return mu_exact(s, p, axis);
  check_shift(s, p, axis, delta);
  return series_quotient(scaled_jet(s, p, axis, delta, order + 1), order, delta);
}

DmuLimit dmu_limit(const AnalyticSurface& s, const Point& p, Axis axis,
                   const std::vector<double>& deltas) {
  if (deltas.size() < 3) throw std::invalid_argument("dmu_limit needs at least 3 steps");
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
      throw std::invalid_argument("dmu_limit steps must be positive and strictly decreasing");

  const ExactHazard exact(s);
  const double mu0 = exact.mu(p, axis);
  DmuLimit out;
  for (double delta : deltas) {
    check_shift(s, p, axis, delta);
    int order = kFirstOrder;
    std::vector<WideReal> c = scaled_jet(s, p, axis, delta, 2 * order + 1);
    double coarse = series_quotient(c, order, delta);
    double fine = series_quotient(c, 2 * order, delta);
    while (std::abs(fine - coarse) > kSettled * std::max(std::abs(fine), std::abs(coarse))) {
      if (2 * order >= kMaxOrder)
        throw ConvergenceError("shifted series at step " + std::to_string(delta) +
                               " did not settle within " + std::to_string(kMaxOrder) + " terms");
      order *= 2;
      c = scaled_jet(s, p, axis, delta, 2 * order + 1);
      coarse = fine;
      fine = series_quotient(c, 2 * order, delta);
    }
    out.orders.push_back(2 * order);
    out.estimates.push_back((fine - mu0) / delta);
  }

  // Neville's scheme evaluated at delta = 0.
  std::vector<double> t = out.estimates;
  const std::size_t n = t.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      t[i] = (-deltas[i + m] * t[i] + deltas[i] * t[i + 1]) / (deltas[i] - deltas[i + m]);
  out.extrapolated = t[0];
  return out;
}

// ---- grid estimators -------------------------------------------------------

namespace {

struct AxisStencil {
  const std::vector<double>* coords;
  std::size_t node;
  std::size_t stride;  // whole pitches per base step
};

AxisStencil locate(const GridSurface& g, const Point& p, Axis axis, double step) {
  require_axis(g.dimension(), axis);
  require_inside(g.domain(), p);
  for (int i = 0; i < g.dimension(); ++i)
    if (!g.node_index(static_cast<std::size_t>(i), p[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("point " + to_string(p, g.dimension()) + " is not a grid node");
  const auto& a = g.lattice().axis(index(axis));
  const double pitch = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i)
    if (std::abs((a[i] - a[i - 1]) - pitch) > 1e-9 * pitch)
      throw std::invalid_argument(std::string("grid axis ") + axis_name(axis) +
                                  " is not uniformly spaced");
  const double ratio = step / pitch;
  const double whole = std::round(ratio);
  if (!(whole >= 1.0) || std::abs(ratio - whole) > 1e-9 * whole)
    throw std::invalid_argument("step " + std::to_string(step) +
                                " is not a whole multiple of the grid pitch");
  return {&a, *g.node_index(index(axis), p[index(axis)]), static_cast<std::size_t>(whole)};
}

WideReal node_value(const GridSurface& g, Point p, Axis axis, double coordinate) {
  p[index(axis)] = coordinate;
  return g.value(p);  // exact at nodes; rejects non-positive values
}

// -dl/l (direct) or -d ln l from a central difference with half-width h.
double central(EstimatorMethod m, const WideReal& lm, const WideReal& l0, const WideReal& lp,
               double h) {
  if (m == EstimatorMethod::direct) return to_double(-(lp - lm) / (2 * h * l0));
  return -to_double(log(lp / lm)) / (2 * h);
}

}  // namespace

double mu_estimate(const GridSurface& g, const Point& p, Axis axis, const EstimatorSpec& spec) {
  spec.stencil.check(g.dimension());
  const double step = spec.stencil.steps[index(axis)];
  const AxisStencil st = locate(g, p, axis, step);
  const auto& a = *st.coords;
  const std::size_t levels = static_cast<std::size_t>(spec.stencil.richardson_levels);
  const std::size_t reach = st.stride << levels;
  const WideReal l0 = g.value(p);

  if (st.node >= reach && st.node + reach < a.size()) {
    std::vector<double> r(levels + 1);
    for (std::size_t i = 0; i <= levels; ++i) {
      const std::size_t s = st.stride << i;
      const double h = (a[st.node + s] - a[st.node - s]) / 2;
      r[i] = central(spec.method, node_value(g, p, axis, a[st.node - s]), l0,
                     node_value(g, p, axis, a[st.node + s]), h);
    }
    // r[i] uses step 2^i h; eliminate h^2, h^4, ... from fine to coarse.
    for (std::size_t j = 1; j <= levels; ++j) {
      const double w = std::pow(4.0, static_cast<double>(j));
      for (std::size_t i = 0; i + j <= levels; ++i) r[i] = (w * r[i] - r[i + 1]) / (w - 1);
    }
    return r[0];
  }

  if (!spec.one_sided)
    throw BoundaryError("node " + to_string(p, g.dimension()) + " lacks " + axis_name(axis) +
                        " neighbours at step " + std::to_string(step) +
                        (levels ? " with " + std::to_string(levels) + " Richardson levels" : ""));

  // Second-order one-sided difference at the base step, towards the interior.
  const std::size_t s = st.stride;
  int dir = 0;
  if (st.node + 2 * s < a.size())
    dir = 1;
  else if (st.node >= 2 * s)
    dir = -1;
  else
    throw BoundaryError("axis " + std::string(1, axis_name(axis)) +
                        " too short for a one-sided stencil at step " + std::to_string(step));
  const std::size_t i1 = dir > 0 ? st.node + s : st.node - s;
  const std::size_t i2 = dir > 0 ? st.node + 2 * s : st.node - 2 * s;
  const double h = (a[i2] - a[st.node]) / 2;  // signed
  const WideReal l1 = node_value(g, p, axis, a[i1]);
  const WideReal l2 = node_value(g, p, axis, a[i2]);
  if (spec.method == EstimatorMethod::direct) return to_double(-(-3 * l0 + 4 * l1 - l2) / (2 * h * l0));
  return -(4 * to_double(log(l1 / l0)) - to_double(log(l2 / l0))) / (2 * h);
}

// ---- field sweep -----------------------------------------------------------

FieldGrid field(const Surface& s, const Lattice& lattice, const FieldOptions& options) {
  const int dim = dimension(s);
  if (lattice.dimension() != dim)
    throw std::invalid_argument("lattice dimension does not match the surface");
  if (options.axes.empty()) throw std::invalid_argument("no hazard axis requested");
  for (Axis a : options.axes) require_axis(dim, a);
  for (std::size_t k = 0; k < lattice.size(); ++k) require_inside(domain(s), lattice.node(k));

  const auto* grid = std::get_if<GridSurface>(&s);
  if (grid && options.dmu)
    throw std::invalid_argument("hazard rates (dmu) need an analytic surface");
  if (grid) options.estimator.stencil.check(dim);
  std::optional<ExactHazard> exact;
  if (!grid) exact.emplace(std::get<AnalyticSurface>(s));

  FieldGrid out;
  out.lattice = lattice;
  out.axes = options.axes;
  out.has_dmu = options.dmu;
  out.samples.resize(lattice.size());
  std::vector<std::string> errors(lattice.size());
  std::vector<char> boundary_only(lattice.size(), 1);

  parallel_for(lattice.size(), options.threads, [&](std::size_t k) {
    HazardSample& sample = out.samples[k];
    sample.point = lattice.node(k);
    std::string& err = errors[k];
    for (Axis a : options.axes) {
      try {
        sample.mu[index(a)] = grid ? mu_estimate(*grid, sample.point, a, options.estimator)
                                   : exact->mu(sample.point, a);
        if (options.dmu) sample.dmu[index(a)] = exact->dmu(sample.point, a);
      } catch (const BoundaryError& e) {
        if (err.empty()) err = std::string(1, axis_name(a)) + ": " + e.what();
      } catch (const std::exception& e) {
        if (err.empty()) err = std::string(1, axis_name(a)) + ": " + e.what();
        boundary_only[k] = 0;
      }
    }
  });

  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty())
      out.failures.push_back({k, out.samples[k].point, errors[k], boundary_only[k] != 0});
  return out;
}

}  // namespace hazardfield
