#include "hazardfield/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hazardfield/errors.hpp"

namespace hazardfield {

namespace {

constexpr double kEdgeSlack = 1e-12;

[[noreturn]] void outside(const Point& p, int dimension) {
  throw OutOfDomainError("point " + to_string(p, dimension) + " is outside the domain");
}

WideReal checked_positive(WideReal v, const Point& p, int dimension) {
  if (!(v > 0))
    throw NonPositiveSurvivalError("survival " + to_text(v) + " <= 0 at " +
                                   to_string(p, dimension));
  return v;
}

}  // namespace

// ---- DomainBox -------------------------------------------------------------

DomainBox::DomainBox(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty() || intervals_.size() > 3)
    throw std::invalid_argument("DomainBox: dimension must be 1, 2 or 3");
  for (const Interval& iv : intervals_)
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw std::invalid_argument("DomainBox: every interval needs finite lo < hi");
}

bool DomainBox::contains(const Point& p) const noexcept {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const Interval& iv = intervals_[i];
    const double slack = kEdgeSlack * (iv.hi - iv.lo);
    if (!(p[i] >= iv.lo - slack && p[i] <= iv.hi + slack)) return false;
  }
  return true;
}

Lattice DomainBox::lattice(const std::vector<std::size_t>& nodes) const {
  if (nodes.size() != 1 && nodes.size() != intervals_.size())
    throw std::invalid_argument("DomainBox::lattice: one node count per axis expected");
  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const std::size_t n = nodes.size() == 1 ? nodes[0] : nodes[i];
    if (n < 2) throw std::invalid_argument("DomainBox::lattice: at least 2 nodes per axis");
    axes.push_back(linspace(intervals_[i].lo, intervals_[i].hi, n));
  }
  return Lattice(std::move(axes));
}

// ---- AnalyticSurface -------------------------------------------------------

AnalyticSurface::AnalyticSurface(Expr expr, DomainBox domain)
    : expr_(std::move(expr)), domain_(std::move(domain)) {
  for (Axis a : kAllAxes)
    if (expr_.depends_on(a) && !domain_.has(a))
      throw std::invalid_argument(std::string("AnalyticSurface: expression uses ") +
                                  axis_name(a) + " but the domain has no such axis");
  program_ = std::make_shared<const Program>(expr_);
  log_program_ = std::make_shared<const Program>(log_expand(expr_));
}

void AnalyticSurface::check_inside(const Point& p) const {
  if (!domain_.contains(p)) outside(p, dimension());
}

WideReal AnalyticSurface::raw_value(const Point& p) const {
  check_inside(p);
  return program_->wide_value(p);
}

WideReal AnalyticSurface::value(const Point& p) const {
  return checked_positive(raw_value(p), p, dimension());
}

double AnalyticSurface::log_value(const Point& p) const {
  check_inside(p);
  try {
    const double v = log_program_->value(p);
    if (std::isfinite(v)) return v;
  } catch (const DomainError&) {
  }
  return log_abs(value(p));
}

// ---- GridSurface -----------------------------------------------------------

namespace {

std::vector<Interval> bounding(const std::vector<std::vector<double>>& axes) {
  std::vector<Interval> out;
  for (const auto& a : axes) {
    if (a.size() < 2) throw std::invalid_argument("GridSurface: every axis needs >= 2 nodes");
    for (std::size_t i = 1; i < a.size(); ++i)
      if (!(a[i - 1] < a[i]))
        throw std::invalid_argument("GridSurface: axis coordinates must increase strictly");
    out.push_back({a.front(), a.back()});
  }
  return out;
}

}  // namespace

GridSurface::GridSurface(std::vector<std::vector<double>> axes, std::vector<WideReal> values)
    : domain_(bounding(axes)) {
  lattice_ = Lattice(std::move(axes));
  if (values.size() != lattice_.size())
    throw std::invalid_argument("GridSurface: value count " + std::to_string(values.size()) +
                                " != node count " + std::to_string(lattice_.size()));
  values_ = std::move(values);
}

std::optional<std::size_t> GridSurface::node_index(std::size_t axis, double coordinate) const {
  const auto& a = lattice_.axis(axis);
  auto it = std::lower_bound(a.begin(), a.end(), coordinate);
  if (it == a.end() || *it != coordinate) return std::nullopt;
  return static_cast<std::size_t>(it - a.begin());
}

WideReal GridSurface::raw_value(const Point& p) const {
  const int d = dimension();
  // Strict bounds: the grid does not extrapolate.
  std::array<std::size_t, 3> cell{};
  std::array<double, 3> t{};
  for (int i = 0; i < d; ++i) {
    const auto& a = lattice_.axis(static_cast<std::size_t>(i));
    const double c = p[static_cast<std::size_t>(i)];
    if (!(c >= a.front() && c <= a.back())) outside(p, d);
    auto it = std::upper_bound(a.begin(), a.end(), c);
    std::size_t hi = static_cast<std::size_t>(it - a.begin());
    if (hi == a.size()) hi = a.size() - 1;
    const std::size_t lo = hi - 1;
    cell[static_cast<std::size_t>(i)] = lo;
    t[static_cast<std::size_t>(i)] = (c - a[lo]) / (a[hi] - a[lo]);
  }
  WideReal sum = 0;
  for (unsigned corner = 0; corner < (1U << d); ++corner) {
    double w = 1.0;
    std::array<std::size_t, 3> idx{};
    for (int i = 0; i < d; ++i) {
      const bool upper = (corner >> i) & 1U;
      const auto ui = static_cast<std::size_t>(i);
      w *= upper ? t[ui] : 1.0 - t[ui];
      idx[ui] = cell[ui] + (upper ? 1 : 0);
    }
    if (w == 0.0) continue;
    sum += values_[lattice_.flatten(idx)] * w;
  }
  return sum;
}

WideReal GridSurface::value(const Point& p) const {
  return checked_positive(raw_value(p), p, dimension());
}

double GridSurface::log_value(const Point& p) const { return log_abs(value(p)); }

// ---- variant helpers -------------------------------------------------------

WideReal value(const Surface& s, const Point& p) {
  return std::visit([&](const auto& v) { return v.value(p); }, s);
}

double log_value(const Surface& s, const Point& p) {
  return std::visit([&](const auto& v) { return v.log_value(p); }, s);
}

const DomainBox& domain(const Surface& s) {
  return std::visit([](const auto& v) -> const DomainBox& { return v.domain(); }, s);
}

int dimension(const Surface& s) {
  return std::visit([](const auto& v) { return v.dimension(); }, s);
}

std::vector<Violation> validate_positive(const Surface& s, std::size_t sampling) {
  std::vector<Violation> out;
  if (const auto* g = std::get_if<GridSurface>(&s)) {
    for (std::size_t k = 0; k < g->values().size(); ++k)
      if (!(g->values()[k] > 0))
        out.push_back({g->lattice().node(k), g->values()[k], "non-positive survival"});
    return out;
  }
  const auto& a = std::get<AnalyticSurface>(s);
  if (sampling < 2) throw std::invalid_argument("validate_positive: sampling must be >= 2");
  const Lattice lat = a.domain().lattice({sampling});
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const Point p = lat.node(k);
    try {
      WideReal v = a.raw_value(p);
      if (!(v > 0)) out.push_back({p, v, "non-positive survival"});
    } catch (const DomainError& e) {
      out.push_back({p, std::nullopt, e.what()});
    }
  }
  return out;
}

GridSurface to_grid(const AnalyticSurface& s, const std::vector<std::size_t>& nodes) {
  const Lattice lat = s.domain().lattice(nodes);
  std::vector<WideReal> values(lat.size());
  for (std::size_t k = 0; k < lat.size(); ++k) values[k] = s.raw_value(lat.node(k));
  return GridSurface(lat.axes(), std::move(values));
}

}  // namespace hazardfield
