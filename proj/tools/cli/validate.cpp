#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <hazardfield/calculus.hpp>
#include <hazardfield/errors.hpp>
#include <hazardfield/expr.hpp>
#include <hazardfield/taylor.hpp>

#include "cli.hpp"
#include "commands.hpp"

namespace hazardfield::cli {

namespace {

struct Check {
  std::string name;
  double measured;
  double bound;
  bool pass;
};

class Suite {
 public:
  explicit Suite(std::ostream& out) : out_(out) {}

  // Passes when measured <= bound.
  void at_most(const std::string& name, double measured, double bound) {
    emit({name, measured, bound, measured <= bound});
  }
  // Passes when measured < bound.
  void below(const std::string& name, double measured, double bound) {
    emit({name, measured, bound, measured < bound});
  }
  // Runs `body`; an exception fails the check.
  template <class F>
  void guarded(const std::string& name, double bound, F body) {
    try {
      body();
    } catch (const std::exception& e) {
      out_ << "# " << name << ": " << e.what() << '\n';
      emit({name, NAN, bound, false});
    }
  }
  bool all_passed() const noexcept { return failures_ == 0; }

 private:
  void emit(const Check& c) {
    out_ << c.name << ',' << number(c.measured) << ',' << number(c.bound) << ','
         << (c.pass ? "PASS" : "FAIL") << '\n';
    if (!c.pass) ++failures_;
  }

  std::ostream& out_;
  int failures_ = 0;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double rel(const WideReal& a, const WideReal& b) {
  if (a == b) return 0.0;
  return to_double(abs(a - b) / abs(b));
}

double normalised_gap(const Telescope& t) {
  const WideReal scale = abs(t.lhs) > 1 ? WideReal(abs(t.lhs)) : WideReal(1);
  return to_double(abs(t.lhs - t.rhs) / scale);
}

const DomainBox kBox({{5.0, 85.0}, {0.5, 5.5}});
const double kA = 0.5, kB = 0.5, kK = 100.0;

AnalyticSurface example1() {
  return AnalyticSurface(parse("1 - x^0.5 * y^0.05 / 100"), kBox);
}
AnalyticSurface example2() { return AnalyticSurface(parse("5 ^ sqrt(y) * 7 ^ (x^3)"), kBox); }

// Random polynomial of total degree <= 6 in x and y.
std::string random_polynomial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> keep(0, 2);
  std::string s = number(coef(rng));
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; i + j <= 6; ++j)
      if ((i + j) > 0 && keep(rng) == 0)
        s += " + " + number(coef(rng)) + " * x^" + std::to_string(i) + " * y^" + std::to_string(j);
  return s;
}

void default_suite(Suite& suite, unsigned threads) {
  const AnalyticSurface e1 = example1();
  const AnalyticSurface e2 = example2();
  const Lattice lat = DomainBox({{10.0, 80.0}, {1.0, 5.0}}).lattice({71, 41});

  suite.at_most("positivity_example1", static_cast<double>(validate_positive(e1, 41).size()), 0);
  suite.at_most("positivity_example2", static_cast<double>(validate_positive(e2, 41).size()), 0);

  suite.guarded("mu_closed_form_example1", 1e-12, [&] {
    const double c = kB / std::sqrt(kK);
    const ExactHazard h(e1);
    double worst = 0;
    for (std::size_t k = 0; k < lat.size(); ++k) {
      const Point p = lat.node(k);
      const double xa = std::pow(p[0], kA), yc = std::pow(p[1], c);
      const double mx = kA * std::pow(p[0], kA - 1) * yc / (kK - xa * yc);
      const double my = c * xa * std::pow(p[1], c - 1) / (kK - xa * yc);
      worst = std::max({worst, rel(h.mu(p, Axis::x), mx), rel(h.mu(p, Axis::y), my)});
    }
    suite.at_most("mu_closed_form_example1", worst, 1e-12);
  });

  suite.guarded("mu_closed_form_example2", 1e-12, [&] {
    const ExactHazard h(e2);
    double worst = 0;
    for (std::size_t k = 0; k < lat.size(); ++k) {
      const Point p = lat.node(k);
      const double mx = -3 * p[0] * p[0] * std::log(7.0);
      const double my = -std::log(5.0) / (2 * std::sqrt(p[1]));
      worst = std::max({worst, rel(h.mu(p, Axis::x), mx), rel(h.mu(p, Axis::y), my)});
    }
    suite.at_most("mu_closed_form_example2", worst, 1e-12);
  });

  suite.guarded("telescope_random_polynomials", 1e-12, [&] {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> centre(-1.0, 1.0), step(0.1, 0.5);
    std::uniform_int_distribution<int> kk(1, 3);
    const DomainBox box({{-3.0, 3.0}, {-3.0, 3.0}});
    double worst = 0;
    for (int n = 0; n < 50; ++n) {
      const AnalyticSurface s(parse(random_polynomial(rng)), box);
      const Point c{centre(rng), centre(rng), 0};
      const double dx = step(rng), dy = step(rng);
      const int k = kk(rng);
      worst = std::max({worst, normalised_gap(telescope_1d(s, c, dx, k)),
                        normalised_gap(telescope_2d(s, c, dx, dy, k)),
                        normalised_gap(axis_telescope(s, c, dy, Axis::y, k))});
    }
    suite.at_most("telescope_random_polynomials", worst, 1e-12);
  });

  suite.guarded("telescope_examples", 1e-12, [&] {
    const double worst =
        std::max({normalised_gap(telescope_1d(e1, {20, 1, 0}, 0.5, 2)),
                  normalised_gap(telescope_2d(e1, {20, 2, 0}, 0.5, 0.1, 2)),
                  normalised_gap(axis_telescope(e2, {10, 4, 0}, 0.05, Axis::y, 2))});
    suite.at_most("telescope_examples", worst, 1e-12);
  });

  suite.guarded("reconstruct_derivative_example2", 1e-6, [&] {
    const Point p{10, 4, 0};
    const WideReal oracle = evaluate_wide(differentiate(e2.expr(), Axis::x), p);
    suite.at_most("reconstruct_derivative_example2",
                  rel(reconstruct_derivative(e2, p, 0.01, 2), oracle), 1e-6);
  });

  suite.guarded("deaths_integral_example1", 1e-10, [&] {
    const WideReal d = deaths_integral(e1, {0, 1, 0}, 10, 10, QuadratureSpec{1024});
    const WideReal drop = e1.value({10, 1, 0}) - e1.value({20, 1, 0});
    suite.at_most("deaths_integral_example1", to_double(abs(d - drop)), 1e-10);
  });

  suite.guarded("corrected_integrand", 1e-8, [&] {
    const IdentityCheck a = corrected_integrand_check(e1, {0, 1, 0}, 10, 10, 0.5, {1024});
    const IdentityCheck b = corrected_integrand_check(e2, {0, 4, 0}, 10, 5, 0.1, {2048});
    suite.at_most("corrected_integrand", std::max(rel(a.lhs, a.rhs), rel(b.lhs, b.rhs)), 1e-8);
  });

  suite.guarded("region_mean_example2", 1e-9, [&] {
    const RegionMeanReport r =
        region_mean(e2, Axis::x, Region{{10, 20}, {1, 5}}, {64, 64}, {}, {}, threads);
    suite.at_most("region_mean_bounds", (r.min <= r.mean && r.mean <= r.max) ? 0.0 : 1.0, 0);
    suite.at_most("region_mean_example2", rel(r.mean, -700 * std::log(7.0)), 1e-9);
  });

  suite.guarded("estimator_oracle_example1", 1e-6, [&] {
    const AnalyticSurface s(e1.expr(), DomainBox({{20.0, 21.0}, {2.0, 3.0}}));
    const GridSurface g = to_grid(s, {101, 101});
    EstimatorSpec spec;
    spec.stencil.steps = {0.01, 0.01, 0};
    spec.stencil.richardson_levels = 2;
    const ExactHazard h(s);
    double worst = 0;
    for (std::size_t i = 4; i <= 96; i += 23)
      for (std::size_t j = 4; j <= 96; j += 23) {
        const Point p = g.lattice().node(g.lattice().flatten({i, j, 0}));
        for (Axis a : {Axis::x, Axis::y})
          worst = std::max(worst, rel(mu_estimate(g, p, a, spec), h.mu(p, a)));
      }
    suite.at_most("estimator_oracle_example1", worst, 1e-6);
  });

  suite.guarded("dmu_limit_example2", 1e-4, [&] {
    double worst = 0;
    for (const Point& p : {Point{10, 4, 0}, Point{15, 2, 0}, Point{30, 1.5, 0}}) {
      for (Axis a : {Axis::x, Axis::y}) {
        const double d0 = std::min(0.1, 1.0 / std::abs(mu_exact(e2, p, a)));
        const DmuLimit lim = dmu_limit(e2, p, a, {d0, d0 / 2, d0 / 4});
        worst = std::max(worst, rel(lim.extrapolated, dmu_exact(e2, p, a)));
      }
    }
    suite.at_most("dmu_limit_example2", worst, 1e-4);
  });

  suite.guarded("no_deaths_sign", 0, [&] {
    // Example 1 decreases along x, so its first-order symmetric difference is negative.
    suite.below("no_deaths_sign", to_double(symmetric_difference_1d(e1, {20, 2, 0}, 0.5, 1)), 0);
  });
}

void expression_suite(Suite& suite, const AnalyticSurface& s) {
  suite.at_most("positivity_expression", static_cast<double>(validate_positive(s, 21).size()), 0);
  const DomainBox& box = s.domain();
  Point c{};
  Point steps{};
  for (int i = 0; i < box.dimension(); ++i) {
    const Interval& iv = box.interval(static_cast<std::size_t>(i));
    c[static_cast<std::size_t>(i)] = (iv.lo + iv.hi) / 2;
    steps[static_cast<std::size_t>(i)] = (iv.hi - iv.lo) / 20;
  }
  suite.guarded("telescope_expression", 1e-12, [&] {
    suite.at_most("telescope_expression", normalised_gap(telescope(s, c, steps, 2)), 1e-12);
  });
  suite.guarded("reconstruct_derivative_expression", 1e-6, [&] {
    const WideReal oracle = evaluate_wide(differentiate(s.expr(), Axis::x), c);
    const WideReal r = reconstruct_derivative(s, c, steps[0], 2);
    suite.at_most("reconstruct_derivative_expression",
                  oracle == 0 ? to_double(abs(r)) : rel(r, oracle), 1e-6);
  });
}

}  // namespace

int cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& /*err*/) {
  Suite suite(out);
  if (!c.grid.empty()) {
    const auto g = std::get<GridSurface>(load_surface(c));
    suite.at_most("positivity_grid", static_cast<double>(validate_positive(g, 2).size()), 0);
  } else if (!c.expr.empty()) {
    expression_suite(suite, std::get<AnalyticSurface>(load_surface(c)));
  } else {
    default_suite(suite, c.threads);
  }
  return suite.all_passed() ? kSuccess : kValidationFailure;
}

}  // namespace hazardfield::cli
