#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <hazardfield/calculus.hpp>
#include <hazardfield/errors.hpp>
#include <hazardfield/expr.hpp>
#include <hazardfield/parallel.hpp>

#include "cli.hpp"

namespace hazardfield::cli {

namespace fs = std::filesystem;

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double to_number(const std::string& s, const std::string& flag) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (s.empty() || ec != std::errc() || ptr != e || !std::isfinite(v))
    throw ConfigError(flag + ": '" + s + "' is not a finite number");
  return v;
}

fs::path output_dir(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("--out: cannot create directory " + c.out);
  return dir;
}

Lattice lattice_for(const RunConfig& c, const DomainBox& box, std::vector<std::size_t> dflt) {
  std::vector<std::size_t> n = c.lattice.empty() ? dflt : parse_counts(c.lattice, "--lattice");
  if (n.size() == 1) n.assign(static_cast<std::size_t>(box.dimension()), n[0]);
  if (n.size() < static_cast<std::size_t>(box.dimension()))
    throw ConfigError("--lattice: one count per domain axis expected");
  n.resize(static_cast<std::size_t>(box.dimension()));
  for (std::size_t v : n)
    if (v < 2) throw ConfigError("--lattice: at least 2 nodes per axis");
  return box.lattice(n);
}

void report_failures(const FieldGrid& f, std::ostream& err, bool skip_boundary) {
  for (const FieldFailure& bad : f.failures) {
    if (skip_boundary && bad.boundary) continue;
    err << "node " << bad.node << " " << to_string(bad.point, f.lattice.dimension()) << ": "
        << bad.reason << '\n';
  }
}

std::size_t hard_failures(const FieldGrid& f) {
  std::size_t n = 0;
  for (const FieldFailure& bad : f.failures) n += bad.boundary ? 0 : 1;
  return n;
}

}  // namespace

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const std::string& s : split(text, ',')) out.push_back(to_number(s, flag));
  if (out.empty()) throw ConfigError(flag + ": no values");
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  for (double v : parse_numbers(text, flag)) {
    if (v < 1 || v != std::floor(v) || v > 1e8)
      throw ConfigError(flag + ": counts must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

DomainBox parse_domain(const std::string& text) {
  if (text.empty()) throw ConfigError("--domain is required with --expr");
  std::vector<Interval> iv;
  for (const std::string& part : split(text, ',')) {
    const auto bounds = split(part, ':');
    if (bounds.size() != 2) throw ConfigError("--domain: expected lo:hi, got '" + part + "'");
    iv.push_back({to_number(bounds[0], "--domain"), to_number(bounds[1], "--domain")});
  }
  try {
    return DomainBox(iv);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--domain: ") + e.what());
  }
}

std::vector<Axis> parse_axes(const std::string& text, int dimension) {
  std::vector<Axis> out;
  if (text.empty()) {
    for (int i = 0; i < dimension; ++i) out.push_back(static_cast<Axis>(i));
    return out;
  }
  for (const std::string& s : split(text, ',')) {
    const auto a = s.size() == 1 ? axis_from_name(s[0]) : std::nullopt;
    if (!a || static_cast<int>(index(*a)) >= dimension)
      throw ConfigError("--axes: '" + s + "' is not an axis of the surface");
    out.push_back(*a);
  }
  return out;
}

EstimatorMethod parse_method(const std::string& text) {
  if (text == "direct") return EstimatorMethod::direct;
  if (text == "log") return EstimatorMethod::log;
  throw ConfigError("--method must be direct or log");
}

Surface load_surface(const RunConfig& c) {
  if (!c.expr.empty() && !c.grid.empty()) throw ConfigError("give either --expr or --grid");
  if (!c.grid.empty()) {
    if (!fs::exists(c.grid)) throw ConfigError("--grid: no such file " + c.grid);
    try {
      return read_grid_csv(fs::path(c.grid));
    } catch (const FormatError& e) {
      throw ConfigError(c.grid + ": " + e.what());
    }
  }
  if (c.expr.empty()) throw ConfigError("--expr or --grid is required");
  const DomainBox box = parse_domain(c.domain);
  try {
    return AnalyticSurface(parse(c.expr), box);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("--expr: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--expr: ") + e.what());
  }
}

EstimatorSpec estimator_from(const RunConfig& c, const Surface& s) {
  EstimatorSpec e;
  e.method = parse_method(c.method);
  e.one_sided = c.one_sided;
  e.stencil.k = c.order;
  e.stencil.richardson_levels = c.richardson;
  const int dim = dimension(s);
  std::vector<double> steps;
  if (!c.delta.empty()) {
    steps = parse_numbers(c.delta, "--delta");
    if (steps.size() == 1) steps.assign(static_cast<std::size_t>(dim), steps[0]);
    if (steps.size() < static_cast<std::size_t>(dim))
      throw ConfigError("--delta: one step per axis expected");
  } else if (const auto* g = std::get_if<GridSurface>(&s)) {
    for (int i = 0; i < dim; ++i) {
      const auto& a = g->lattice().axis(static_cast<std::size_t>(i));
      steps.push_back((a.back() - a.front()) / static_cast<double>(a.size() - 1));
    }
  } else {
    steps.assign(static_cast<std::size_t>(dim), 0.01);
  }
  for (int i = 0; i < dim; ++i) {
    const double d = steps[static_cast<std::size_t>(i)];
    if (!(d > 0.0)) throw ConfigError("--delta: steps must be > 0");
    e.stencil.steps[static_cast<std::size_t>(i)] = d;
  }
  return e;
}

// ---- eval ------------------------------------------------------------------

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Surface s = load_surface(c);
  const int dim = dimension(s);
  const auto* grid = std::get_if<GridSurface>(&s);
  const Lattice lat = grid ? grid->lattice() : lattice_for(c, domain(s), {71, 41, 11});
  FieldOptions opt;
  opt.axes = parse_axes(c.axes, dim);
  opt.dmu = c.dmu;
  if (grid && c.dmu) throw ConfigError("--dmu needs --expr");
  if (grid) opt.estimator = estimator_from(c, s);
  opt.threads = c.threads;
  const fs::path dir = output_dir(c);

  const FieldGrid f = field(s, lat, opt);
  write_field_csv(dir / "field.csv", f);
  if (const auto* a = std::get_if<AnalyticSurface>(&s)) {
    try {
      std::vector<WideReal> values(lat.size());
      parallel_for(lat.size(), c.threads, [&](std::size_t k) { values[k] = a->raw_value(lat.node(k)); });
      write_grid_csv(dir / "surface.csv", GridSurface(lat.axes(), std::move(values)));
    } catch (const DomainError& e) {
      err << "warning: surface.csv not written: " << e.what() << '\n';
    }
  }
  out << "nodes," << lat.size() << '\n' << "failed," << f.failures.size() << '\n';
  report_failures(f, err, false);
  return f.failures.empty() ? kSuccess : kPartialFailure;
}

// ---- estimate --------------------------------------------------------------

int cmd_estimate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.grid.empty()) throw ConfigError("estimate needs --grid");
  const Surface s = load_surface(c);
  const auto& g = std::get<GridSurface>(s);
  FieldOptions opt;
  opt.axes = parse_axes(c.axes, g.dimension());
  opt.estimator = estimator_from(c, s);
  opt.threads = c.threads;
  const fs::path dir = output_dir(c);

  const FieldGrid f = field(s, g.lattice(), opt);
  write_field_csv(dir / "field.csv", f);
  const std::size_t boundary = f.failures.size() - hard_failures(f);
  out << "nodes," << g.lattice().size() << '\n'
      << "boundary," << boundary << '\n'
      << "failed," << hard_failures(f) << '\n';
  if (boundary == g.lattice().size())
    err << "warning: every node is a boundary node at this step; the field is empty"
        << (c.one_sided ? "" : " (see --one-sided)") << '\n';
  report_failures(f, err, true);
  return hard_failures(f) == 0 ? kSuccess : kPartialFailure;
}

// ---- figures ---------------------------------------------------------------

namespace {

constexpr double kFigureK = 100.0;

// Example 1 with the covariate exponent b / sqrt(K) substituted numerically.
std::string example1(double a, double b, double k) {
  return "1 - x^" + number(a) + " * y^" + number(b / std::sqrt(k)) + " / " + number(k);
}

void write_surface_values(const fs::path& path, const AnalyticSurface& s, const Lattice& lat,
                          unsigned threads, std::size_t& failures, std::ostream& err) {
  std::vector<std::optional<WideReal>> v(lat.size());
  std::vector<std::string> why(lat.size());
  parallel_for(lat.size(), threads, [&](std::size_t k) {
    try {
      v[k] = s.value(lat.node(k));
    } catch (const std::exception& e) {
      why[k] = e.what();
    }
  });
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "x,y,l\n";
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const Point p = lat.node(k);
    out << number(p[0]) << ',' << number(p[1]) << ',';
    if (v[k]) out << to_text(*v[k]);
    out << '\n';
    if (!v[k]) {
      ++failures;
      err << path.filename().string() << ": node " << k << " " << to_string(p, 2) << ": "
          << why[k] << '\n';
    }
  }
}

}  // namespace

int cmd_figures(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DomainBox box = c.domain.empty() ? DomainBox({{10.0, 80.0}, {1.0, 5.0}})
                                         : parse_domain(c.domain);
  if (box.dimension() != 2) throw ConfigError("--domain: figures are over x and y");
  const Lattice lat = lattice_for(c, box, {71, 41});
  const fs::path dir = output_dir(c);
  std::vector<int> ids;
  if (c.figure == "all") ids = {1, 2, 3};
  else ids = {std::stoi(c.figure)};

  std::size_t failures = 0;
  for (int id : ids) {
    const fs::path manifest = dir / ("figure" + std::to_string(id) + "_manifest.csv");
    std::ofstream mf(manifest);
    if (!mf) throw ConfigError("cannot write " + manifest.string());
    mf << "figure," << id << '\n';
    for (int j = 1; j <= 9; ++j) {
      const double a = j / 10.0;
      const double b = (10 - j) / 10.0;
      const AnalyticSurface s(parse(example1(a, b, kFigureK)), box);
      const std::string name = "figure" + std::to_string(id) + "_panel" + std::to_string(j) + ".csv";
      if (id == 1) {
        write_surface_values(dir / name, s, lat, c.threads, failures, err);
      } else {
        FieldOptions opt;
        opt.axes = {id == 2 ? Axis::x : Axis::y};
        opt.threads = c.threads;
        const FieldGrid f = field(s, lat, opt);
        write_field_csv(dir / name, f);
        failures += f.failures.size();
        for (const FieldFailure& bad : f.failures)
          err << name << ": node " << bad.node << " " << to_string(bad.point, 2) << ": "
              << bad.reason << '\n';
      }
      mf << "panel," << id << "(a-" << j << ")," << number(a) << ',' << number(b) << ','
         << number(kFigureK) << ',' << name << '\n';
    }
    out << "figure," << id << "," << manifest.string() << '\n';
  }
  return failures == 0 ? kSuccess : kPartialFailure;
}

// ---- integrate -------------------------------------------------------------

int cmd_integrate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Surface s = load_surface(c);
  const int dim = dimension(s);
  const EstimatorSpec est = std::holds_alternative<GridSurface>(s) ? estimator_from(c, s)
                                                                   : EstimatorSpec{};
  if (!c.x && c.region.empty()) throw ConfigError("integrate needs --x/--m or --region");

  if (c.x) {
    if (!c.m) throw ConfigError("--x needs --m");
    Point slice{};
    for (int i = 1; i < dim; ++i) slice[static_cast<std::size_t>(i)] = domain(s).interval(static_cast<std::size_t>(i)).lo;
    if (!c.slice.empty()) {
      const auto v = parse_numbers(c.slice, "--slice");
      if (v.size() != static_cast<std::size_t>(dim - 1))
        throw ConfigError("--slice: one value per non-age axis expected");
      for (int i = 1; i < dim; ++i) slice[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i - 1)];
    }
    const double x = *c.x, m = *c.m;
    QuadratureSpec q;
    if (!c.panels.empty()) q.panels = parse_counts(c.panels, "--panels").front();
    if (q.panels % 2 != 0) throw ConfigError("--panels must be even");

    const WideReal deaths = deaths_integral(s, slice, x, m, q, est);
    Point p0 = slice, p1 = slice;
    p0[0] = x;
    p1[0] = x + m;
    out << "deaths," << to_text(deaths) << '\n'
        << "survivor_drop," << to_text(value(s, p0) - value(s, p1)) << '\n';
    if (const auto* a = std::get_if<AnalyticSurface>(&s)) {
      const double delta = c.delta.empty() ? 0.1 : parse_numbers(c.delta, "--delta").front();
      try {
        const IdentityCheck id = corrected_integrand_check(*a, slice, x, m, delta, q);
        out << "corrected_lhs," << to_text(id.lhs) << '\n'
            << "corrected_rhs," << to_text(id.rhs) << '\n';
      } catch (const OutOfDomainError& e) {
        err << "note: corrected-integrand check skipped: " << e.what() << '\n';
      }
      try {
        const SpanSlope sl = span_slope_check(*a, slice, x, m, q, c.delta.empty() ? 0.01 : delta,
                                              c.order);
        out << "derivative_integral," << to_text(sl.integral_of_derivative) << '\n'
            << "endpoint_difference," << to_text(sl.endpoint_difference) << '\n'
            << "mean_value_slope," << to_text(sl.mean_value_slope) << '\n';
      } catch (const OutOfDomainError& e) {
        err << "note: span slope check skipped: " << e.what() << '\n';
      }
    }
  }

  if (!c.region.empty()) {
    const DomainBox r = parse_domain(c.region);
    if (r.dimension() != 2) throw ConfigError("--region: expected xlo:xhi,ylo:yhi");
    std::array<std::size_t, 2> panels{64, 64};
    if (!c.panels.empty() && !c.x) {
      const auto v = parse_counts(c.panels, "--panels");
      panels = {v[0], v.size() > 1 ? v[1] : v[0]};
    }
    const Axis axis = *axis_from_name(c.axis[0]);
    const RegionMeanReport rep =
        region_mean(s, axis, Region{r.interval(0), r.interval(1)}, panels, est, Point{}, c.threads);
    out << "region_mean," << number(rep.mean) << '\n'
        << "region_min," << number(rep.min) << '\n'
        << "region_max," << number(rep.max) << '\n'
        << "attaining_point," << number(rep.attaining_point[0]) << ','
        << number(rep.attaining_point[1]) << '\n'
        << "attaining_value," << number(rep.attaining_value) << '\n';
  }
  return kSuccess;
}

}  // namespace hazardfield::cli
