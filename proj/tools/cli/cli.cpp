#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include <hazardfield/errors.hpp>

#include "commands.hpp"

namespace hazardfield::cli {

namespace {

const char* const kSubcommands[] = {"eval", "estimate", "figures", "validate", "integrate"};

bool is_flag(const std::string& key) { return key == "one-sided" || key == "dmu"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Flat key=value lines become "--key value" tokens placed before the real
// arguments; with take-last option policy the command line wins.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw ConfigError(path + ":" + std::to_string(n) + ": invalid key '" + key + "'");
    if (is_flag(key)) {
      if (value == "true" || value == "1" || value == "yes") tokens.push_back("--" + key);
      else if (value != "false" && value != "0" && value != "no")
        throw ConfigError(path + ":" + std::to_string(n) + ": " + key + " takes true or false");
      continue;
    }
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

unsigned threads_from_env() {
  const char* env = std::getenv("HAZARDFIELD_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) throw ConfigError("HAZARDFIELD_THREADS must be a non-negative integer");
  return static_cast<unsigned>(v);
}

void add_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--expr", c.expr, "Survival expression in x, y, z");
  sub.add_option("--grid", c.grid, "Survival grid CSV (header x[,y[,z]],l)");
  sub.add_option("--domain", c.domain, "lo:hi[,lo:hi[,lo:hi]]");
  sub.add_option("--lattice", c.lattice, "Nodes per axis n[,n[,n]]");
  sub.add_option("--delta", c.delta, "Step per axis v[,v[,v]]");
  sub.add_option("--order", c.order, "Telescope index k")->check(CLI::PositiveNumber);
  sub.add_option("--richardson", c.richardson, "Richardson levels")->check(CLI::NonNegativeNumber);
  sub.add_option("--method", c.method, "direct|log")->check(CLI::IsMember({"direct", "log"}));
  sub.add_flag("--one-sided", c.one_sided, "One-sided differences at grid boundaries");
  sub.add_option("--out", c.out, "Output directory");
  sub.add_option("--config", "Flat key=value file; command-line flags win");
  sub.add_option("--axes", c.axes, "Hazard axes, e.g. x,y");
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app("Force-of-mortality fields from survival surfaces", "hazardfield");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Exact hazard field of an expression (or grid)");
  add_options(*eval, c);
  eval->add_flag("--dmu", c.dmu, "Also write hazard rates dmu");

  auto* estimate = app.add_subcommand("estimate", "Estimated hazard field of a grid CSV");
  add_options(*estimate, c);

  auto* figures = app.add_subcommand("figures", "Regenerate the figure panel data");
  add_options(*figures, c);
  figures->add_option("--figure", c.figure, "1, 2, 3 or all")
      ->check(CLI::IsMember({"1", "2", "3", "all"}));

  auto* validate = app.add_subcommand("validate", "Run the identity suite");
  add_options(*validate, c);

  auto* integrate = app.add_subcommand("integrate", "Deaths integral and region mean");
  add_options(*integrate, c);
  integrate->add_option("--slice", c.slice, "Fixed y[,z] for the age integral");
  integrate->add_option("--x", c.x, "Lower age limit");
  integrate->add_option("--m", c.m, "Age span length")->check(CLI::PositiveNumber);
  integrate->add_option("--region", c.region, "xlo:xhi,ylo:yhi");
  integrate->add_option("--axis", c.axis, "Hazard axis for the region mean")
      ->check(CLI::IsMember({"x", "y", "z"}));
  integrate->add_option("--panels", c.panels, "Simpson panels n (age) or nx,ny (region)");

  try {
    std::vector<std::string> args = raw_args;
    const std::string config = find_config(args);
    if (!config.empty() && !args.empty() &&
        std::find(std::begin(kSubcommands), std::end(kSubcommands), args[0]) !=
            std::end(kSubcommands)) {
      const auto tokens = config_tokens(config);
      args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
    c.threads = threads_from_env();
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (eval->parsed()) return cmd_eval(c, out, err);
    if (estimate->parsed()) return cmd_estimate(c, out, err);
    if (figures->parsed()) return cmd_figures(c, out, err);
    if (validate->parsed()) return cmd_validate(c, out, err);
    if (integrate->parsed()) return cmd_integrate(c, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kPartialFailure;
  }
  return kConfigError;
}

}  // namespace hazardfield::cli
