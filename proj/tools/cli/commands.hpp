#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <hazardfield/hazard.hpp>
#include <hazardfield/surface.hpp>

namespace hazardfield::cli {

/// Bad flag values, missing inputs, unreadable files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string expr;
  std::string grid;
  std::string domain;
  std::string lattice;
  std::string delta;
  int order = 2;
  int richardson = 0;
  std::string method = "direct";
  bool one_sided = false;
  std::string out = ".";
  std::string axes;
  bool dmu = false;
  std::string figure = "all";
  std::string slice;
  std::optional<double> x;
  std::optional<double> m;
  std::string region;
  std::string axis = "x";
  std::string panels;
  unsigned threads = 0;
};

// Flag value parsing; all throw ConfigError.
std::vector<double> parse_numbers(const std::string& text, const std::string& flag);
std::vector<std::size_t> parse_counts(const std::string& text, const std::string& flag);
DomainBox parse_domain(const std::string& text);
std::vector<Axis> parse_axes(const std::string& text, int dimension);
EstimatorMethod parse_method(const std::string& text);

/// Analytic surface from --expr/--domain or grid from --grid.
Surface load_surface(const RunConfig& c);
EstimatorSpec estimator_from(const RunConfig& c, const Surface& s);

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_estimate(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_figures(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_integrate(const RunConfig& c, std::ostream& out, std::ostream& err);

/// "%.17g".
std::string number(double v);

}  // namespace hazardfield::cli
