#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hazardfield/errors.hpp"
#include "hazardfield/surface.hpp"

namespace hazardfield {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_coordinate(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw FormatError(line, "malformed coordinate '" + s + "'");
  return v;
}

}  // namespace

GridSurface read_grid_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FormatError(1, "missing header");
  ++line_no;
  const auto header = split(line);
  static const std::vector<std::string> expected[] = {
      {"x", "l"}, {"x", "y", "l"}, {"x", "y", "z", "l"}};
  int dim = 0;
  for (int d = 0; d < 3; ++d)
    if (header == expected[d]) dim = d + 1;
  if (dim == 0) throw FormatError(1, "header must be x,l or x,y,l or x,y,z,l");

  std::vector<std::array<double, 3>> coords;
  std::vector<std::size_t> lines;
  std::vector<WideReal> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != static_cast<std::size_t>(dim) + 1)
      throw FormatError(line_no, "expected " + std::to_string(dim + 1) + " fields, found " +
                                     std::to_string(cells.size()));
    std::array<double, 3> c{};
    for (int i = 0; i < dim; ++i)
      c[static_cast<std::size_t>(i)] = parse_coordinate(cells[static_cast<std::size_t>(i)], line_no);
    try {
      values.push_back(parse_wide(cells.back()));
    } catch (const std::invalid_argument&) {
      throw FormatError(line_no, "malformed value '" + cells.back() + "'");
    }
    coords.push_back(c);
    lines.push_back(line_no);
  }
  if (coords.empty()) throw FormatError(line_no, "no data rows");

  // Axis i's nodes are the distinct values of column i in order of appearance.
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(dim));
  std::size_t stride = 1;
  for (int i = dim - 1; i >= 0; --i) {
    auto& axis = axes[static_cast<std::size_t>(i)];
    for (std::size_t r = 0; r < coords.size(); r += stride) {
      const double v = coords[r][static_cast<std::size_t>(i)];
      if (!axis.empty() && v == axis.front()) break;
      if (!axis.empty() && !(v > axis.back()))
        throw FormatError(lines[r], std::string("coordinates of ") +
                                        axis_name(static_cast<Axis>(i)) +
                                        " must increase strictly");
      axis.push_back(v);
    }
    if (axis.size() < 2) {
      // A second value further down means the run was cut short by disorder.
      for (std::size_t r = 0; r < coords.size(); ++r)
        if (coords[r][static_cast<std::size_t>(i)] != axis.front())
          throw FormatError(lines[std::min(stride, coords.size() - 1)],
                            "row out of row-major order (last axis fastest)");
      throw FormatError(lines.front(), std::string("axis ") + axis_name(static_cast<Axis>(i)) +
                                           " needs at least 2 nodes");
    }
    stride *= axis.size();
  }
  if (stride != coords.size())
    throw FormatError(lines.back(), "expected " + std::to_string(stride) + " rows for a " +
                                        "full grid, found " + std::to_string(coords.size()));

  Lattice lat(axes);
  for (std::size_t r = 0; r < coords.size(); ++r) {
    const Point p = lat.node(r);
    for (int i = 0; i < dim; ++i)
      if (p[static_cast<std::size_t>(i)] != coords[r][static_cast<std::size_t>(i)])
        throw FormatError(lines[r], "row out of row-major order (last axis fastest)");
  }
  return GridSurface(std::move(axes), std::move(values));
}

GridSurface read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(0, "cannot open " + path.string());
  return read_grid_csv(in);
}

void write_grid_csv(std::ostream& out, const GridSurface& g) {
  static const char* headers[] = {"x,l", "x,y,l", "x,y,z,l"};
  out << headers[g.dimension() - 1] << '\n';
  const Lattice& lat = g.lattice();
  char buf[32];
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const Point p = lat.node(k);
    for (int i = 0; i < g.dimension(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p[static_cast<std::size_t>(i)]);
      out << buf << ',';
    }
    out << to_text(g.values()[k]) << '\n';
  }
}

void write_grid_csv(const std::filesystem::path& path, const GridSurface& g) {
  std::ofstream out(path);
  if (!out) throw FormatError(0, "cannot write " + path.string());
  write_grid_csv(out, g);
}

}  // namespace hazardfield
