#include <cstdio>
#include <fstream>
#include <ostream>

#include "hazardfield/errors.hpp"
#include "hazardfield/hazard.hpp"

namespace hazardfield {

namespace {

void cell(std::ostream& out, const std::optional<double>& v) {
  if (!v) return;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  out << buf;
}

}  // namespace

void write_field_csv(std::ostream& out, const FieldGrid& f) {
  const int dim = f.lattice.dimension();
  for (int i = 0; i < dim; ++i) out << (i ? "," : "") << axis_name(static_cast<Axis>(i));
  for (Axis a : f.axes) out << ",mu_" << axis_name(a);
  if (f.has_dmu)
    for (Axis a : f.axes) out << ",dmu_" << axis_name(a);
  out << '\n';
  char buf[32];
  for (const HazardSample& s : f.samples) {
    for (int i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", s.point[static_cast<std::size_t>(i)]);
      out << (i ? "," : "") << buf;
    }
    for (Axis a : f.axes) {
      out << ',';
      cell(out, s.mu[index(a)]);
    }
    if (f.has_dmu)
      for (Axis a : f.axes) {
        out << ',';
        cell(out, s.dmu[index(a)]);
      }
    out << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const FieldGrid& f) {
  std::ofstream out(path);
  if (!out) throw FormatError(0, "cannot write " + path.string());
  write_field_csv(out, f);
}

}  // namespace hazardfield
