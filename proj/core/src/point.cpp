#include "hazardfield/point.hpp"

#include <cstdio>

namespace hazardfield {

std::string to_string(const Point& p, int dimension) {
  std::string out = "(";
  char buf[32];
  for (int i = 0; i < dimension; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p[static_cast<std::size_t>(i)]);
    if (i > 0) out += ", ";
    out += buf;
  }
  return out + ")";
}

}  // namespace hazardfield
