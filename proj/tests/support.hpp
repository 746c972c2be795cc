#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <hazardfield/expr.hpp>
#include <hazardfield/surface.hpp>
#include <hazardfield/wide_real.hpp>

namespace hazardfield::testing {

inline double rel_err(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double rel_err(const WideReal& a, const WideReal& b) {
  if (a == b) return 0.0;
  if (b == 0) return to_double(abs(a));
  return to_double(abs(a - b) / abs(b));
}

inline double gap(const WideReal& lhs, const WideReal& rhs) {
  const WideReal scale = abs(lhs) > 1 ? WideReal(abs(lhs)) : WideReal(1);
  return to_double(abs(lhs - rhs) / scale);
}

inline const char* kExample1 = "1 - x^0.5 * y^0.05 / 100";
inline const char* kExample2 = "5 ^ sqrt(y) * 7 ^ (x^3)";

inline std::string example1_text(double a, double b, double K) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "1 - x^%.17g * y^(%.17g / sqrt(%.17g)) / %.17g", a, b, K, K);
  return buf;
}

inline AnalyticSurface surface(const std::string& text, DomainBox box) {
  return AnalyticSurface(parse(text), std::move(box));
}

inline DomainBox figure_box() { return DomainBox({{10.0, 80.0}, {1.0, 5.0}}); }
inline DomainBox wide_box() { return DomainBox({{5.0, 85.0}, {0.5, 5.5}}); }

/// Random polynomial in x and y, each monomial of total degree <= max_degree
/// kept with probability 1/3, coefficients in [-1, 1].
inline std::string random_polynomial(std::mt19937_64& rng, int max_degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> keep(0, 2);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", coef(rng));
  std::string s = buf;
  for (int i = 0; i <= max_degree; ++i)
    for (int j = 0; i + j <= max_degree; ++j)
      if (i + j > 0 && keep(rng) == 0) {
        std::snprintf(buf, sizeof buf, " + %.17g * x^%d * y^%d", coef(rng), i, j);
        s += buf;
      }
  return s;
}

}  // namespace hazardfield::testing
