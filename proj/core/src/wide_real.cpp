#include "hazardfield/wide_real.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace hazardfield {

std::string to_text(const WideReal& v) {
  return v.str(17, std::ios_base::fmtflags{});
}

WideReal parse_wide(std::string_view text) {
  // Grammar: [+-] digits [. digits] [(e|E) [+-] digits]; boost accepts more
  // (inf, nan, hex) which are not valid survival values.
  std::size_t i = 0;
  const auto digits = [&] {
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    return i - start;
  };
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t mantissa_digits = digits();
  if (i < text.size() && text[i] == '.') {
    ++i;
    mantissa_digits += digits();
  }
  if (mantissa_digits == 0) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
    if (digits() == 0) {
      throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    }
  }
  if (i != text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return WideReal(std::string(text));
}

double log_abs(const WideReal& v) {
  return to_double(log(abs(v)));
}

}  // namespace hazardfield
