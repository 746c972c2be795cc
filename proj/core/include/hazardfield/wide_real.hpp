#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace hazardfield {

/// Real number with a binary64 mantissa and a 32-bit binary exponent.
///
/// Survival surfaces with steep closed forms leave the range of double long
/// before their hazards do: 7^(x^3) is about 1e845 at x = 10. Survival values
/// and their partial derivatives are carried in this type; hazards, which are
/// ratios of them, are returned as plain double.
using WideReal = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<
        53, boost::multiprecision::backends::digit_base_2, void, std::int32_t,
        -1073741822, 1073741823>,
    boost::multiprecision::et_off>;

inline double to_double(const WideReal& v) { return v.convert_to<double>(); }

/// Decimal text with 17 significant digits; round-trips through parse_wide().
std::string to_text(const WideReal& v);

/// Parses decimal text (optional exponent of any size). Throws
/// std::invalid_argument on malformed input.
WideReal parse_wide(std::string_view text);

/// Natural log of |v| as a double; finite for any non-zero finite v.
double log_abs(const WideReal& v);

}  // namespace hazardfield
