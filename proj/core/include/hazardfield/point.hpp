#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace hazardfield {

/// Surface variables. x is age; y and z are covariates.
enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::x, Axis::y, Axis::z};

constexpr std::size_t index(Axis a) noexcept { return static_cast<std::size_t>(a); }

constexpr char axis_name(Axis a) noexcept {
  return a == Axis::x ? 'x' : (a == Axis::y ? 'y' : 'z');
}

constexpr std::optional<Axis> axis_from_name(char c) noexcept {
  switch (c) {
    case 'x': return Axis::x;
    case 'y': return Axis::y;
    case 'z': return Axis::z;
    default: return std::nullopt;
  }
}

/// Coordinates (x, y, z); trailing coordinates are ignored by surfaces of
/// lower dimension.
using Point = std::array<double, 3>;

inline Point shifted(Point p, Axis a, double delta) {
  p[index(a)] += delta;
  return p;
}

std::string to_string(const Point& p, int dimension = 3);

}  // namespace hazardfield
