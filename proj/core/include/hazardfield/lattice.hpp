#pragma once

#include <cstddef>
#include <vector>

#include "hazardfield/point.hpp"

namespace hazardfield {

/// Evenly spaced nodes over [lo, hi], both endpoints included exactly.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Tensor-product set of nodes, row-major with the last axis fastest.
class Lattice {
 public:
  Lattice() = default;
  /// One coordinate vector per axis (x first); 1 to 3 axes.
  explicit Lattice(std::vector<std::vector<double>> axes);

  int dimension() const noexcept { return static_cast<int>(axes_.size()); }
  const std::vector<double>& axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }
  std::size_t size() const noexcept { return size_; }

  /// Per-axis indices of the flat row-major index.
  std::array<std::size_t, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<std::size_t, 3>& idx) const;
  Point node(std::size_t flat) const;

 private:
  std::vector<std::vector<double>> axes_;
  std::size_t size_ = 0;
};

}  // namespace hazardfield
