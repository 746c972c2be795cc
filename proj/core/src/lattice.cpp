#include "hazardfield/lattice.hpp"

#include <stdexcept>

namespace hazardfield {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linspace needs at least 2 nodes");
  std::vector<double> v(count);
  const double span = hi - lo;
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    v[i] = lo + span * (static_cast<double>(i) / last);
  }
  v.back() = hi;
  return v;
}

Lattice::Lattice(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3) {
    throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  }
  size_ = 1;
  for (const auto& a : axes_) {
    if (a.empty()) throw std::invalid_argument("lattice axis has no nodes");
    size_ *= a.size();
  }
}

std::array<std::size_t, 3> Lattice::unflatten(std::size_t flat) const {
  std::array<std::size_t, 3> idx{};
  for (std::size_t k = axes_.size(); k-- > 0;) {
    idx[k] = flat % axes_[k].size();
    flat /= axes_[k].size();
  }
  return idx;
}

std::size_t Lattice::flatten(const std::array<std::size_t, 3>& idx) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) flat = flat * axes_[k].size() + idx[k];
  return flat;
}

Point Lattice::node(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point p{};
  for (std::size_t k = 0; k < axes_.size(); ++k) p[k] = axes_[k][idx[k]];
  return p;
}

}  // namespace hazardfield
