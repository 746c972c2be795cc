#include <stdexcept>

#include "hazardfield/expr.hpp"

namespace hazardfield {

Expr Differentiator::operator()(const Expr& e) {
  using K = Expr::Kind;
  if (!e.depends_on(axis_)) return Expr::constant(0.0);
  if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second.second;

  Expr d;
  switch (e.kind()) {
    case K::constant:
      d = Expr::constant(0.0);
      break;
    case K::variable:
      d = Expr::constant(e.axis() == axis_ ? 1.0 : 0.0);
      break;
    case K::negate:
      d = -(*this)(e.child(0));
      break;
    case K::sqrt:
      d = (*this)(e.child(0)) / (Expr::constant(2.0) * e);
      break;
    case K::log:
      d = (*this)(e.child(0)) / e.child(0);
      break;
    case K::exp:
      d = e * (*this)(e.child(0));
      break;
    case K::add:
      d = (*this)(e.child(0)) + (*this)(e.child(1));
      break;
    case K::sub:
      d = (*this)(e.child(0)) - (*this)(e.child(1));
      break;
    case K::mul: {
      const Expr u = e.child(0), w = e.child(1);
      d = (*this)(u) * w + u * (*this)(w);
      break;
    }
    case K::div: {
      const Expr u = e.child(0), w = e.child(1);
      const Expr du = (*this)(u), dw = (*this)(w);
      if (dw.is_constant(0.0))
        d = du / w;
      else
        d = (du * w - u * dw) / (w * w);
      break;
    }
    case K::pow: {
      const Expr u = e.child(0), w = e.child(1);
      if (!w.depends_on(axis_)) {
        // w * u^(w-1) * du; defined at u = 0 whenever the true derivative is
        d = w * pow(u, w - Expr::constant(1.0)) * (*this)(u);
      } else if (!u.depends_on(axis_)) {
        d = e * log(u) * (*this)(w);
      } else {
        d = e * ((*this)(w) * log(u) + w * (*this)(u) / u);
      }
      break;
    }
  }
  memo_.emplace(e.id(), std::make_pair(e, d));
  return d;
}

Expr differentiate(const Expr& e, Axis v) { return Differentiator(v)(e); }

Expr nth_partial(const Expr& e, Axis v, int n) {
  if (n < 1) throw std::invalid_argument("nth_partial: order must be >= 1");
  Differentiator d(v);
  Expr out = e;
  for (int i = 0; i < n; ++i) out = d(out);
  return out;
}

}  // namespace hazardfield
