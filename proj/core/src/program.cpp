#include "hazardfield/program.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "hazardfield/errors.hpp"

namespace hazardfield {

namespace {

constexpr std::size_t kMessageBudget = 160;

bool is_integer(double v) { return std::trunc(v) == v; }
bool is_integer(const WideReal& v) { return trunc(v) == v; }

double power(double a, double b) { return std::pow(a, b); }
WideReal power(const WideReal& a, const WideReal& b) {
  // Boost's pow mishandles negative bases; an integer exponent is exact via |a|
  if (a < 0) {
    WideReal m = pow(-a, b);
    return fmod(b, WideReal(2)) == 0 ? m : WideReal(-m);
  }
  return pow(a, b);
}

using std::exp;
using std::log;
using std::sqrt;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::sqrt;

}  // namespace

Program::Program(const Expr& output) : Program(std::span<const Expr>(&output, 1)) {}

Program::Program(std::span<const Expr> outputs) {
  std::unordered_map<const void*, std::uint32_t> slot;
  // Iterative post-order so deep trees cannot overflow the call stack.
  struct Frame {
    Expr e;
    bool expanded;
  };
  for (const Expr& root : outputs) {
    std::vector<Frame> stack{{root, false}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (slot.count(f.e.id())) continue;
      if (!f.expanded && f.e.arity() > 0) {
        stack.push_back({f.e, true});
        for (std::size_t i = f.e.arity(); i-- > 0;) stack.push_back({f.e.child(i), false});
        continue;
      }
      Instruction ins;
      ins.kind = f.e.kind();
      ins.source = f.e;
      if (f.e.kind() == Expr::Kind::constant) ins.value = f.e.value();
      if (f.e.kind() == Expr::Kind::variable) ins.axis = f.e.axis();
      if (f.e.arity() > 0) ins.lhs = slot.at(f.e.child(0).id());
      if (f.e.arity() > 1) ins.rhs = slot.at(f.e.child(1).id());
      slot.emplace(f.e.id(), static_cast<std::uint32_t>(code_.size()));
      code_.push_back(std::move(ins));
    }
    outputs_.push_back(slot.at(root.id()));
  }
}

void Program::domain_failure(std::size_t at, const Point& p, const char* what) const {
  throw DomainError(to_string(code_[at].source, kMessageBudget), p, what);
}

template <class T>
void Program::execute(const Point& p, std::vector<T>& v) const {
  using K = Expr::Kind;
  v.resize(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instruction& ins = code_[i];
    switch (ins.kind) {
      case K::constant: v[i] = T(ins.value); break;
      case K::variable: v[i] = T(p[index(ins.axis)]); break;
      case K::negate: v[i] = -v[ins.lhs]; break;
      case K::sqrt:
        if (!(v[ins.lhs] > 0)) domain_failure(i, p, "sqrt of non-positive value");
        v[i] = sqrt(v[ins.lhs]);
        break;
      case K::log:
        if (!(v[ins.lhs] > 0)) domain_failure(i, p, "log of non-positive value");
        v[i] = log(v[ins.lhs]);
        break;
      case K::exp: v[i] = exp(v[ins.lhs]); break;
      case K::add: v[i] = v[ins.lhs] + v[ins.rhs]; break;
      case K::sub: v[i] = v[ins.lhs] - v[ins.rhs]; break;
      case K::mul: v[i] = v[ins.lhs] * v[ins.rhs]; break;
      case K::div:
        if (v[ins.rhs] == 0) domain_failure(i, p, "division by zero");
        v[i] = v[ins.lhs] / v[ins.rhs];
        break;
      case K::pow: {
        const T& a = v[ins.lhs];
        const T& b = v[ins.rhs];
        if (a < 0 && !is_integer(b)) domain_failure(i, p, "negative base with non-integer exponent");
        if (a == 0 && !(b > 0)) domain_failure(i, p, "zero base with non-positive exponent");
        v[i] = power(a, b);
        break;
      }
    }
  }
}

void Program::run(const Point& p, std::span<double> out) const {
  if (out.size() != outputs_.size()) throw std::invalid_argument("Program::run: output size");
  std::vector<double> v;
  execute(p, v);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = v[outputs_[k]];
}

void Program::run(const Point& p, std::span<WideReal> out) const {
  if (out.size() != outputs_.size()) throw std::invalid_argument("Program::run: output size");
  std::vector<WideReal> v;
  execute(p, v);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = v[outputs_[k]];
}

double Program::value(const Point& p) const {
  if (outputs_.empty()) throw std::logic_error("Program::value: empty program");
  std::vector<double> v;
  execute(p, v);
  return v[outputs_.front()];
}

WideReal Program::wide_value(const Point& p) const {
  if (outputs_.empty()) throw std::logic_error("Program::wide_value: empty program");
  std::vector<WideReal> v;
  execute(p, v);
  return v[outputs_.front()];
}

// ---- Taylor jets -----------------------------------------------------------

namespace {

using Series = std::vector<WideReal>;

Series product(const Series& a, const Series& b) {
  const std::size_t n = a.size();
  Series c(n);
  for (std::size_t k = 0; k < n; ++k) {
    WideReal s = 0;
    for (std::size_t j = 0; j <= k; ++j) s += a[j] * b[k - j];
    c[k] = s;
  }
  return c;
}

// `e0` is exp(a[0]), passed in when a more accurate value is at hand.
Series exp_series(const Series& a, const WideReal& e0) {
  const std::size_t n = a.size();
  Series e(n);
  e[0] = e0;
  for (std::size_t k = 1; k < n; ++k) {
    WideReal s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += WideReal(static_cast<double>(j)) * a[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return e;
}

// Requires a[0] > 0.
Series log_series(const Series& a) {
  const std::size_t n = a.size();
  Series c(n);
  c[0] = log(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    WideReal s = 0;
    for (std::size_t j = 1; j < k; ++j) s += WideReal(static_cast<double>(j)) * c[j] * a[k - j];
    c[k] = (a[k] - s / static_cast<double>(k)) / a[0];
  }
  return c;
}

bool higher_terms_vanish(const Series& b) {
  for (std::size_t k = 1; k < b.size(); ++k)
    if (b[k] != 0) return false;
  return true;
}

}  // namespace

std::vector<std::vector<WideReal>> Program::taylor(const Point& p, Axis axis, int order) const {
  Point direction{};
  direction[index(axis)] = 1.0;
  return taylor(p, direction, order);
}

std::vector<std::vector<WideReal>> Program::taylor(const Point& p, const Point& direction,
                                                   int order) const {
  using K = Expr::Kind;
  if (order < 0) throw std::invalid_argument("Program::taylor: negative order");
  const std::size_t n = static_cast<std::size_t>(order) + 1;

  // Zeroth coefficients come from a plain wide evaluation, so domain errors
  // match run() exactly.
  std::vector<WideReal> base;
  execute(p, base);

  std::vector<Series> s(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instruction& ins = code_[i];
    Series& r = s[i];
    r.assign(n, WideReal(0));
    r[0] = base[i];
    switch (ins.kind) {
      case K::constant: break;
      case K::variable:
        if (n > 1) r[1] = direction[index(ins.axis)];
        break;
      case K::negate:
        for (std::size_t k = 1; k < n; ++k) r[k] = -s[ins.lhs][k];
        break;
      case K::add:
        for (std::size_t k = 1; k < n; ++k) r[k] = s[ins.lhs][k] + s[ins.rhs][k];
        break;
      case K::sub:
        for (std::size_t k = 1; k < n; ++k) r[k] = s[ins.lhs][k] - s[ins.rhs][k];
        break;
      case K::mul: r = product(s[ins.lhs], s[ins.rhs]); break;
      case K::div: {
        const Series& a = s[ins.lhs];
        const Series& b = s[ins.rhs];
        for (std::size_t k = 1; k < n; ++k) {
          WideReal acc = a[k];
          for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * r[k - j];
          r[k] = acc / b[0];
        }
        break;
      }
      case K::sqrt: {
        const Series& a = s[ins.lhs];
        for (std::size_t k = 1; k < n; ++k) {
          WideReal acc = a[k];
          for (std::size_t j = 1; j < k; ++j) acc -= r[j] * r[k - j];
          r[k] = acc / (2 * r[0]);
        }
        break;
      }
      case K::log: r = log_series(s[ins.lhs]); break;
      case K::exp: r = exp_series(s[ins.lhs], base[i]); break;
      case K::pow: {
        const Series& a = s[ins.lhs];
        const Series& b = s[ins.rhs];
        if (higher_terms_vanish(b)) {
          const WideReal& c = b[0];
          if (c >= 0 && is_integer(c) && c <= 64) {
            // Repeated squaring; valid for any base, including zero.
            unsigned e = c.convert_to<unsigned>();
            Series result(n, WideReal(0));
            result[0] = 1;
            Series sq = a;
            while (e) {
              if (e & 1U) result = product(result, sq);
              e >>= 1U;
              if (e) sq = product(sq, sq);
            }
            r = std::move(result);
            r[0] = base[i];
          } else if (a[0] == 0) {
            if (n > 1) domain_failure(i, p, "power not differentiable at zero base");
          } else {
            // a p' = c a' p, solved term by term
            for (std::size_t k = 1; k < n; ++k) {
              WideReal acc = 0;
              for (std::size_t j = 1; j <= k; ++j) {
                const WideReal w = c * static_cast<double>(j) - static_cast<double>(k - j);
                acc += w * a[j] * r[k - j];
              }
              r[k] = acc / (static_cast<double>(k) * a[0]);
            }
          }
        } else {
          if (!(a[0] > 0)) domain_failure(i, p, "variable exponent needs a positive base");
          r = exp_series(product(b, log_series(a)), base[i]);
        }
        break;
      }
    }
  }

  std::vector<std::vector<WideReal>> out;
  out.reserve(outputs_.size());
  for (std::uint32_t o : outputs_) out.push_back(s[o]);
  return out;
}

}  // namespace hazardfield
