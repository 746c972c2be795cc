#include "hazardfield/expr.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "hazardfield/program.hpp"

namespace hazardfield {

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  Axis axis = Axis::x;
  std::uint8_t variables = 0;
  std::array<std::shared_ptr<const Node>, 2> children{};
};

namespace {

bool is_unary(Expr::Kind k) {
  return k == Expr::Kind::negate || k == Expr::Kind::sqrt || k == Expr::Kind::log ||
         k == Expr::Kind::exp;
}

bool is_binary(Expr::Kind k) {
  return k == Expr::Kind::add || k == Expr::Kind::sub || k == Expr::Kind::mul ||
         k == Expr::Kind::div || k == Expr::Kind::pow;
}

}  // namespace

Expr::Expr() {
  static const auto zero = constant(0.0).node_;
  node_ = zero;
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(Axis axis) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->axis = axis;
  n->variables = static_cast<std::uint8_t>(1U << index(axis));
  return Expr(std::move(n));
}

Expr Expr::unary(Kind kind, Expr operand) {
  if (!is_unary(kind)) throw std::invalid_argument("Expr::unary: kind is not unary");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->variables = operand.variables();
  n->children[0] = std::move(operand.node_);
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  if (!is_binary(kind)) throw std::invalid_argument("Expr::binary: kind is not binary");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->variables = static_cast<std::uint8_t>(lhs.variables() | rhs.variables());
  n->children[0] = std::move(lhs.node_);
  n->children[1] = std::move(rhs.node_);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

std::size_t Expr::arity() const noexcept {
  if (is_unary(node_->kind)) return 1;
  if (is_binary(node_->kind)) return 2;
  return 0;
}

Expr Expr::child(std::size_t i) const {
  if (i >= arity()) throw std::out_of_range("Expr::child: index exceeds arity");
  return Expr(node_->children[i]);
}

double Expr::value() const {
  if (node_->kind != Kind::constant) throw std::logic_error("Expr::value: not a constant");
  return node_->value;
}

Axis Expr::axis() const {
  if (node_->kind != Kind::variable) throw std::logic_error("Expr::axis: not a variable");
  return node_->axis;
}

std::uint8_t Expr::variables() const noexcept { return node_->variables; }

std::size_t Expr::node_count() const {
  std::unordered_set<const void*> seen;
  std::vector<Expr> stack{*this};
  while (!stack.empty()) {
    Expr e = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(e.id()).second) continue;
    for (std::size_t i = 0; i < e.arity(); ++i) stack.push_back(e.child(i));
  }
  return seen.size();
}

// ---- folding builders ------------------------------------------------------

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::negate) return a.child(0);
  return Expr::unary(Expr::Kind::negate, a);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(Expr::Kind::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::binary(Expr::Kind::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  // c1 * (c2 * e) -> (c1*c2) * e keeps repeated derivatives of powers small
  if (a.is_constant() && b.kind() == Expr::Kind::mul && b.child(0).is_constant())
    return Expr::constant(a.value() * b.child(0).value()) * b.child(1);
  if (b.is_constant() && !a.is_constant()) return b * a;
  return Expr::binary(Expr::Kind::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0)
    return Expr::constant(a.value() / b.value());
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(Expr::Kind::div, a, b);
}

Expr sqrt(const Expr& a) {
  if (a.is_constant() && a.value() > 0.0) return Expr::constant(std::sqrt(a.value()));
  return Expr::unary(Expr::Kind::sqrt, a);
}

Expr log(const Expr& a) {
  if (a.is_constant() && a.value() > 0.0) return Expr::constant(std::log(a.value()));
  return Expr::unary(Expr::Kind::log, a);
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::exp(a.value()));
  return Expr::unary(Expr::Kind::exp, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant(0.0)) return Expr::constant(1.0);
  if (exponent.is_constant(1.0)) return base;
  if (base.is_constant() && exponent.is_constant() && base.value() > 0.0)
    return Expr::constant(std::pow(base.value(), exponent.value()));
  return Expr::binary(Expr::Kind::pow, base, exponent);
}

// ---- printing --------------------------------------------------------------

namespace {

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* op_text(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::add: return " + ";
    case Expr::Kind::sub: return " - ";
    case Expr::Kind::mul: return " * ";
    case Expr::Kind::div: return " / ";
    case Expr::Kind::pow: return " ^ ";
    case Expr::Kind::sqrt: return "sqrt";
    case Expr::Kind::log: return "log";
    case Expr::Kind::exp: return "exp";
    default: return "";
  }
}

// Appends until `budget` characters are written, then stops early.
void print(const Expr& e, std::string& out, std::size_t budget) {
  if (out.size() > budget) return;
  switch (e.kind()) {
    case Expr::Kind::constant:
      if (e.value() < 0.0 || (e.value() == 0.0 && std::signbit(e.value())))
        out += "(-" + number_text(-e.value()) + ")";
      else
        out += number_text(e.value());
      return;
    case Expr::Kind::variable:
      out += axis_name(e.axis());
      return;
    case Expr::Kind::negate:
      out += "(-";
      print(e.child(0), out, budget);
      out += ")";
      return;
    case Expr::Kind::sqrt:
    case Expr::Kind::log:
    case Expr::Kind::exp:
      out += op_text(e.kind());
      out += "(";
      print(e.child(0), out, budget);
      out += ")";
      return;
    default:
      out += "(";
      print(e.child(0), out, budget);
      out += op_text(e.kind());
      print(e.child(1), out, budget);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out, static_cast<std::size_t>(-1));
  return out;
}

std::string to_string(const Expr& e, std::size_t max_length) {
  std::string out;
  print(e, out, max_length);
  if (out.size() > max_length) {
    out.resize(max_length > 3 ? max_length - 3 : 0);
    out += "...";
  }
  return out;
}

// ---- evaluation ------------------------------------------------------------

double evaluate(const Expr& e, const Point& p) {
  return Program(e).value(p);
}

WideReal evaluate_wide(const Expr& e, const Point& p) {
  return Program(e).wide_value(p);
}

// ---- log expansion ---------------------------------------------------------

Expr log_expand(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::mul:
      return log_expand(e.child(0)) + log_expand(e.child(1));
    case Expr::Kind::div:
      return log_expand(e.child(0)) - log_expand(e.child(1));
    case Expr::Kind::pow:
      return e.child(1) * log_expand(e.child(0));
    case Expr::Kind::exp:
      return e.child(0);
    case Expr::Kind::sqrt:
      return Expr::constant(0.5) * log_expand(e.child(0));
    case Expr::Kind::constant:
      if (e.value() > 0.0) return Expr::constant(std::log(e.value()));
      [[fallthrough]];
    default:
      return log(e);
  }
}

}  // namespace hazardfield
