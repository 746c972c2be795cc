#include <cctype>
#include <charconv>
#include <string>

#include "hazardfield/errors.hpp"
#include "hazardfield/expr.hpp"

namespace hazardfield {
namespace {

// Recursive descent over
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | x | y | z | func '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr run() {
    Expr e = expr();
    skip_space();
    if (pos_ < s_.size()) fail("operator or end of input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  std::string found() const {
    if (pos_ >= s_.size()) return "end of input";
    std::size_t end = pos_;
    if (std::isalpha(static_cast<unsigned char>(s_[end]))) {
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      return "identifier '" + std::string(s_.substr(pos_, end - pos_)) + "'";
    }
    return "'" + std::string(1, s_[pos_]) + "'";
  }

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(pos_, expected, found());
  }

  Expr expr() {
    Expr lhs = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      Expr rhs = term();
      lhs = Expr::binary(c == '+' ? Expr::Kind::add : Expr::Kind::sub, lhs, rhs);
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      Expr rhs = unary();
      lhs = Expr::binary(c == '*' ? Expr::Kind::mul : Expr::Kind::div, lhs, rhs);
    }
    return lhs;
  }

  Expr unary() {
    if (peek() == '-') {
      ++pos_;
      return Expr::unary(Expr::Kind::negate, unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek() == '^') {
      ++pos_;
      return Expr::binary(Expr::Kind::pow, base, unary());
    }
    return base;
  }

  Expr primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (peek() != ')') fail("')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("operand");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("operand");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("exponent digits");
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) {
      pos_ = start;
      fail("finite number");
    }
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "x") return Expr::variable(Axis::x);
    if (name == "y") return Expr::variable(Axis::y);
    if (name == "z") return Expr::variable(Axis::z);
    Expr::Kind kind;
    if (name == "sqrt")
      kind = Expr::Kind::sqrt;
    else if (name == "log")
      kind = Expr::Kind::log;
    else if (name == "exp")
      kind = Expr::Kind::exp;
    else {
      pos_ = start;
      fail("x, y, z or function name");
    }
    if (peek() != '(') fail("'('");
    ++pos_;
    Expr arg = expr();
    if (peek() != ')') fail("')'");
    ++pos_;
    return Expr::unary(kind, std::move(arg));
  }
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).run(); }

}  // namespace hazardfield
