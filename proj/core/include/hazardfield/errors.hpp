#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "hazardfield/point.hpp"

namespace hazardfield {

/// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, std::string found);

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t offset_;
  std::string expected_;
  std::string found_;
};

/// An expression was evaluated outside the domain of one of its operations
/// (log or sqrt of a non-positive value, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(std::string subexpression, const Point& point, const std::string& what);

  const std::string& subexpression() const noexcept { return subexpression_; }
  const Point& point() const noexcept { return point_; }

 private:
  std::string subexpression_;
  Point point_;
};

/// Query point outside a surface's domain box or grid bounding box.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// Survival value <= 0 where a hazard or a log is needed.
class NonPositiveSurvivalError : public Error {
 public:
  using Error::Error;
};

/// Grid estimator asked for a node without neighbours at the stencil step.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV input; line() is 1-based, 0 when not tied to a line.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A series did not converge within its term budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hazardfield
