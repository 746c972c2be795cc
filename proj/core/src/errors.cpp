#include "hazardfield/errors.hpp"

namespace hazardfield {

ParseError::ParseError(std::size_t offset, std::string expected, std::string found)
    : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected +
            ", found " + found),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

DomainError::DomainError(std::string subexpression, const Point& point, const std::string& what)
    : Error(what + " in '" + subexpression + "' at " + to_string(point)),
      subexpression_(std::move(subexpression)),
      point_(point) {}

FormatError::FormatError(std::size_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

}  // namespace hazardfield
