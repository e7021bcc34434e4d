#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lswe {

/** Base class for all library errors. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Raised by the expression parser; carries the byte offset of the offending token. */
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/** Raised when an expression is evaluated outside the domain of one of its functions. */
class DomainError : public Error {
 public:
  using Error::Error;
};

/**
 * Raised when a gauge is requested at (or a computation passes through) a point
 * where the squared gradient G falls below the configured threshold.  The wave
 * operator degenerates there and every 1/G formula loses meaning.
 */
class StationaryPointError : public Error {
 public:
  StationaryPointError(const std::string& msg, std::vector<double> point, double G)
      : Error(msg), point_(std::move(point)), G_(G) {}

  const std::vector<double>& point() const { return point_; }
  double G() const { return G_; }

 private:
  std::vector<double> point_;
  double G_;
};

/** Raised when an iterative method (boundary-value shooting) fails to converge. */
class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

/** Raised when a requested time step violates the explicit-scheme stability bound. */
class CflViolationError : public Error {
 public:
  using Error::Error;
};

/** Raised when a geodesic distance is requested for a path with negative D. */
class TimelikePathError : public Error {
 public:
  using Error::Error;
};

/** Raised for malformed user input (CLI or config) before any computation starts. */
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace lswe
