#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hjsd {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax error while parsing an arithmetic expression.
struct ExprParseError : Error {
  ExprParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

// Non-finite result while evaluating an expression.
struct ExprEvalError : Error {
  ExprEvalError(const std::string& msg, const Eigen::Vector3d& point)
      : Error(msg + " at (" + std::to_string(point.x()) + ", " +
              std::to_string(point.y()) + ", " + std::to_string(point.z()) +
              ")"),
        point(point) {}
  Eigen::Vector3d point;
};

// Error in a .hjsd problem file, carries the 1-based source line.
struct FileError : Error {
  FileError(const std::string& msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

// Invalid stratification (overlaps, uncovered nodes, bad seeds, ...).
struct StratificationError : Error {
  using Error::Error;
};

// Invalid solver configuration (h, tolerance, penalty, ...).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace hjsd
