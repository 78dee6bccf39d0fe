#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "hjsd/errors.hpp"

namespace hjsd {

/// One stratification directive from a .hjsd file. `geom` holds the
/// geometric reals in file order; `speed`/`cost` keep the expression
/// fields as text (bound to the problem dimension later).
struct Directive {
  enum class Tag { P, LX, LY, S, LXY, LYZ, LXZ, SX, SY, SZ, V };
  Tag tag;
  int line = 0;
  std::vector<double> geom;
  std::string speed;  // empty for #P
  std::string cost;
  double discount = 0.0;
};

/// Parsed .hjsd problem file: header plus directives, in file order.
struct ProblemFile {
  int dim = 2;
  Eigen::Vector3i counts{2, 2, 1};
  Eigen::Vector3d lo{0, 0, 0};
  Eigen::Vector3d hi{1, 1, 0};
  int na1 = 0, na2 = 0, na3 = 0;
  std::vector<Directive> directives;
};

/// Parses a .hjsd file body. Lines are whitespace-delimited; blank lines
/// and lines starting with "//" are ignored. Throws FileError with the
/// offending 1-based line number.
ProblemFile parse_hjsd(const std::string& text);

}  // namespace hjsd
