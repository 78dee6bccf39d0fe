#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>

#include "hjsd/errors.hpp"

namespace hjsd {

/// Parsed arithmetic expression in the variables x, y, z.
///
/// Grammar: number literals, x/y/z, pi, unary minus, binary + - * / ^,
/// and the functions abs, sin, cos, exp, sqrt (arity 1), min, max
/// (arity 2). Precedence: ^ binds tightest, then unary minus, then * /,
/// then + -; binary operators associate to the left. The input may not
/// contain whitespace.
///
/// Trees are immutable after parsing and safe to evaluate concurrently.
class ExpressionTree {
 public:
  struct Node;

  /// Parses `text`. Throws ExprParseError with the byte offset of the
  /// first offending character.
  static ExpressionTree parse(const std::string& text);

  /// Constant tree with value `v`.
  static ExpressionTree constant(double v);

  /// Evaluates at `p` (z component ignored by 2D expressions). Throws
  /// ExprEvalError if any intermediate result is non-finite.
  double eval(const Eigen::Vector3d& p) const;

  /// True if any node references the variable z.
  bool uses_z() const;

  /// Parenthesized form that re-parses to an equivalent tree.
  std::string to_string() const;

 private:
  explicit ExpressionTree(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
};

}  // namespace hjsd
