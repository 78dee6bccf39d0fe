#pragma once

#include <Eigen/Dense>

#include <vector>

#include "hjsd/errors.hpp"

namespace hjsd {

/// Finite sample of a control set, in the component's tangent coordinates.
///
/// dimension 1: A^1 = [-1,1], scalars stored in the x component.
/// dimension 2: A^2 = S^1, unit vectors in the x-y components.
/// dimension 3: A^3 = S^2, unit vectors.
struct ControlSet {
  int dimension = 1;
  std::vector<Eigen::Vector3d> vectors;
};

/// Uniform discretization of A^1, A^2 or A^3 with parameter n.
///
/// dim 1: n samples of [-1,1] including both ends (n >= 2).
/// dim 2: n angles 2*pi*m/n (n >= 3).
/// dim 3: n meridians times n parallels on a half-offset spherical grid
///        (poles excluded by the offset), plus the two pole vectors, for
///        n*n + 2 vectors in total (n >= 2).
ControlSet discretize_controls(int dimension, int n);

}  // namespace hjsd
