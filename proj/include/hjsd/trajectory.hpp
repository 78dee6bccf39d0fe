#pragma once

#include <Eigen/Dense>

#include <vector>

#include "hjsd/solver.hpp"

namespace hjsd {

/// Optimal-dynamics vector at each node: b^{k,j}(x_sigma) times the
/// embedded argmin control. Zero at nodes whose argmin component has
/// dimension zero.
struct DynamicsField {
  Eigen::Matrix3Xd vectors;  // one column per node
};

/// Throws Error when the field has not converged.
DynamicsField extract_dynamics(const StratifiedDomain& domain,
                               const ValueField& field);

struct TraceResult {
  enum class Stop { Stationary, MaxSteps, LeftBox };
  std::vector<Eigen::Vector3d> points;
  Stop reason = Stop::MaxSteps;
};

/// Explicit Euler stepping of the multilinear interpolation of the nodal
/// dynamics: stops at max_steps, when the interpolated speed drops below
/// 1e-8, or when the next step would exit the box.
TraceResult trace(const BoxGrid& grid, const DynamicsField& dynamics,
                  const Eigen::Vector3d& start, double dt, int max_steps);

}  // namespace hjsd
