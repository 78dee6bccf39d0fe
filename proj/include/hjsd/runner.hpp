#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hjsd/problem_file.hpp"
#include "hjsd/solver.hpp"
#include "hjsd/trajectory.hpp"

namespace hjsd {

struct RunOptions {
  SolverConfig config;
  std::string output_path;
  std::vector<Eigen::Vector3d> trace_starts;
  double trace_dt = 0.0;    // 0 = one grid spacing per step
  int trace_max_steps = 0;  // 0 = path-length budget of 10 box units
};

struct RunSummary {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
  /// Converged value at each declared point component, in (0,j) order.
  std::vector<double> point_values;
};

/// Full pipeline: build domain, validate, solve, extract dynamics, trace,
/// write VTK output (plus <output>.traj.vtk when traces are requested).
/// Progress and warnings go to `log`.
RunSummary run(const ProblemFile& problem, const RunOptions& options,
               std::ostream& log);

}  // namespace hjsd
