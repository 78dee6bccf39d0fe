#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "hjsd/stratification.hpp"

namespace hjsd {

struct SolverConfig {
  double h = 0.1;          // time step along characteristics
  double tolerance = 1e-6; // sup-norm residual for convergence
  int max_iterations = 1000;
  int threads = 1;
  double penalty = 0.0;    // 0 = auto: min(10*M/c_bar, 1e12)
};

/// Optimal (component, control) chosen at the last update of a node;
/// control is -1 when the component has dimension zero.
struct ArgminRecord {
  std::int32_t comp = -1;
  std::int32_t control = -1;
};

struct ValueField {
  Eigen::VectorXd values;
  std::vector<ArgminRecord> argmin;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // sup-norm per sweep
  NodeIndex penalized_nodes = 0;         // nodes left at the penalty value
};

/// Throws ConfigError unless h > 0, h * c_max < 1, tolerance > 0 and the
/// (resolved) penalty exceeds M / c_bar.
void validate_config(const StratifiedDomain& domain, const SolverConfig& cfg);

double effective_penalty(const StratifiedDomain& domain,
                         const SolverConfig& cfg);

/// Value of one (component, control) candidate at a node. For dimension
/// k >= 1 the foot of the characteristic is interpolated on the
/// component's closure; feet leaving it score the penalty. For k = 0 the
/// candidate reuses the node's own previous value.
double candidate_value(const StratifiedDomain& domain,
                       const Eigen::VectorXd& values, NodeIndex node,
                       std::int32_t comp, std::int32_t control, double h,
                       double penalty);

/// Minimum over all candidates of L(node), scanning components in
/// ascending (k, j) and controls in ascending index; first attaining
/// candidate wins ties.
std::pair<double, ArgminRecord> update_node(const StratifiedDomain& domain,
                                            const Eigen::VectorXd& values,
                                            NodeIndex node, double h,
                                            double penalty);

/// One full sweep of the fixed-point operator (single-threaded).
Eigen::VectorXd apply_operator(const StratifiedDomain& domain,
                               const Eigen::VectorXd& values, double h,
                               double penalty);

/// Jacobi fixed-point iteration from `initial` (zeros when null). Every
/// sweep reads the previous iterate and writes a fresh buffer, so results
/// do not depend on the thread count.
ValueField solve(const StratifiedDomain& domain, const SolverConfig& cfg,
                 const Eigen::VectorXd* initial = nullptr);

/// Discrete Hamiltonian at a node: max over L(node) and over the same
/// control samples the scheme uses of -b a . p + c r - l.
double hamiltonian_value(const StratifiedDomain& domain, NodeIndex node,
                         double r, const Eigen::Vector3d& p);

/// Max over nodes of |H(x, phi(x), Dphi(x)) - Sigma(h, dx, x, phi^, phi^)|
/// where phi^ is the piecewise-linear interpolant of the nodal samples of
/// phi. `grad` supplies the exact partial derivatives (dim entries).
/// Nodes where some characteristic foot leaves the box or a component
/// closure are excluded (the truncated box is not part of the estimate).
double consistency_residual(const StratifiedDomain& domain, double h,
                            const ExpressionTree& phi,
                            std::span<const ExpressionTree> grad);

}  // namespace hjsd
