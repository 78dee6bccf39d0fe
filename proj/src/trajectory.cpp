#include "hjsd/trajectory.hpp"

#include <cmath>

namespace hjsd {

DynamicsField extract_dynamics(const StratifiedDomain& dom,
                               const ValueField& field) {
  if (!field.converged)
    throw Error("refusing to extract dynamics from a non-converged field");
  const BoxGrid& g = dom.grid;
  DynamicsField dyn;
  dyn.vectors.setZero(3, g.node_count());
  for (NodeIndex n = 0; n < g.node_count(); ++n) {
    const ArgminRecord& rec = field.argmin[n];
    if (rec.comp < 0) continue;
    const ComponentProblem& comp = dom.components[rec.comp];
    if (comp.id.k == 0) continue;  // zero by convention
    for (std::int64_t li = dom.label_offsets[n]; li < dom.label_offsets[n + 1];
         ++li) {
      if (dom.label_comps[li] == rec.comp) {
        dyn.vectors.col(n) =
            dom.label_speed[li] *
            comp.directions[static_cast<std::size_t>(rec.control)];
        break;
      }
    }
  }
  return dyn;
}

namespace {

// Multilinear (bilinear/trilinear) interpolation of the nodal vectors.
Eigen::Vector3d sample_dynamics(const BoxGrid& g, const DynamicsField& dyn,
                                const Eigen::Vector3d& p) {
  Eigen::Vector3i cell;
  Eigen::Vector3d u;
  detail::cell_coords(g, p, cell, u);
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  const int corners = 1 << g.dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    Eigen::Vector3i idx = cell;
    for (int a = 0; a < g.dim; ++a) {
      if (c & (1 << a)) {
        w *= u[a];
        idx[a] += 1;
      } else {
        w *= 1.0 - u[a];
      }
    }
    v += w * dyn.vectors.col(g.linear(idx.x(), idx.y(), idx.z()));
  }
  return v;
}

}  // namespace

TraceResult trace(const BoxGrid& grid, const DynamicsField& dynamics,
                  const Eigen::Vector3d& start, double dt, int max_steps) {
  constexpr double kStationarySpeed = 1e-8;
  TraceResult out;
  Eigen::Vector3d x = start;
  out.points.push_back(x);
  for (int step = 0; step < max_steps; ++step) {
    Eigen::Vector3d v = sample_dynamics(grid, dynamics, x);
    if (v.norm() < kStationarySpeed) {
      out.reason = TraceResult::Stop::Stationary;
      return out;
    }
    Eigen::Vector3d next = x + dt * v;
    if (!grid.contains(next)) {
      out.reason = TraceResult::Stop::LeftBox;
      return out;
    }
    x = next;
    out.points.push_back(x);
  }
  out.reason = TraceResult::Stop::MaxSteps;
  return out;
}

}  // namespace hjsd
