#include "hjsd/runner.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "hjsd/vtk_writer.hpp"

namespace hjsd {

RunSummary run(const ProblemFile& problem, const RunOptions& options,
               std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  RunSummary summary;

  StratifiedDomain dom = build_domain(problem);
  summary.warnings = validate_afs(dom);
  for (const std::string& w : summary.warnings) log << "warning: " << w << '\n';

  ValueField field = solve(dom, options.config);
  summary.iterations = field.iterations;
  summary.residual = field.residual;
  summary.converged = field.converged;
  if (!field.converged) {
    log << "not converged after " << field.iterations
        << " iterations (residual " << field.residual << ")\n";
    return summary;
  }
  if (field.penalized_nodes > 0)
    log << "warning: " << field.penalized_nodes
        << " node(s) kept the penalty value (all controls penalized)\n";

  DynamicsField dyn = extract_dynamics(dom, field);

  for (const ComponentProblem& c : dom.components) {
    if (c.id.k != 0) break;
    const auto& p = std::get<PointGeometry>(c.geometry);
    NodeIndex n = dom.grid.linear(p.node.x(), p.node.y(), p.node.z());
    summary.point_values.push_back(field.values[n]);
    log << "u(point " << c.id.j << ") = " << field.values[n] << '\n';
  }

  write_vtk(dom, field, dyn, options.output_path);

  if (!options.trace_starts.empty()) {
    double dt = options.trace_dt > 0 ? options.trace_dt
                                     : dom.grid.min_spacing();
    int max_steps = options.trace_max_steps > 0
                        ? options.trace_max_steps
                        : static_cast<int>(std::ceil(10.0 / dt));
    std::vector<TraceResult> traces;
    for (const auto& start : options.trace_starts)
      traces.push_back(trace(dom.grid, dyn, start, dt, max_steps));
    write_trajectories_vtk(traces, options.output_path + ".traj.vtk");
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  log << "converged in " << summary.iterations << " iterations, residual "
      << summary.residual << ", " << summary.wall_seconds << " s\n";
  return summary;
}

}  // namespace hjsd
