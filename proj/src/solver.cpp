#include "hjsd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace hjsd {

namespace {

// Minimum over candidates of one node, reading the previous iterate.
double update_one(const StratifiedDomain& dom, const Eigen::VectorXd& old,
                  NodeIndex n, double h, double penalty, ArgminRecord& rec) {
  const Eigen::Vector3d x = dom.grid.coords(n);
  double best = std::numeric_limits<double>::infinity();
  rec = {};
  for (std::int64_t li = dom.label_offsets[n]; li < dom.label_offsets[n + 1];
       ++li) {
    const std::int32_t ci = dom.label_comps[li];
    const ComponentProblem& comp = dom.components[ci];
    const double coeff = 1.0 - comp.discount * h;
    const double hcost = h * dom.label_cost[li];
    if (comp.id.k == 0) {
      double cand = coeff * old[n] + hcost;
      if (cand < best) {
        best = cand;
        rec = {ci, -1};
      }
      continue;
    }
    const double hb = h * dom.label_speed[li];
    for (std::size_t m = 0; m < comp.directions.size(); ++m) {
      Eigen::Vector3d foot = x + hb * comp.directions[m];
      auto v = restricted_interpolate(dom, old, foot, comp);
      double cand = v ? coeff * *v + hcost : penalty;
      if (cand < best) {
        best = cand;
        rec = {ci, static_cast<std::int32_t>(m)};
      }
    }
  }
  return best;
}

}  // namespace

double effective_penalty(const StratifiedDomain& dom, const SolverConfig& cfg) {
  if (cfg.penalty > 0.0) return cfg.penalty;
  return std::min(10.0 * dom.bound_M / dom.c_bar, 1e12);
}

void validate_config(const StratifiedDomain& dom, const SolverConfig& cfg) {
  if (!(cfg.h > 0.0)) throw ConfigError("time step h must be positive");
  if (!(cfg.h * dom.c_max < 1.0))
    throw ConfigError("h * c_max must be below 1 (h < " +
                      std::to_string(1.0 / dom.c_max) +
                      " for this problem)");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (cfg.max_iterations < 1)
    throw ConfigError("max iterations must be at least 1");
  if (cfg.threads < 1) throw ConfigError("thread count must be at least 1");
  if (!(effective_penalty(dom, cfg) > dom.bound_M / dom.c_bar))
    throw ConfigError("penalty must exceed M / c_bar");
}

double candidate_value(const StratifiedDomain& dom,
                       const Eigen::VectorXd& values, NodeIndex node,
                       std::int32_t comp, std::int32_t control, double h,
                       double penalty) {
  for (std::int64_t li = dom.label_offsets[node];
       li < dom.label_offsets[node + 1]; ++li) {
    if (dom.label_comps[li] != comp) continue;
    const ComponentProblem& c = dom.components[comp];
    const double coeff = 1.0 - c.discount * h;
    const double hcost = h * dom.label_cost[li];
    if (c.id.k == 0) return coeff * values[node] + hcost;
    Eigen::Vector3d foot = dom.grid.coords(node) +
                           h * dom.label_speed[li] *
                               c.directions.at(static_cast<std::size_t>(control));
    auto v = restricted_interpolate(dom, values, foot, c);
    return v ? coeff * *v + hcost : penalty;
  }
  throw Error("component is not in L(node)");
}

std::pair<double, ArgminRecord> update_node(const StratifiedDomain& dom,
                                            const Eigen::VectorXd& values,
                                            NodeIndex node, double h,
                                            double penalty) {
  ArgminRecord rec;
  double v = update_one(dom, values, node, h, penalty, rec);
  return {v, rec};
}

Eigen::VectorXd apply_operator(const StratifiedDomain& dom,
                               const Eigen::VectorXd& values, double h,
                               double penalty) {
  Eigen::VectorXd out(values.size());
  ArgminRecord rec;
  for (NodeIndex n = 0; n < dom.grid.node_count(); ++n)
    out[n] = update_one(dom, values, n, h, penalty, rec);
  return out;
}

ValueField solve(const StratifiedDomain& dom, const SolverConfig& cfg,
                 const Eigen::VectorXd* initial) {
  validate_config(dom, cfg);
  const double penalty = effective_penalty(dom, cfg);
  const NodeIndex count = dom.grid.node_count();

  ValueField field;
  field.values = initial ? *initial : Eigen::VectorXd::Zero(count);
  field.argmin.resize(count);
  Eigen::VectorXd next(count);

  const int threads = std::min<int>(cfg.threads, static_cast<int>(count));
  std::vector<double> local_res(threads);

  auto sweep_range = [&](int t, NodeIndex begin, NodeIndex end) {
    const Eigen::VectorXd& old = field.values;
    double res = 0.0;
    for (NodeIndex n = begin; n < end; ++n) {
      next[n] = update_one(dom, old, n, cfg.h, penalty, field.argmin[n]);
      res = std::max(res, std::abs(next[n] - old[n]));
    }
    local_res[t] = res;
  };

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (threads == 1) {
      sweep_range(0, 0, count);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) {
        NodeIndex begin = count * t / threads;
        NodeIndex end = count * (t + 1) / threads;
        pool.emplace_back(sweep_range, t, begin, end);
      }
      for (auto& th : pool) th.join();
    }
    double res = 0.0;
    for (int t = 0; t < threads; ++t) res = std::max(res, local_res[t]);

    field.values.swap(next);
    field.iterations = iter;
    field.residual = res;
    field.residual_history.push_back(res);
    if (res <= cfg.tolerance) {
      field.converged = true;
      break;
    }
  }

  for (NodeIndex n = 0; n < count; ++n)
    if (field.values[n] >= penalty) ++field.penalized_nodes;
  return field;
}

double hamiltonian_value(const StratifiedDomain& dom, NodeIndex node, double r,
                         const Eigen::Vector3d& p) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t li = dom.label_offsets[node];
       li < dom.label_offsets[node + 1]; ++li) {
    const ComponentProblem& comp = dom.components[dom.label_comps[li]];
    const double base = comp.discount * r - dom.label_cost[li];
    if (comp.id.k == 0) {
      best = std::max(best, base);
      continue;
    }
    const double b = dom.label_speed[li];
    for (const Eigen::Vector3d& a : comp.directions)
      best = std::max(best, base - b * a.dot(p));
  }
  return best;
}

double consistency_residual(const StratifiedDomain& dom, double h,
                            const ExpressionTree& phi,
                            std::span<const ExpressionTree> grad) {
  const BoxGrid& g = dom.grid;
  const NodeIndex count = g.node_count();
  Eigen::VectorXd samples(count);
  for (NodeIndex n = 0; n < count; ++n) samples[n] = phi.eval(g.coords(n));

  double worst = 0.0;
  for (NodeIndex n = 0; n < count; ++n) {
    const Eigen::Vector3d x = g.coords(n);
    const double r = samples[n];

    double sigma = -std::numeric_limits<double>::infinity();
    bool boundary = false;
    for (std::int64_t li = dom.label_offsets[n];
         li < dom.label_offsets[n + 1] && !boundary; ++li) {
      const ComponentProblem& comp = dom.components[dom.label_comps[li]];
      const double coeff = 1.0 - comp.discount * h;
      if (comp.id.k == 0) {
        sigma = std::max(sigma, comp.discount * r - dom.label_cost[li]);
        continue;
      }
      const double hb = h * dom.label_speed[li];
      for (const Eigen::Vector3d& a : comp.directions) {
        auto w = restricted_interpolate(dom, samples, x + hb * a, comp);
        if (!w) {
          boundary = true;
          break;
        }
        sigma = std::max(sigma, comp.discount * r - coeff * (*w - r) / h -
                                    dom.label_cost[li]);
      }
    }
    if (boundary) continue;

    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int a = 0; a < g.dim; ++a) p[a] = grad[a].eval(x);
    worst = std::max(worst, std::abs(hamiltonian_value(dom, n, r, p) - sigma));
  }
  return worst;
}

}  // namespace hjsd
