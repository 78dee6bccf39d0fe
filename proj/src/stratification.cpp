#include "hjsd/stratification.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace hjsd {

namespace {

struct AxisRange {
  int open_lo, open_hi, closure_lo, closure_hi;
};

// Projects an extent [e0, e1] onto node indices along `axis`. Ends inside
// the box snap to the nearest node and are excluded from the open range;
// ends falling out of the box clip to the boundary node, which then
// belongs to the open set (semi-infinite extent).
AxisRange project_extent(const BoxGrid& g, int axis, double e0, double e1,
                         int line) {
  if (e0 > e1) std::swap(e0, e1);
  int n = g.counts[axis];
  AxisRange r{};
  if (e0 < g.lo[axis]) {
    r.closure_lo = r.open_lo = 0;
  } else {
    int i = g.snap_index(axis, e0);
    if (i > n - 1) throw FileError("extent lies outside the box", line);
    r.closure_lo = i;
    r.open_lo = i + 1;
  }
  if (e1 > g.hi[axis]) {
    r.closure_hi = r.open_hi = n - 1;
  } else {
    int i = g.snap_index(axis, e1);
    if (i < 0) throw FileError("extent lies outside the box", line);
    r.closure_hi = i;
    r.open_hi = i - 1;
  }
  if (r.open_lo > r.open_hi)
    throw FileError("degenerate extent: no interior nodes after projection",
                    line);
  return r;
}

int snap_fixed(const BoxGrid& g, int axis, double v, int line) {
  int i = g.snap_index(axis, v);
  if (i < 0 || i > g.counts[axis] - 1)
    throw FileError("coordinate lies outside the box", line);
  return i;
}

template <class F>
void for_each_closure_node(const BoxGrid& g, const ComponentGeometry& geo,
                           F&& f) {
  if (const auto* p = std::get_if<PointGeometry>(&geo)) {
    f(g.linear(p->node.x(), p->node.y(), p->node.z()));
  } else if (const auto* l = std::get_if<LineGeometry>(&geo)) {
    Eigen::Vector3i idx = l->fixed;
    for (int i = l->closure_lo; i <= l->closure_hi; ++i) {
      idx[l->axis] = i;
      f(g.linear(idx.x(), idx.y(), idx.z()));
    }
  } else if (const auto* s = std::get_if<PlaneGeometry>(&geo)) {
    Eigen::Vector3i idx;
    idx[s->normal_axis] = s->fixed_index;
    for (int v = s->closure_lo[1]; v <= s->closure_hi[1]; ++v) {
      idx[s->axes[1]] = v;
      for (int u = s->closure_lo[0]; u <= s->closure_hi[0]; ++u) {
        idx[s->axes[0]] = u;
        f(g.linear(idx.x(), idx.y(), idx.z()));
      }
    }
  } else {
    const auto& r = std::get<RegionGeometry>(geo);
    for (NodeIndex n = 0; n < g.node_count(); ++n)
      if (r.closure[n]) f(n);
  }
}

template <class F>
void for_each_open_node(const BoxGrid& g, const ComponentGeometry& geo,
                        F&& f) {
  if (const auto* p = std::get_if<PointGeometry>(&geo)) {
    f(g.linear(p->node.x(), p->node.y(), p->node.z()));
  } else if (const auto* l = std::get_if<LineGeometry>(&geo)) {
    Eigen::Vector3i idx = l->fixed;
    for (int i = l->open_lo; i <= l->open_hi; ++i) {
      idx[l->axis] = i;
      f(g.linear(idx.x(), idx.y(), idx.z()));
    }
  } else if (const auto* s = std::get_if<PlaneGeometry>(&geo)) {
    Eigen::Vector3i idx;
    idx[s->normal_axis] = s->fixed_index;
    for (int v = s->open_lo[1]; v <= s->open_hi[1]; ++v) {
      idx[s->axes[1]] = v;
      for (int u = s->open_lo[0]; u <= s->open_hi[0]; ++u) {
        idx[s->axes[0]] = u;
        f(g.linear(idx.x(), idx.y(), idx.z()));
      }
    }
  } else {
    const auto& r = std::get<RegionGeometry>(geo);
    for (NodeIndex n = 0; n < g.node_count(); ++n)
      if (r.open[n]) f(n);
  }
}

ExpressionTree bind_expression(const std::string& text, int dim, int line) {
  try {
    ExpressionTree t = ExpressionTree::parse(text);
    if (dim == 2 && t.uses_z())
      throw FileError("expression uses z in a 2D problem", line);
    return t;
  } catch (const ExprParseError& e) {
    throw FileError(std::string("bad expression: ") + e.what(), line);
  }
}

std::string node_str(const BoxGrid& g, NodeIndex n) {
  Eigen::Vector3d p = g.coords(n);
  std::string s = "(" + std::to_string(p.x()) + ", " + std::to_string(p.y());
  if (g.dim == 3) s += ", " + std::to_string(p.z());
  return s + ")";
}

}  // namespace

std::vector<std::vector<std::uint8_t>> flood_fill_regions(
    const BoxGrid& grid, const std::vector<std::uint8_t>& barrier,
    const std::vector<Eigen::Vector3i>& seeds) {
  const NodeIndex count = grid.node_count();
  std::vector<std::vector<std::uint8_t>> regions;
  std::vector<std::int32_t> owner(count, -1);

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    NodeIndex seed = grid.linear(seeds[s].x(), seeds[s].y(), seeds[s].z());
    if (barrier[seed])
      throw StratificationError("region seed " + node_str(grid, seed) +
                                " lies on a lower-dimensional component");
    if (owner[seed] >= 0)
      throw StratificationError(
          "region seeds " + std::to_string(owner[seed] + 1) + " and " +
          std::to_string(s + 1) + " fill the same connected region");

    std::vector<std::uint8_t> mask(count, 0);
    std::deque<NodeIndex> queue{seed};
    mask[seed] = 1;
    owner[seed] = static_cast<std::int32_t>(s);
    while (!queue.empty()) {
      NodeIndex n = queue.front();
      queue.pop_front();
      Eigen::Vector3i idx = grid.multi(n);
      for (int a = 0; a < grid.dim; ++a) {
        for (int d : {-1, 1}) {
          Eigen::Vector3i nb = idx;
          nb[a] += d;
          if (nb[a] < 0 || nb[a] >= grid.counts[a]) continue;
          NodeIndex m = grid.linear(nb.x(), nb.y(), nb.z());
          if (barrier[m] || mask[m]) continue;
          mask[m] = 1;
          owner[m] = static_cast<std::int32_t>(s);
          queue.push_back(m);
        }
      }
    }
    regions.push_back(std::move(mask));
  }

  for (NodeIndex n = 0; n < count; ++n)
    if (!barrier[n] && owner[n] < 0)
      throw StratificationError("node " + node_str(grid, n) +
                                " is covered by no region and no "
                                "lower-dimensional component");
  return regions;
}

StratifiedDomain build_domain(const ProblemFile& pf) {
  StratifiedDomain dom;
  dom.grid = pf.dim == 2
                 ? BoxGrid::make2d(pf.counts.x(), pf.counts.y(), pf.lo.x(),
                                   pf.hi.x(), pf.lo.y(), pf.hi.y())
                 : BoxGrid::make3d(pf.counts.x(), pf.counts.y(), pf.counts.z(),
                                   pf.lo.x(), pf.hi.x(), pf.lo.y(), pf.hi.y(),
                                   pf.lo.z(), pf.hi.z());
  const BoxGrid& g = dom.grid;

  dom.a1 = discretize_controls(1, pf.na1);
  dom.a2 = discretize_controls(2, pf.na2);
  if (pf.dim == 3) dom.a3 = discretize_controls(3, pf.na3);

  // Project points, lines and planes; collect region seeds.
  std::vector<ComponentProblem> points, lines, planes, regions;
  std::vector<Eigen::Vector3i> seeds;
  std::vector<const Directive*> region_dirs;

  for (const Directive& d : pf.directives) {
    using Tag = Directive::Tag;
    ComponentProblem c;
    c.source_line = d.line;
    c.discount = d.discount;
    c.cost = bind_expression(d.cost, pf.dim, d.line);
    if (!d.speed.empty()) c.speed = bind_expression(d.speed, pf.dim, d.line);

    auto make_line = [&](int free_axis, std::array<int, 2> fixed_axes,
                         std::array<double, 2> fixed_vals, double e0,
                         double e1) {
      LineGeometry l;
      l.axis = free_axis;
      l.fixed = Eigen::Vector3i::Zero();
      for (int m = 0; m < (pf.dim == 2 ? 1 : 2); ++m)
        l.fixed[fixed_axes[m]] = snap_fixed(g, fixed_axes[m], fixed_vals[m],
                                            d.line);
      AxisRange r = project_extent(g, free_axis, e0, e1, d.line);
      l.open_lo = r.open_lo;
      l.open_hi = r.open_hi;
      l.closure_lo = r.closure_lo;
      l.closure_hi = r.closure_hi;
      c.geometry = l;
      lines.push_back(std::move(c));
    };
    auto make_plane = [&](int normal, double fixed_val,
                          std::array<double, 4> ext) {
      PlaneGeometry s;
      s.normal_axis = normal;
      s.fixed_index = snap_fixed(g, normal, fixed_val, d.line);
      int w = 0;
      for (int a = 0; a < 3; ++a)
        if (a != normal) s.axes[w++] = a;
      for (int m = 0; m < 2; ++m) {
        AxisRange r =
            project_extent(g, s.axes[m], ext[2 * m], ext[2 * m + 1], d.line);
        s.open_lo[m] = r.open_lo;
        s.open_hi[m] = r.open_hi;
        s.closure_lo[m] = r.closure_lo;
        s.closure_hi[m] = r.closure_hi;
      }
      c.geometry = s;
      planes.push_back(std::move(c));
    };

    switch (d.tag) {
      case Tag::P: {
        PointGeometry p;
        p.node = Eigen::Vector3i::Zero();
        for (int a = 0; a < pf.dim; ++a)
          p.node[a] = snap_fixed(g, a, d.geom[a], d.line);
        c.geometry = p;
        points.push_back(std::move(c));
        break;
      }
      case Tag::LX:
        make_line(1, {0, 0}, {d.geom[0], 0}, d.geom[1], d.geom[2]);
        break;
      case Tag::LY:
        make_line(0, {1, 0}, {d.geom[0], 0}, d.geom[1], d.geom[2]);
        break;
      case Tag::LXY:
        make_line(2, {0, 1}, {d.geom[0], d.geom[1]}, d.geom[2], d.geom[3]);
        break;
      case Tag::LYZ:
        make_line(0, {1, 2}, {d.geom[0], d.geom[1]}, d.geom[2], d.geom[3]);
        break;
      case Tag::LXZ:
        make_line(1, {0, 2}, {d.geom[0], d.geom[1]}, d.geom[2], d.geom[3]);
        break;
      case Tag::SX:
        make_plane(0, d.geom[0], {d.geom[1], d.geom[2], d.geom[3], d.geom[4]});
        break;
      case Tag::SY:
        make_plane(1, d.geom[0], {d.geom[1], d.geom[2], d.geom[3], d.geom[4]});
        break;
      case Tag::SZ:
        make_plane(2, d.geom[0], {d.geom[1], d.geom[2], d.geom[3], d.geom[4]});
        break;
      case Tag::S:
      case Tag::V: {
        Eigen::Vector3i seed = Eigen::Vector3i::Zero();
        for (int a = 0; a < pf.dim; ++a)
          seed[a] = snap_fixed(g, a, d.geom[a], d.line);
        seeds.push_back(seed);
        region_dirs.push_back(&d);
        regions.push_back(std::move(c));  // geometry filled after flood fill
        break;
      }
    }
  }

  // Barrier: closures of every component of dimension < N.
  std::vector<std::uint8_t> barrier(g.node_count(), 0);
  for (const auto* group : {&points, &lines, &planes})
    for (const ComponentProblem& c : *group)
      for_each_closure_node(g, c.geometry, [&](NodeIndex n) { barrier[n] = 1; });

  if (regions.empty())
    throw StratificationError(
        "no full-dimensional component declared (#S/#V directive missing)");

  auto masks = flood_fill_regions(g, barrier, seeds);
  for (std::size_t s = 0; s < masks.size(); ++s) {
    RegionGeometry r;
    r.open = std::move(masks[s]);
    // Discrete closure: region nodes plus face-adjacent barrier nodes.
    r.closure = r.open;
    for (NodeIndex n = 0; n < g.node_count(); ++n) {
      if (!r.open[n]) continue;
      Eigen::Vector3i idx = g.multi(n);
      for (int a = 0; a < g.dim; ++a) {
        for (int d : {-1, 1}) {
          Eigen::Vector3i nb = idx;
          nb[a] += d;
          if (nb[a] < 0 || nb[a] >= g.counts[a]) continue;
          NodeIndex m = g.linear(nb.x(), nb.y(), nb.z());
          if (barrier[m]) r.closure[m] = 1;
        }
      }
    }
    regions[s].geometry = std::move(r);
  }

  // Assemble in ascending (k, j) and attach embedded control directions.
  auto append_group = [&](std::vector<ComponentProblem>& group, int k) {
    int j = 0;
    for (ComponentProblem& c : group) {
      c.id = {k, j++};
      if (k == 1) {
        int axis = std::get<LineGeometry>(c.geometry).axis;
        for (const auto& a : dom.a1.vectors)
          c.directions.push_back(a.x() * Eigen::Vector3d::Unit(axis));
      } else if (k == 2 && pf.dim == 3) {
        const auto& s = std::get<PlaneGeometry>(c.geometry);
        for (const auto& a : dom.a2.vectors)
          c.directions.push_back(a.x() * Eigen::Vector3d::Unit(s.axes[0]) +
                                 a.y() * Eigen::Vector3d::Unit(s.axes[1]));
      } else if (k == pf.dim) {
        const ControlSet& full = pf.dim == 2 ? dom.a2 : dom.a3;
        c.directions = full.vectors;
      }
      dom.components.push_back(std::move(c));
    }
  };
  append_group(points, 0);
  append_group(lines, 1);
  if (pf.dim == 3) append_group(planes, 2);
  append_group(regions, pf.dim);

  // Label map L(x_sigma) with cached nodal speed/cost values.
  const NodeIndex count = g.node_count();
  std::vector<std::vector<std::int32_t>> per_node(count);
  for (std::size_t ci = 0; ci < dom.components.size(); ++ci)
    for_each_closure_node(g, dom.components[ci].geometry, [&](NodeIndex n) {
      per_node[n].push_back(static_cast<std::int32_t>(ci));
    });

  dom.label_offsets.assign(count + 1, 0);
  for (NodeIndex n = 0; n < count; ++n)
    dom.label_offsets[n + 1] =
        dom.label_offsets[n] + static_cast<std::int64_t>(per_node[n].size());
  dom.label_comps.reserve(dom.label_offsets[count]);
  dom.label_speed.reserve(dom.label_offsets[count]);
  dom.label_cost.reserve(dom.label_offsets[count]);
  dom.bound_M = 0.0;
  for (NodeIndex n = 0; n < count; ++n) {
    Eigen::Vector3d p = g.coords(n);
    for (std::int32_t ci : per_node[n]) {
      const ComponentProblem& c = dom.components[ci];
      double b = c.speed ? c.speed->eval(p) : 0.0;
      double l = c.cost.eval(p);
      dom.label_comps.push_back(ci);
      dom.label_speed.push_back(b);
      dom.label_cost.push_back(l);
      dom.bound_M = std::max({dom.bound_M, std::abs(b), std::abs(l)});
    }
  }

  dom.c_bar = dom.components.front().discount;
  dom.c_max = dom.c_bar;
  for (const ComponentProblem& c : dom.components) {
    dom.c_bar = std::min(dom.c_bar, c.discount);
    dom.c_max = std::max(dom.c_max, c.discount);
  }
  return dom;
}

std::vector<std::string> validate_afs(const StratifiedDomain& dom) {
  const BoxGrid& g = dom.grid;
  std::vector<std::string> warnings;

  // (i) components of equal dimension have disjoint open sets.
  std::vector<std::int32_t> open_owner(g.node_count());
  for (int k = 0; k <= g.dim; ++k) {
    std::fill(open_owner.begin(), open_owner.end(), -1);
    for (std::size_t ci = 0; ci < dom.components.size(); ++ci) {
      const ComponentProblem& c = dom.components[ci];
      if (c.id.k != k) continue;
      for_each_open_node(g, c.geometry, [&](NodeIndex n) {
        if (open_owner[n] >= 0)
          throw StratificationError(
              "components of dimension " + std::to_string(k) + " overlap at " +
              node_str(g, n));
        open_owner[n] = static_cast<std::int32_t>(ci);
      });
    }
  }

  // Open-set membership per dimension, for closure checks below.
  std::vector<std::vector<std::uint8_t>> open_of_dim(g.dim + 1);
  for (int k = 0; k <= g.dim; ++k) open_of_dim[k].assign(g.node_count(), 0);
  for (const ComponentProblem& c : dom.components)
    for_each_open_node(g, c.geometry,
                       [&](NodeIndex n) { open_of_dim[c.id.k][n] = 1; });

  auto in_lower_stratum = [&](NodeIndex n, int k) {
    for (int l = 0; l < k; ++l)
      if (open_of_dim[l][n]) return true;
    return false;
  };

  // (ii)/(iii) closure minus the open set must lie in lower strata.
  for (const ComponentProblem& c : dom.components) {
    if (c.id.k == 0 || c.id.k == g.dim) continue;
    std::vector<std::uint8_t> open(g.node_count(), 0);
    for_each_open_node(g, c.geometry, [&](NodeIndex n) { open[n] = 1; });
    for_each_closure_node(g, c.geometry, [&](NodeIndex n) {
      if (!open[n] && !in_lower_stratum(n, c.id.k))
        warnings.push_back("closure point " + node_str(g, n) +
                           " of component (" + std::to_string(c.id.k) + "," +
                           std::to_string(c.id.j) +
                           ") is not declared in a lower stratum");
    });
  }

  // A declared point sitting inside the open set of a line or plane
  // violates the isolation condition for M^0.
  for (const ComponentProblem& c : dom.components) {
    if (c.id.k != 0) continue;
    NodeIndex n;
    {
      const auto& p = std::get<PointGeometry>(c.geometry);
      n = g.linear(p.node.x(), p.node.y(), p.node.z());
    }
    for (int k = 1; k < g.dim; ++k)
      if (open_of_dim[k][n])
        warnings.push_back("point component (0," + std::to_string(c.id.j) +
                           ") at " + node_str(g, n) +
                           " lies inside an open component of dimension " +
                           std::to_string(k));
  }
  return warnings;
}

std::optional<double> restricted_interpolate(const StratifiedDomain& dom,
                                             const Eigen::VectorXd& field,
                                             const Eigen::Vector3d& point,
                                             const ComponentProblem& comp) {
  const BoxGrid& g = dom.grid;
  constexpr double kIndexTol = 1e-9;

  if (const auto* p = std::get_if<PointGeometry>(&comp.geometry)) {
    Eigen::Vector3d c = g.coords(p->node);
    for (int a = 0; a < g.dim; ++a)
      if (std::abs(point[a] - c[a]) > kIndexTol * g.spacing[a])
        return std::nullopt;
    return field[g.linear(p->node.x(), p->node.y(), p->node.z())];
  }

  if (const auto* l = std::get_if<LineGeometry>(&comp.geometry)) {
    for (int a = 0; a < g.dim; ++a) {
      if (a == l->axis) continue;
      double fixed = g.lo[a] + l->fixed[a] * g.spacing[a];
      if (std::abs(point[a] - fixed) > kIndexTol * g.spacing[a])
        return std::nullopt;
    }
    double t = (point[l->axis] - g.lo[l->axis]) / g.spacing[l->axis];
    if (t < l->closure_lo - kIndexTol || t > l->closure_hi + kIndexTol)
      return std::nullopt;
    int i0 = std::clamp(static_cast<int>(std::floor(t)), l->closure_lo,
                        l->closure_hi - 1);
    double w = std::clamp(t - i0, 0.0, 1.0);
    Eigen::Vector3i ia = l->fixed, ib = l->fixed;
    ia[l->axis] = i0;
    ib[l->axis] = i0 + 1;
    return (1.0 - w) * field[g.linear(ia.x(), ia.y(), ia.z())] +
           w * field[g.linear(ib.x(), ib.y(), ib.z())];
  }

  if (const auto* s = std::get_if<PlaneGeometry>(&comp.geometry)) {
    double fixed = g.lo[s->normal_axis] + s->fixed_index * g.spacing[s->normal_axis];
    if (std::abs(point[s->normal_axis] - fixed) >
        kIndexTol * g.spacing[s->normal_axis])
      return std::nullopt;
    double t[2];
    int cell[2];
    double frac[2];
    for (int m = 0; m < 2; ++m) {
      int a = s->axes[m];
      t[m] = (point[a] - g.lo[a]) / g.spacing[a];
      if (t[m] < s->closure_lo[m] - kIndexTol ||
          t[m] > s->closure_hi[m] + kIndexTol)
        return std::nullopt;
      cell[m] = std::clamp(static_cast<int>(std::floor(t[m])),
                           s->closure_lo[m], s->closure_hi[m] - 1);
      frac[m] = std::clamp(t[m] - cell[m], 0.0, 1.0);
    }
    auto tri = detail::triangle_weights(frac[0], frac[1]);
    double v = 0.0;
    for (int m = 0; m < 3; ++m) {
      Eigen::Vector3i idx;
      idx[s->normal_axis] = s->fixed_index;
      idx[s->axes[0]] = cell[0] + tri.di[m];
      idx[s->axes[1]] = cell[1] + tri.dj[m];
      v += tri.w[m] * field[g.linear(idx.x(), idx.y(), idx.z())];
    }
    return v;
  }

  const auto& r = std::get<RegionGeometry>(comp.geometry);
  auto st = locate(g, point);
  if (!st) return std::nullopt;
  double v = 0.0;
  for (int m = 0; m < st->size; ++m) {
    if (st->weights[m] > 1e-14 && !r.closure[st->nodes[m]]) return std::nullopt;
    v += st->weights[m] * field[st->nodes[m]];
  }
  return v;
}

}  // namespace hjsd
