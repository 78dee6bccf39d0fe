#include "hjsd/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hjsd {

BoxGrid BoxGrid::make2d(int nx, int ny, double x0, double x1, double y0,
                        double y1) {
  if (nx < 2 || ny < 2) throw ConfigError("grid needs at least 2 nodes per axis");
  if (!(x0 < x1) || !(y0 < y1)) throw ConfigError("empty box extent");
  BoxGrid g;
  g.dim = 2;
  g.counts = {nx, ny, 1};
  g.lo = {x0, y0, 0.0};
  g.hi = {x1, y1, 0.0};
  g.spacing = {(x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1), 0.0};
  return g;
}

BoxGrid BoxGrid::make3d(int nx, int ny, int nz, double x0, double x1,
                        double y0, double y1, double z0, double z1) {
  if (nx < 2 || ny < 2 || nz < 2)
    throw ConfigError("grid needs at least 2 nodes per axis");
  if (!(x0 < x1) || !(y0 < y1) || !(z0 < z1))
    throw ConfigError("empty box extent");
  BoxGrid g;
  g.dim = 3;
  g.counts = {nx, ny, nz};
  g.lo = {x0, y0, z0};
  g.hi = {x1, y1, z1};
  g.spacing = {(x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1),
               (z1 - z0) / (nz - 1)};
  return g;
}

namespace detail {

// Local coordinates of `point` within its containing cell: cell index per
// axis in [0, N-2] and fractional offsets in [0, 1].
void cell_coords(const BoxGrid& grid, const Eigen::Vector3d& point,
                 Eigen::Vector3i& cell, Eigen::Vector3d& frac) {
  cell = {0, 0, 0};
  frac = {0.0, 0.0, 0.0};
  for (int a = 0; a < grid.dim; ++a) {
    double t = (point[a] - grid.lo[a]) / grid.spacing[a];
    int c = static_cast<int>(std::floor(t));
    c = std::clamp(c, 0, grid.counts[a] - 2);
    cell[a] = c;
    frac[a] = std::clamp(t - c, 0.0, 1.0);
  }
}

TriangleStencil triangle_weights(double u, double v) {
  // Cell split along the (0,0)-(1,1) diagonal; ties go to simplex 0.
  TriangleStencil s;
  if (u >= v) {
    s.di = {0, 1, 1};
    s.dj = {0, 0, 1};
    s.w = {1.0 - u, u - v, v};
  } else {
    s.di = {0, 0, 1};
    s.dj = {0, 1, 1};
    s.w = {1.0 - v, v - u, u};
  }
  return s;
}

}  // namespace detail

std::optional<InterpolationStencil> locate(const BoxGrid& grid,
                                           const Eigen::Vector3d& point) {
  if (!grid.contains(point)) return std::nullopt;
  Eigen::Vector3i cell;
  Eigen::Vector3d u;
  detail::cell_coords(grid, point, cell, u);

  InterpolationStencil st;
  if (grid.dim == 2) {
    auto t = detail::triangle_weights(u.x(), u.y());
    st.size = 3;
    for (int m = 0; m < 3; ++m) {
      st.nodes[m] = grid.linear(cell.x() + t.di[m], cell.y() + t.dj[m]);
      st.weights[m] = t.w[m];
    }
    return st;
  }

  // Kuhn decomposition: six tetrahedra indexed by the permutations below;
  // ties resolve to the first matching (lowest) one.
  static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const int* p = kPerms[0];
  for (const int* q : kPerms) {
    if (u[q[0]] >= u[q[1]] && u[q[1]] >= u[q[2]]) {
      p = q;
      break;
    }
  }
  Eigen::Vector3i v0 = cell, v1 = cell, v2 = cell, v3 = cell;
  v1[p[0]] += 1;
  v2[p[0]] += 1;
  v2[p[1]] += 1;
  v3 += Eigen::Vector3i::Ones();
  st.size = 4;
  st.nodes = {grid.linear(v0.x(), v0.y(), v0.z()),
              grid.linear(v1.x(), v1.y(), v1.z()),
              grid.linear(v2.x(), v2.y(), v2.z()),
              grid.linear(v3.x(), v3.y(), v3.z())};
  st.weights = {1.0 - u[p[0]], u[p[0]] - u[p[1]], u[p[1]] - u[p[2]], u[p[2]]};
  return st;
}

std::optional<double> interpolate(const BoxGrid& grid,
                                  const Eigen::VectorXd& field,
                                  const Eigen::Vector3d& point) {
  auto st = locate(grid, point);
  if (!st) return std::nullopt;
  double v = 0.0;
  for (int m = 0; m < st->size; ++m) v += st->weights[m] * field[st->nodes[m]];
  return v;
}

}  // namespace hjsd
