#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>

#include "hjsd/errors.hpp"

namespace hjsd {

using NodeIndex = std::int64_t;

/// Uniform box grid in 2D or 3D with a fixed simplicial decomposition:
/// each 2D cell splits into two triangles along the (low,low)-(high,high)
/// diagonal, each 3D cell into six Kuhn tetrahedra. Node (i,j,k) sits at
/// lo + (i,j,k) .* spacing, computed by multiplication. Nodes are
/// enumerated x-fastest.
struct BoxGrid {
  int dim = 2;
  Eigen::Vector3i counts{2, 2, 1};  // counts.z() == 1 in 2D
  Eigen::Vector3d lo{0, 0, 0};
  Eigen::Vector3d hi{1, 1, 0};
  Eigen::Vector3d spacing{1, 1, 0};

  static BoxGrid make2d(int nx, int ny, double x0, double x1, double y0,
                        double y1);
  static BoxGrid make3d(int nx, int ny, int nz, double x0, double x1,
                        double y0, double y1, double z0, double z1);

  NodeIndex node_count() const {
    return NodeIndex(counts.x()) * counts.y() * counts.z();
  }
  NodeIndex linear(int i, int j, int k = 0) const {
    return i + NodeIndex(counts.x()) * (j + NodeIndex(counts.y()) * k);
  }
  Eigen::Vector3i multi(NodeIndex n) const {
    int i = static_cast<int>(n % counts.x());
    n /= counts.x();
    int j = static_cast<int>(n % counts.y());
    int k = static_cast<int>(n / counts.y());
    return {i, j, k};
  }
  Eigen::Vector3d coords(const Eigen::Vector3i& idx) const {
    Eigen::Vector3d p = lo;
    for (int a = 0; a < dim; ++a) p[a] = lo[a] + idx[a] * spacing[a];
    return p;
  }
  Eigen::Vector3d coords(NodeIndex n) const { return coords(multi(n)); }
  bool contains(const Eigen::Vector3d& p) const {
    for (int a = 0; a < dim; ++a)
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
  }
  /// Nearest node index along axis `a`, rounding half away from zero.
  int snap_index(int a, double v) const {
    return static_cast<int>(std::llround((v - lo[a]) / spacing[a]));
  }
  double min_spacing() const {
    double s = spacing[0];
    for (int a = 1; a < dim; ++a) s = std::min(s, spacing[a]);
    return s;
  }
};

/// Barycentric stencil within the simplex containing a point.
struct InterpolationStencil {
  int size = 0;
  std::array<NodeIndex, 4> nodes{};
  std::array<double, 4> weights{};
};

/// Stencil of the simplex containing `point`, or nullopt if the point is
/// outside the closed box. Points on simplex boundaries resolve to the
/// lowest simplex index.
std::optional<InterpolationStencil> locate(const BoxGrid& grid,
                                           const Eigen::Vector3d& point);

/// Piecewise-linear interpolation of a nodal field; nullopt outside the box.
std::optional<double> interpolate(const BoxGrid& grid,
                                  const Eigen::VectorXd& field,
                                  const Eigen::Vector3d& point);

namespace detail {

void cell_coords(const BoxGrid& grid, const Eigen::Vector3d& point,
                 Eigen::Vector3i& cell, Eigen::Vector3d& frac);

struct TriangleStencil {
  std::array<int, 3> di, dj;
  std::array<double, 3> w;
};

TriangleStencil triangle_weights(double u, double v);

}  // namespace detail

}  // namespace hjsd
