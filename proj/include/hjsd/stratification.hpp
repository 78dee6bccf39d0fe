#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hjsd/controls.hpp"
#include "hjsd/expr.hpp"
#include "hjsd/grid.hpp"
#include "hjsd/problem_file.hpp"

namespace hjsd {

/// Component identifier: stratum dimension k and index j within it.
struct ComponentId {
  int k = 0;
  int j = 0;
  friend bool operator==(ComponentId, ComponentId) = default;
};

struct PointGeometry {
  Eigen::Vector3i node;
};

/// Grid-projected axis-aligned open segment. `open_*` is the inclusive
/// node-index range of the open set along `axis`; `closure_*` extends it
/// by the end nodes where the segment ends inside the box.
struct LineGeometry {
  int axis = 0;
  Eigen::Vector3i fixed;  // node indices on the non-free axes
  int open_lo = 0, open_hi = 0;
  int closure_lo = 0, closure_hi = 0;
};

/// Grid-projected axis-aligned open rectangle in 3D (axis_u < axis_v).
struct PlaneGeometry {
  int normal_axis = 0;
  int fixed_index = 0;
  std::array<int, 2> axes{};  // the two free axes
  std::array<int, 2> open_lo{}, open_hi{};
  std::array<int, 2> closure_lo{}, closure_hi{};
};

/// Flood-filled full-dimensional region, as per-node masks.
struct RegionGeometry {
  std::vector<std::uint8_t> open;
  std::vector<std::uint8_t> closure;
};

using ComponentGeometry =
    std::variant<PointGeometry, LineGeometry, PlaneGeometry, RegionGeometry>;

/// One connected component M^{k,j} with its control problem.
struct ComponentProblem {
  ComponentId id;
  ComponentGeometry geometry;
  std::optional<ExpressionTree> speed;  // absent for k = 0
  ExpressionTree cost = ExpressionTree::constant(0.0);
  double discount = 0.0;
  int source_line = 0;
  /// Control directions embedded in R^N via the tangent axes (empty k=0).
  std::vector<Eigen::Vector3d> directions;
};

/// The discrete stratified problem: grid, components, per-node label map
/// L(x_sigma) with cached speed/cost values, and data bounds.
/// Immutable once built; shared read-only by the solver.
struct StratifiedDomain {
  BoxGrid grid;
  std::vector<ComponentProblem> components;  // ascending (k, j)

  // L(x_sigma) in CSR form, parallel arrays of cached nodal values.
  std::vector<std::int64_t> label_offsets;  // node_count + 1 entries
  std::vector<std::int32_t> label_comps;
  std::vector<double> label_speed;
  std::vector<double> label_cost;

  double bound_M = 0.0;  // sup over nodes/components of |b|, |l|
  double c_bar = 0.0;    // min discount
  double c_max = 0.0;    // max discount

  ControlSet a1, a2, a3;

  std::span<const std::int32_t> labels(NodeIndex n) const {
    return {label_comps.data() + label_offsets[n],
            label_comps.data() + label_offsets[n + 1]};
  }
};

/// Builds the discrete stratified domain from a parsed problem file:
/// projects geometry, flood-fills regions, assembles labels and caches.
/// Throws FileError / StratificationError.
StratifiedDomain build_domain(const ProblemFile& pf);

/// Flood fill of face-connected non-barrier nodes from each seed node.
/// Returns one open mask per seed. Throws StratificationError when a seed
/// sits on a barrier node, two seeds fill the same region, or some node is
/// covered by neither a barrier nor a region.
std::vector<std::vector<std::uint8_t>> flood_fill_regions(
    const BoxGrid& grid, const std::vector<std::uint8_t>& barrier,
    const std::vector<Eigen::Vector3i>& seeds);

/// Admissibility diagnostics: closure-condition violations are returned as
/// warnings; overlapping same-dimension components throw.
std::vector<std::string> validate_afs(const StratifiedDomain& domain);

/// Interpolation restricted to a component's closure: 1D along lines, 2D
/// triangles within planes, simplicial for full-dimensional regions with
/// all stencil nodes required in the region closure. Returns nullopt when
/// the point leaves the closure (penalized by the solver).
std::optional<double> restricted_interpolate(const StratifiedDomain& domain,
                                             const Eigen::VectorXd& field,
                                             const Eigen::Vector3d& point,
                                             const ComponentProblem& comp);

}  // namespace hjsd
