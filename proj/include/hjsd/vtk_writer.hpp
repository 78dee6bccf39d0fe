#pragma once

#include <string>
#include <vector>

#include "hjsd/trajectory.hpp"

namespace hjsd {

/// Writes a legacy ASCII VTK structured grid with point data: SCALARS
/// value (float64), SCALARS stratum_dim (the dimension of each node's
/// argmin component), VECTORS optimal_dynamics. Points are listed
/// x-fastest; reals carry 17 significant digits.
void write_vtk(const StratifiedDomain& domain, const ValueField& field,
               const DynamicsField& dynamics, const std::string& path);

/// Writes traced trajectories as legacy ASCII VTK polydata line cells.
void write_trajectories_vtk(const std::vector<TraceResult>& traces,
                            const std::string& path);

}  // namespace hjsd
