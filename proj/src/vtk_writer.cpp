#include "hjsd/vtk_writer.hpp"

#include <fstream>
#include <iomanip>

namespace hjsd {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_vtk(const StratifiedDomain& dom, const ValueField& field,
               const DynamicsField& dynamics, const std::string& path) {
  const BoxGrid& g = dom.grid;
  const NodeIndex count = g.node_count();
  std::ofstream out = open_out(path);

  out << "# vtk DataFile Version 3.0\n";
  out << "hjsd solution\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << g.counts.x() << ' ' << g.counts.y() << ' '
      << g.counts.z() << '\n';
  out << "POINTS " << count << " double\n";
  for (NodeIndex n = 0; n < count; ++n) {
    Eigen::Vector3d p = g.coords(n);
    out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }

  out << "POINT_DATA " << count << '\n';
  out << "SCALARS value double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (NodeIndex n = 0; n < count; ++n) out << field.values[n] << '\n';

  out << "SCALARS stratum_dim int 1\n";
  out << "LOOKUP_TABLE default\n";
  for (NodeIndex n = 0; n < count; ++n) {
    int k = field.argmin[n].comp >= 0
                ? dom.components[field.argmin[n].comp].id.k
                : -1;
    out << k << '\n';
  }

  out << "VECTORS optimal_dynamics double\n";
  for (NodeIndex n = 0; n < count; ++n) {
    Eigen::Vector3d v = dynamics.vectors.col(n);
    out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_trajectories_vtk(const std::vector<TraceResult>& traces,
                            const std::string& path) {
  std::ofstream out = open_out(path);
  std::size_t total = 0;
  for (const auto& t : traces) total += t.points.size();

  out << "# vtk DataFile Version 3.0\n";
  out << "hjsd trajectories\n";
  out << "ASCII\n";
  out << "DATASET POLYDATA\n";
  out << "POINTS " << total << " double\n";
  for (const auto& t : traces)
    for (const auto& p : t.points)
      out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';

  out << "LINES " << traces.size() << ' ' << traces.size() + total << '\n';
  std::size_t offset = 0;
  for (const auto& t : traces) {
    out << t.points.size();
    for (std::size_t i = 0; i < t.points.size(); ++i) out << ' ' << offset + i;
    out << '\n';
    offset += t.points.size();
  }
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace hjsd
