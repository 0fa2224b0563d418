#include <cstdio>
#include <fstream>

#include "thickflow/cli.hpp"

namespace thickflow {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

const std::array<std::array<double, 3>, 6> node_bary{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0},
                                                      {0, 0.5, 0.5}, {0.5, 0, 0.5}}};

}  // namespace

void export_vtk(const Solution& sol, const std::filesystem::path& path) {
  const Mesh& m = *sol.mesh;
  const P2Layout& layout = *sol.layout;
  const int n = layout.num_nodes;
  std::vector<Vec2> velocity(n, Vec2::Zero());
  std::vector<double> pressure(n, 0.0), strain(n, 0.0);
  std::vector<int> count(n, 0);
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int a = 0; a < 6; ++a) {
      int node = layout.element_nodes[t][a];
      FieldValue v = sol.total(t, node_bary[a]);
      strain[node] += strain_rate(v.gradient).norm();
      if (count[node]++ == 0) velocity[node] = v.value;
    }
  for (int k = 0; k < n; ++k) strain[k] /= std::max(count[k], 1);
  for (int k = 0; k < m.num_vertices(); ++k) pressure[k] = sol.pressure.size() ? sol.pressure[k] : 0.0;
  for (int e = 0; e < m.num_edges(); ++e)
    pressure[layout.num_vertices + e] = 0.5 * (pressure[m.edges[e][0]] + pressure[m.edges[e][1]]);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "# vtk DataFile Version 3.0\nthickflow solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const auto& x : layout.node_coords) out << num(x[0]) << ' ' << num(x[1]) << " 0\n";
  out << "CELLS " << m.num_triangles() << ' ' << 7 * m.num_triangles() << '\n';
  for (const auto& nodes : layout.element_nodes) {
    out << 6;
    for (int a : nodes) out << ' ' << a;
    out << '\n';
  }
  out << "CELL_TYPES " << m.num_triangles() << '\n';
  for (int t = 0; t < m.num_triangles(); ++t) out << "22\n";
  out << "POINT_DATA " << n << '\n';
  out << "VECTORS velocity double\n";
  for (const auto& v : velocity) out << num(v[0]) << ' ' << num(v[1]) << " 0\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (double v : pressure) out << num(v) << '\n';
  out << "SCALARS strain_norm double 1\nLOOKUP_TABLE default\n";
  for (double v : strain) out << num(v) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace thickflow
