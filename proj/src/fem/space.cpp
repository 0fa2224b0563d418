#include <cmath>

#include "thickflow/fem.hpp"
#include "thickflow/quadrature.hpp"

namespace thickflow {

P2Layout::P2Layout(const Mesh& m) {
  num_vertices = m.num_vertices();
  num_nodes = num_vertices + m.num_edges();
  element_nodes.resize(m.triangles.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const auto& te = m.triangle_edges[t];
    element_nodes[t] = {tri[0], tri[1], tri[2], num_vertices + te[0], num_vertices + te[1], num_vertices + te[2]};
  }
  node_coords = m.vertices;
  for (int e = 0; e < m.num_edges(); ++e) node_coords.push_back(m.edge_midpoint(e));
  wall_node.assign(num_nodes, 0);
  cut_node.assign(num_nodes, 0);
  for (const auto& b : m.boundary) {
    auto& mask = b.tag == BoundaryTag::wall ? wall_node : cut_node;
    mask[m.edges[b.edge][0]] = 1;
    mask[m.edges[b.edge][1]] = 1;
    mask[num_vertices + b.edge] = 1;
  }
}

DofMap::DofMap(const P2Layout& layout, const std::vector<char>& constrained) {
  velocity.assign(2 * layout.num_nodes, -1);
  int k = 0;
  for (int n = 0; n < layout.num_nodes; ++n) {
    if (constrained[n]) continue;
    velocity[2 * n] = k++;
    velocity[2 * n + 1] = k++;
  }
  num_free_velocity = k;
  num_pressure = layout.num_vertices;
  pressure_offset = k;
  multiplier = k + num_pressure;
  size = multiplier + 1;
}

FieldValue evaluate_p2(const Mesh& m, const P2Layout& layout, const Vector& coeffs, int t,
                       const std::array<double, 3>& bary) {
  ElementMap e = ElementMap::of(m, t);
  auto N = p2::values(bary);
  auto dR = p2::reference_gradients(bary);
  FieldValue f{Vec2::Zero(), Mat2::Zero()};
  for (int k = 0; k < 6; ++k) {
    int n = layout.element_nodes[t][k];
    Vec2 c(coeffs[2 * n], coeffs[2 * n + 1]);
    Vec2 g = e.inverse_t * dR[k];
    f.value += N[k] * c;
    f.gradient += c * g.transpose();
  }
  return f;
}

Vector interpolate_p2(const P2Layout& layout, const std::function<Vec2(const Vec2&)>& f) {
  Vector out(2 * layout.num_nodes);
  for (int n = 0; n < layout.num_nodes; ++n) {
    Vec2 v = f(layout.node_coords[n]);
    out[2 * n] = v[0];
    out[2 * n + 1] = v[1];
  }
  return out;
}

Vector interpolate_p1(const Mesh& m, const std::function<double(const Vec2&)>& f) {
  Vector out(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) out[v] = f(m.vertices[v]);
  return out;
}

FieldValue Solution::perturbation(int t, const std::array<double, 3>& bary) const {
  return evaluate_p2(*mesh, *layout, velocity, t, bary);
}

FieldValue Solution::total(int t, const std::array<double, 3>& bary) const {
  FieldValue f = perturbation(t, bary);
  if (lifting) {
    Vec2 x = ElementMap::of(*mesh, t).point(bary);
    f.value += lifting->value(x);
    f.gradient += lifting->gradient(x);
  }
  return f;
}

QuadratureCache::QuadratureCache(const Mesh& m) {
  const auto& rule = triangle_rule_degree6();
  points_per_element = static_cast<int>(rule.size());
  points.reserve(rule.size() * m.triangles.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    ElementMap e = ElementMap::of(m, t);
    for (const auto& q : rule) {
      Point p;
      p.bary = q.bary;
      p.x = e.point(q.bary);
      p.weight = q.weight * e.area;
      p.N = p2::values(q.bary);
      auto dR = p2::reference_gradients(q.bary);
      for (int k = 0; k < 6; ++k) p.dN[k] = e.inverse_t * dR[k];
      points.push_back(p);
    }
  }
}

Vector transfer_velocity(const Mesh& from, const P2Layout& from_layout, const Vector& coeffs,
                         const P2Layout& to_layout) {
  MeshLocator locator(from);
  Vector out = Vector::Zero(2 * to_layout.num_nodes);
  for (int n = 0; n < to_layout.num_nodes; ++n) {
    auto hit = locator.locate(to_layout.node_coords[n], 1e-9);
    if (!hit) continue;
    FieldValue f = evaluate_p2(from, from_layout, coeffs, hit->triangle, hit->bary);
    out[2 * n] = f.value[0];
    out[2 * n + 1] = f.value[1];
  }
  return out;
}

Vector transfer_pressure(const Mesh& from, const Vector& pressure, const Mesh& to) {
  MeshLocator locator(from);
  Vector out = Vector::Zero(to.num_vertices());
  for (int v = 0; v < to.num_vertices(); ++v) {
    auto hit = locator.locate(to.vertices[v], 1e-9);
    if (!hit) continue;
    const auto& tri = from.triangles[hit->triangle];
    out[v] = hit->bary[0] * pressure[tri[0]] + hit->bary[1] * pressure[tri[1]] + hit->bary[2] * pressure[tri[2]];
  }
  return out;
}

}  // namespace thickflow
