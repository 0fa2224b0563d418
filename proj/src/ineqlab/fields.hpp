#pragma once

#include <vector>

#include "thickflow/fem.hpp"

namespace thickflow::detail {

// Quadrature-point gradients of vector and scalar P2 fields on a fixed mesh.
class P2Fields {
 public:
  explicit P2Fields(const Mesh& m) : mesh_(&m), layout_(m), cache_(m) {}

  const P2Layout& layout() const { return layout_; }
  const QuadratureCache& cache() const { return cache_; }
  int num_points() const { return static_cast<int>(cache_.points.size()); }

  Mat2 vector_gradient(const Vector& full, int t, int q) const {
    const auto& P = cache_.at(t, q);
    const auto& nodes = layout_.element_nodes[t];
    Mat2 G = Mat2::Zero();
    for (int a = 0; a < 6; ++a)
      for (int c = 0; c < 2; ++c) G.row(c) += full[2 * nodes[a] + c] * P.dN[a].transpose();
    return G;
  }

  double scalar_value(const Vector& v, int t, int q) const {
    const auto& P = cache_.at(t, q);
    const auto& nodes = layout_.element_nodes[t];
    double s = 0.0;
    for (int a = 0; a < 6; ++a) s += v[nodes[a]] * P.N[a];
    return s;
  }

  Vec2 scalar_gradient(const Vector& v, int t, int q) const {
    const auto& P = cache_.at(t, q);
    const auto& nodes = layout_.element_nodes[t];
    Vec2 g = Vec2::Zero();
    for (int a = 0; a < 6; ++a) g += v[nodes[a]] * P.dN[a];
    return g;
  }

 private:
  const Mesh* mesh_;
  P2Layout layout_;
  QuadratureCache cache_;
};

}  // namespace thickflow::detail
