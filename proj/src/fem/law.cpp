#include <Eigen/Dense>
#include <cmath>

#include "thickflow/fem.hpp"

namespace thickflow {

PowerLaw::PowerLaw(double p_, double T_) : p(p_), T(T_) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidLaw("power-law exponent must satisfy p >= 2");
  if (!(T > 0.0)) throw InvalidLaw("truncation parameter T must be positive");
}

Mat2 strain_rate(const Mat2& grad) { return 0.5 * (grad + grad.transpose()); }

Mat2 stress(const Mat2& D, const PowerLaw& law) {
  double n = D.norm();
  double mu = law.floor() + (law.p == 2.0 ? 1.0 : std::pow(n, law.p - 2.0));
  return mu * D;
}

Mat2 stress_derivative(const Mat2& D, const Mat2& E, const PowerLaw& law) {
  double n = D.norm();
  if (law.p == 2.0) return (law.floor() + 1.0) * E;
  if (n == 0.0) return law.floor() * E;
  double np = std::pow(n, law.p - 2.0);
  double dot = (D.array() * E.array()).sum();
  return (law.floor() + np) * E + (law.p - 2.0) * np * dot / (n * n) * D;
}

namespace p2 {

std::array<double, 6> values(const std::array<double, 3>& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

std::array<Vec2, 6> reference_gradients(const std::array<double, 3>& l) {
  const Vec2 d0(-1.0, -1.0), d1(1.0, 0.0), d2(0.0, 1.0);
  return {(4.0 * l[0] - 1.0) * d0,        (4.0 * l[1] - 1.0) * d1,        (4.0 * l[2] - 1.0) * d2,
          4.0 * (l[1] * d0 + l[0] * d1), 4.0 * (l[2] * d1 + l[1] * d2), 4.0 * (l[0] * d2 + l[2] * d0)};
}

}  // namespace p2

ElementMap ElementMap::of(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  ElementMap e;
  e.origin = m.vertices[tri[0]];
  e.jacobian.col(0) = m.vertices[tri[1]] - e.origin;
  e.jacobian.col(1) = m.vertices[tri[2]] - e.origin;
  double det = e.jacobian.determinant();
  e.area = 0.5 * det;
  e.inverse_t = e.jacobian.inverse().transpose();
  return e;
}

Vec2 ElementMap::point(const std::array<double, 3>& bary) const {
  return origin + jacobian * Vec2(bary[1], bary[2]);
}

}  // namespace thickflow
