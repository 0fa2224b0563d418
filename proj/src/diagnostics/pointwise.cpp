#include <algorithm>
#include <cmath>
#include <limits>

#include "thickflow/diagnostics.hpp"

namespace thickflow {

ShearBoundReport shear_bound_check(const Solution& sol, double c, int i, int j, double t_lo, double t_hi) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw RegionMismatch("derivative indices must be 0 or 1");
  if (t_hi > sol.truncation * (1.0 + 1e-12) || !(t_hi > t_lo)) throw RegionMismatch("region outside the mesh");
  const Mesh& m = *sol.mesh;
  QuadratureCache cache(m);
  const double e = 1.0 / (sol.law.p - 1.0);
  ShearBoundReport rep;
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      double a = std::abs(P.x[0]);
      if (a < t_lo || a > t_hi) continue;
      double d = std::abs(sol.total(t, P.bary).gradient(i, j));
      double w = std::pow(std::abs(P.x[1]), e);
      any = true;
      if (w > 0.0) best = std::min(best, d / w);
      if (d < c * w) rep.violation_measure += P.weight;
    }
  if (!any) throw RegionMismatch("no quadrature points in the region");
  rep.max_constant = std::isfinite(best) ? best : 0.0;
  rep.holds = rep.violation_measure == 0.0;
  return rep;
}

double weighted_dissipation(const Solution& sol, const Vector& w, double x_lo, double x_hi) {
  if (w.size() != 2 * sol.layout->num_nodes) throw RegionMismatch("probe field does not live on the solution layout");
  if (!(x_hi > x_lo) || x_lo < -sol.truncation * (1.0 + 1e-12) || x_hi > sol.truncation * (1.0 + 1e-12))
    throw RegionMismatch("region outside the mesh");
  const Mesh& m = *sol.mesh;
  QuadratureCache cache(m);
  const double p = sol.law.p;
  double s = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      if (P.x[0] <= x_lo || P.x[0] >= x_hi) continue;
      double dv = strain_rate(sol.total(t, P.bary).gradient).norm();
      Mat2 dw = strain_rate(evaluate_p2(m, *sol.layout, w, t, P.bary).gradient);
      double weight = p == 2.0 ? 1.0 : std::pow(dv, p - 2.0);
      s += P.weight * weight * dw.squaredNorm();
    }
  return s;
}

}  // namespace thickflow
