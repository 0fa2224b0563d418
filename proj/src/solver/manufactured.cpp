#include <algorithm>
#include <cmath>

#include "thickflow/quadrature.hpp"
#include "thickflow/solver.hpp"

namespace thickflow {

double PoiseuilleProfile::value(double x2) const {
  double k = p / (p - 1.0);
  return (p - 1.0) / p * (std::pow(0.5, k) - std::pow(std::abs(x2), k));
}

double PoiseuilleProfile::slope(double x2) const {
  double e = 1.0 / (p - 1.0);
  double s = x2 > 0.0 ? 1.0 : (x2 < 0.0 ? -1.0 : 0.0);
  return -s * std::pow(std::abs(x2), e);
}

double PoiseuilleProfile::curvature(double x2) const {
  double e = 1.0 / (p - 1.0);
  return -e * std::pow(std::abs(x2), e - 1.0);
}

double PoiseuilleProfile::flux() const {
  double k = p / (p - 1.0);
  return (p - 1.0) / p * std::pow(0.5, k) * k / (k + 1.0);
}

Vec2 PoiseuilleProfile::force(const Vec2& x, double T) const {
  double e = 1.0 / (p - 1.0);
  double floor_part = p == 2.0 ? 1.0 / (2.0 * T) : e / (2.0 * T) * std::pow(std::abs(x[1]), e - 1.0);
  return Vec2(std::pow(2.0, -0.5 * p) + floor_part, 0.0);
}

ManufacturedCase manufactured_poiseuille(double p, double half_length, double h, bool convection) {
  ManufacturedCase mc;
  mc.profile = PoiseuilleProfile{p};
  OutletDomain domain = OutletDomain::straight();
  mc.carrier = build_carrier_2d(domain, mc.profile.flux());
  auto m = std::make_shared<Mesh>(mesh(truncate(domain, half_length), h));
  DiscretizationOptions opts;
  opts.convection = convection;
  const PoiseuilleProfile prof = mc.profile;
  opts.body_force = [prof, half_length](const Vec2& x) { return prof.force(x, half_length); };
  if (p > 2.0) opts.singular_set = [](const Vec2& x) { return std::abs(x[1]) < 1e-12; };
  mc.disc = std::make_shared<Discretization>(m, mc.carrier, PowerLaw(p, half_length), opts);
  mc.window = 1.0;
  return mc;
}

ManufacturedError manufactured_error(const ManufacturedCase& mc, const Vector& state) {
  Solution sol = mc.disc->unpack(state);
  const auto& cache = mc.disc->quadrature();
  const double p = mc.profile.p;
  double err = 0.0;
  for (int t = 0; t < sol.mesh->num_triangles(); ++t)
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      if (std::abs(P.x[0]) > mc.window) continue;
      FieldValue v = sol.total(t, P.bary);
      Vec2 diff = v.value - Vec2(mc.profile.value(P.x[1]), 0.0);
      err += P.weight * std::pow(diff.norm(), p);
    }
  ManufacturedError out;
  out.lp_error = std::pow(err, 1.0 / p);
  out.flux = measured_flux(sol, mc.carrier->domain(), 0.0);
  out.dofs = mc.disc->size();
  return out;
}

double measured_flux(const Solution& sol, const OutletDomain& domain, double x1) {
  const Mesh& m = *sol.mesh;
  double lo = domain.lower()(x1), hi = domain.upper()(x1);
  std::vector<double> breaks;
  for (const auto& e : m.edges) {
    const Vec2& a = m.vertices[e[0]];
    const Vec2& b = m.vertices[e[1]];
    double da = a[0] - x1, db = b[0] - x1;
    if (da == 0.0) breaks.push_back(a[1]);
    if (db == 0.0) breaks.push_back(b[1]);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) breaks.push_back(a[1] + (b[1] - a[1]) * da / (da - db));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  MeshLocator locator(m);
  auto u1 = [&](double x2) {
    auto hit = locator.locate(Vec2(x1, x2), 1e-9);
    if (!hit) return 0.0;
    return sol.perturbation(hit->triangle, hit->bary).value[0];
  };
  double total = integrate_1d(u1, lo, hi, 4, breaks);
  if (sol.lifting) {
    if (const auto* c = dynamic_cast<const Carrier2D*>(sol.lifting.get())) {
      total += verify_flux(*c, CrossSection{x1 >= 0.0 ? Outlet::second : Outlet::first, x1, lo, hi, Vec2(1.0, 0.0)}).value;
    } else {
      total += integrate_1d([&](double x2) { return sol.lifting->value(Vec2(x1, x2))[0]; }, lo, hi, 16, breaks);
    }
  }
  return total;
}

}  // namespace thickflow
