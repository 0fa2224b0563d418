#include <algorithm>
#include <cmath>

#include "thickflow/diagnostics.hpp"

namespace thickflow {

namespace {

double power(double x, double p) { return p == 2.0 ? x * x : std::pow(x, p); }

void check_window(double t, double truncation) {
  if (!(t >= 0.0)) throw WindowExceedsDomain("window length must be nonnegative");
  if (t > truncation * (1.0 + 1e-12)) throw WindowExceedsDomain("window exceeds the truncated domain");
}

}  // namespace

EnergyProfile::EnergyProfile(const Solution& sol) : truncation_(sol.truncation), T_(sol.law.T) {
  const Mesh& m = *sol.mesh;
  QuadratureCache cache(m);
  const double p = sol.law.p;
  by_abs_.reserve(cache.points.size());
  by_x1_.reserve(cache.points.size());
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      double gu = sol.perturbation(t, P.bary).gradient.norm();
      double gv = sol.total(t, P.bary).gradient.norm();
      Entry e{std::abs(P.x[0]), P.weight * gu * gu, P.weight * power(gu, p), P.weight * power(gv, p)};
      by_abs_.push_back(e);
      e.key = P.x[0];
      by_x1_.push_back(e);
    }
  auto by_key = [](const Entry& a, const Entry& b) { return a.key < b.key; };
  std::stable_sort(by_abs_.begin(), by_abs_.end(), by_key);
  std::stable_sort(by_x1_.begin(), by_x1_.end(), by_key);
  prefix_e2_.assign(by_abs_.size() + 1, 0.0);
  prefix_ep_.assign(by_abs_.size() + 1, 0.0);
  for (std::size_t k = 0; k < by_abs_.size(); ++k) {
    prefix_e2_[k + 1] = prefix_e2_[k] + by_abs_[k].e2;
    prefix_ep_[k + 1] = prefix_ep_[k] + by_abs_[k].ep;
  }
  prefix_vp_.assign(by_x1_.size() + 1, 0.0);
  for (std::size_t k = 0; k < by_x1_.size(); ++k) prefix_vp_[k + 1] = prefix_vp_[k] + by_x1_[k].vp;
}

DirichletEnergy EnergyProfile::window(double t) const {
  check_window(t, truncation_);
  auto it = std::lower_bound(by_abs_.begin(), by_abs_.end(), t, [](const Entry& e, double v) { return e.key < v; });
  std::size_t k = static_cast<std::size_t>(it - by_abs_.begin());
  return {prefix_e2_[k], prefix_ep_[k]};
}

double EnergyProfile::slice(Outlet outlet, double t0, double t1) const {
  if (!(t0 >= 0.0) || !(t1 > t0)) throw SliceOutsideMesh("slice bounds must satisfy 0 <= t0 < t1");
  if (t1 > truncation_ * (1.0 + 1e-12)) throw SliceOutsideMesh("slice extends beyond the truncated domain");
  auto lower = [&](double v) {
    return static_cast<std::size_t>(
        std::lower_bound(by_x1_.begin(), by_x1_.end(), v, [](const Entry& e, double x) { return e.key < x; }) -
        by_x1_.begin());
  };
  auto upper = [&](double v) {
    return static_cast<std::size_t>(
        std::upper_bound(by_x1_.begin(), by_x1_.end(), v, [](double x, const Entry& e) { return x < e.key; }) -
        by_x1_.begin());
  };
  std::size_t a, b;
  if (outlet == Outlet::second) {
    a = upper(t0);
    b = upper(t1);
  } else {
    a = lower(-t1);
    b = lower(-t0);
  }
  return prefix_vp_[b] - prefix_vp_[a];
}

DirichletEnergy dirichlet_energy(const Solution& sol, double t) {
  check_window(t, sol.truncation);
  return EnergyProfile(sol).window(t);
}

double slice_dissipation(const Solution& sol, Outlet outlet, double t) {
  if (!(t >= 1.0)) throw SliceOutsideMesh("slice index t must be at least 1");
  return EnergyProfile(sol).slice(outlet, t - 1.0, t);
}

SliceReport slice_report(const Solution& sol, double t_lo, double t_hi) {
  EnergyProfile profile(sol);
  SliceReport rep;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double t = std::ceil(t_lo); t <= t_hi + 1e-12; t += 1.0) {
    double d1 = profile.slice(Outlet::first, t - 1.0, t);
    double d2 = profile.slice(Outlet::second, t - 1.0, t);
    rep.t.push_back(t);
    rep.outlet1.push_back(d1);
    rep.outlet2.push_back(d2);
    for (double d : {d1, d2}) {
      lo = first ? d : std::min(lo, d);
      hi = first ? d : std::max(hi, d);
      first = false;
    }
  }
  if (first) throw TooFewSamples("no interior slices in the requested range");
  rep.kappa = hi;
  rep.variation = hi > 0.0 ? (hi - lo) / hi : 0.0;
  return rep;
}

KappaFit fit_kappa(const std::vector<double>& alpha, const std::vector<double>& kappa) {
  if (alpha.size() != kappa.size()) throw TooFewSamples("alpha and kappa lengths differ");
  std::vector<std::size_t> order(alpha.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(alpha[a]) < std::abs(alpha[b]);
  });
  KappaFit fit;
  fit.increasing = true;
  for (std::size_t k = 1; k < order.size(); ++k)
    if (!(kappa[order[k]] > kappa[order[k - 1]])) fit.increasing = false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] == 0.0 || !(kappa[k] > 0.0)) continue;
    double x = std::log(std::abs(alpha[k])), y = std::log(kappa[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return fit;
  double det = n * sxx - sx * sx;
  if (det == 0.0) return fit;
  fit.gamma = (n * sxy - sx * sy) / det;
  fit.k0 = std::exp((sy - fit.gamma * sx) / n);
  return fit;
}

}  // namespace thickflow
