#include <algorithm>
#include <cmath>
#include <cstdio>

#include "thickflow/diagnostics.hpp"

namespace thickflow {

namespace {

int steps_per_unit(double dt) {
  if (!(dt > 0.0)) throw GridMismatch("grid spacing must be positive");
  double n = 1.0 / dt;
  double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * r) throw GridMismatch("grid spacing must divide 1");
  return static_cast<int>(r);
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

ZSeries z_series(double t0, double dt, const std::vector<double>& y, const std::vector<double>& eta) {
  const int n = steps_per_unit(dt);
  ZSeries out;
  for (double e : eta) {
    double pos = (e - 1.0 - t0) / dt;
    double k = std::round(pos);
    if (std::abs(pos - k) > 1e-9 * std::max(1.0, std::abs(pos)))
      throw GridMismatch("eta - 1 does not lie on the y grid");
    if (k < 0 || k + n >= static_cast<double>(y.size()) + 0.5)
      throw GridMismatch("eta window leaves the sampled range");
    const std::size_t a = static_cast<std::size_t>(k), b = a + static_cast<std::size_t>(n);
    double s = 0.5 * (y[a] + y[b]);
    for (std::size_t i = a + 1; i < b; ++i) s += y[i];
    out.eta.push_back(e);
    out.z.push_back(s * dt);
    out.zprime.push_back(y[b] - y[a]);
  }
  return out;
}

std::vector<double> DiagnosticsSeries::y() const {
  std::vector<double> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = y2[k] + yp[k];
  return out;
}

void DiagnosticsSeries::write_csv(std::ostream& os) const {
  os << "t,y2,yp,z,zprime,slice1,slice2\n";
  for (std::size_t k = 0; k < t.size(); ++k)
    os << format(t[k]) << ',' << format(y2[k]) << ',' << format(yp[k]) << ',' << format(z[k]) << ','
       << format(zprime[k]) << ',' << format(slice1[k]) << ',' << format(slice2[k]) << '\n';
}

DiagnosticsSeries diagnostics_series(const Solution& sol, double t_max, double dt) {
  const int n = steps_per_unit(dt);
  if (t_max > sol.truncation * (1.0 + 1e-12)) throw WindowExceedsDomain("t_max exceeds the truncated domain");
  if (t_max < 1.0) throw TooFewSamples("series needs t_max >= 1");
  EnergyProfile profile(sol);
  const int m = static_cast<int>(std::floor(t_max * n + 1e-9));
  std::vector<double> grid(m + 1), y2(m + 1), yp(m + 1);
  for (int k = 0; k <= m; ++k) {
    grid[k] = static_cast<double>(k) / n;
    auto e = profile.window(grid[k]);
    y2[k] = e.e2 / profile.T();
    yp[k] = e.ep;
  }
  std::vector<double> y(m + 1);
  for (int k = 0; k <= m; ++k) y[k] = y2[k] + yp[k];
  DiagnosticsSeries s;
  s.T = profile.T();
  std::vector<double> eta(grid.begin() + n, grid.end());
  ZSeries z = z_series(0.0, dt, y, eta);
  for (std::size_t k = 0; k < eta.size(); ++k) {
    s.t.push_back(eta[k]);
    s.y2.push_back(y2[k + n]);
    s.yp.push_back(yp[k + n]);
    s.z.push_back(z.z[k]);
    s.zprime.push_back(z.zprime[k]);
    s.slice1.push_back(profile.slice(Outlet::first, eta[k] - 1.0, eta[k]));
    s.slice2.push_back(profile.slice(Outlet::second, eta[k] - 1.0, eta[k]));
  }
  return s;
}

SandwichReport check_sandwich(const DiagnosticsSeries& s, double tolerance) {
  SandwichReport rep;
  std::vector<double> y = s.y();
  for (std::size_t k = 1; k < y.size(); ++k)
    if (y[k] < y[k - 1] - tolerance) rep.monotone = false;
  bool first = true;
  for (std::size_t k = 0; k < y.size(); ++k) {
    double below = y[k] - s.zprime[k];
    double m = std::min(s.z[k] - below, y[k] - s.z[k]);
    rep.worst_margin = first ? m : std::min(rep.worst_margin, m);
    first = false;
    if (m < -tolerance) rep.sandwich = false;
  }
  return rep;
}

GrowthReport growth_rate(const std::vector<double>& t, const std::vector<double>& y, double t_lo, double t_hi,
                         double residual_tolerance) {
  if (t.size() != y.size()) throw TooFewSamples("t and y lengths differ");
  GrowthReport rep;
  bool any = false;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > 0.0)) continue;
    double r = y[k] / t[k];
    if (!any || r > rep.sup_ratio) {
      rep.sup_ratio = r;
      rep.sup_at = t[k];
    }
    any = true;
  }
  std::vector<double> ft, fy;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k] >= t_lo - 1e-12 && t[k] <= t_hi + 1e-12) {
      ft.push_back(t[k]);
      fy.push_back(y[k]);
    }
  if (ft.size() < 3) throw TooFewSamples("growth fit needs at least three samples");
  const double n = static_cast<double>(ft.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < ft.size(); ++k) {
    sx += ft[k];
    sy += fy[k];
    sxx += ft[k] * ft[k];
    sxy += ft[k] * fy[k];
  }
  double det = n * sxx - sx * sx;
  rep.c1 = (n * sxy - sx * sy) / det;
  rep.c2 = (sy - rep.c1 * sx) / n;
  double rr = 0, yy = 0;
  for (std::size_t k = 0; k < ft.size(); ++k) {
    double d = fy[k] - (rep.c1 * ft[k] + rep.c2);
    rr += d * d;
    yy += fy[k] * fy[k];
  }
  rep.relative_residual = yy > 0.0 ? std::sqrt(rr / yy) : 0.0;
  const std::size_t h = ft.size() / 2;
  double s1 = (fy[h] - fy[0]) / (ft[h] - ft[0]);
  double s2 = (fy.back() - fy[h]) / (ft.back() - ft[h]);
  rep.superlinear = (s2 > 0.0 && s2 > 1.2 * s1) || (rep.relative_residual > residual_tolerance && s2 > s1);
  return rep;
}

GrowthReport growth_rate(const DiagnosticsSeries& s, double t_lo, double t_hi) {
  return growth_rate(s.t, s.y(), t_lo, t_hi);
}

}  // namespace thickflow
