#include <algorithm>
#include <cmath>
#include <random>

#include "thickflow/carrier.hpp"

namespace thickflow {

namespace {

// phi(r) = -r/2 + k(r), k(r) = (1 - r)^3 (1/4 + 5r/4) on [0, 1), zero beyond.
struct Phi {
  double value, d1, d2;
};

Phi phi(double r) {
  if (r >= 1.0) return {-0.5 * r, -0.5, 0.0};
  const double a = 0.25, b = 1.25;
  double q = 1.0 - r;
  double k = q * q * q * (a + b * r);
  double k1 = -3.0 * q * q * (a + b * r) + b * q * q * q;
  double k2 = 6.0 * q * (a + b * r) - 6.0 * b * q * q;
  return {-0.5 * r + k, -0.5 + k1, k2};
}

}  // namespace

RegularizedDistance::RegularizedDistance(OutletDomain domain)
    : RegularizedDistance(domain, domain.l1() / 8.0) {}

RegularizedDistance::RegularizedDistance(OutletDomain domain, double band)
    : domain_(std::move(domain)), band_(band) {
  if (!(band_ > 0.0)) throw InvalidBounds("distance band must be positive");
}

DistanceJet RegularizedDistance::operator()(const Vec2& x) const {
  Curve::Jet hi = domain_.upper().jet(x[0]);
  Curve::Jet lo = domain_.lower().jet(x[0]);
  double u = hi.value - x[1];
  double v = x[1] - lo.value;
  const double tol = 1e-12 * std::max(1.0, std::abs(hi.value - lo.value));
  if (u < -tol || v < -tol) throw OutsideDomain("point outside the channel");
  u = std::max(u, 0.0);
  v = std::max(v, 0.0);

  const Vec2 gu(hi.d1, -1.0), gv(-lo.d1, 1.0);
  const Mat2 hu = (Mat2() << hi.d2, 0.0, 0.0, 0.0).finished();
  const Mat2 hv = (Mat2() << -lo.d2, 0.0, 0.0, 0.0).finished();

  double s = u - v;
  double r = std::abs(s) / band_;
  Phi f = phi(r);
  double sign = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
  double g1 = sign * f.d1;
  double g2 = f.d2 / band_;
  const Vec2 gd = gu - gv;

  DistanceJet out;
  out.value = 0.5 * (u + v) + band_ * f.value;
  out.grad = 0.5 * (gu + gv) + g1 * gd;
  out.hess = 0.5 * (hu + hv) + g1 * (hu - hv) + g2 * gd * gd.transpose();
  return out;
}

DistanceJet regularized_distance(const OutletDomain& domain, const Vec2& x) {
  return RegularizedDistance(domain)(x);
}

DistanceBounds measure_distance_bounds(const RegularizedDistance& rho, double x1_lo, double x1_hi, int samples,
                                       unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DistanceBounds b{1e300, 0.0, 0.0, 0.0, 0};
  const OutletDomain& dom = rho.domain();
  for (int k = 0; k < samples; ++k) {
    double x1 = x1_lo + (x1_hi - x1_lo) * unit(rng);
    double lo = dom.lower()(x1), hi = dom.upper()(x1);
    double x2 = lo + (hi - lo) * (1e-6 + (1.0 - 2e-6) * unit(rng));
    Vec2 x(x1, x2);
    double d = dom.boundary_distance(x);
    if (!(d > 0.0)) continue;
    DistanceJet j = rho(x);
    b.ratio_min = std::min(b.ratio_min, j.value / d);
    b.ratio_max = std::max(b.ratio_max, j.value / d);
    b.k1 = std::max(b.k1, j.grad.cwiseAbs().maxCoeff());
    b.k2 = std::max(b.k2, d * j.hess.cwiseAbs().maxCoeff());
    ++b.samples;
  }
  return b;
}

Cutoff::Cutoff(double s0, double s1) : s0_(s0), s1_(s1) {
  if (!(s1 > s0)) throw InvalidBounds("cutoff needs s0 < s1");
}

CutoffJet Cutoff::operator()(double s) const {
  double w = s1_ - s0_;
  double r = (s - s0_) / w;
  if (r <= 0.0) return {0.0, 0.0, 0.0};
  if (r >= 1.0) return {1.0, 0.0, 0.0};
  double q = 1.0 - r;
  return {r * r * r * (10.0 - 15.0 * r + 6.0 * r * r), 30.0 * r * r * q * q / w,
          60.0 * r * q * (1.0 - 2.0 * r) / (w * w)};
}

double Cutoff::sup_d1() const { return 1.875 / (s1_ - s0_); }

double Cutoff::sup_d2() const { return 10.0 / std::sqrt(3.0) / ((s1_ - s0_) * (s1_ - s0_)); }

CutoffJet cutoff_psi(const Cutoff& params, double s) { return params(s); }

}  // namespace thickflow
