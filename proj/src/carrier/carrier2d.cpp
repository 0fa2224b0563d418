#include <algorithm>
#include <cmath>

#include "thickflow/carrier.hpp"

namespace thickflow {

Carrier2D::Carrier2D(OutletDomain domain, double flux)
    : rho_(std::move(domain)), psi_(Cutoff::planar()), flux_(flux) {
  if (!std::isfinite(flux)) throw InvalidBounds("flux must be finite");
  bounds_ = sample_bounds(-8.0, 8.0, 161, 128);
}

StreamJet Carrier2D::stream(const Vec2& x) const {
  StreamJet out{0.0, Vec2::Zero(), Mat2::Zero()};
  // zeta is constant next to each wall; polygonal meshes reach slightly past curved walls.
  const OutletDomain& d = rho_.domain();
  const double above = x[1] - d.upper()(x[0]), below = d.lower()(x[0]) - x[1];
  if (above > 0.0 && above <= rho_.band()) {
    out.value = 1.0;
    return out;
  }
  if (below > 0.0 && below <= rho_.band()) return out;
  DistanceJet r = rho_(x);
  if (!(r.value > 0.0)) {
    out.value = x[1] > 0.0 ? 1.0 : 0.0;
    return out;
  }
  const double rho = r.value;
  const double s = x[1] / rho;
  CutoffJet p = psi_(s);
  out.value = p.value;
  if (p.d1 == 0.0 && p.d2 == 0.0) return out;

  const double r2 = rho * rho, r3 = r2 * rho;
  Vec2 ds;
  for (int i = 0; i < 2; ++i) ds[i] = (i == 1 ? 1.0 / rho : 0.0) - x[1] * r.grad[i] / r2;
  Mat2 dds;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      dds(i, j) = -((i == 1 ? r.grad[j] : 0.0) + (j == 1 ? r.grad[i] : 0.0)) / r2 +
                  2.0 * x[1] * r.grad[i] * r.grad[j] / r3 - x[1] * r.hess(i, j) / r2;
  out.grad = p.d1 * ds;
  out.hess = p.d2 * ds * ds.transpose() + p.d1 * dds;
  return out;
}

Vec2 Carrier2D::value(const Vec2& x) const {
  if (flux_ == 0.0) {
    stream(x);
    return Vec2::Zero();
  }
  StreamJet z = stream(x);
  return flux_ * Vec2(z.grad[1], -z.grad[0]);
}

Mat2 Carrier2D::gradient(const Vec2& x) const {
  if (flux_ == 0.0) {
    stream(x);
    return Mat2::Zero();
  }
  StreamJet z = stream(x);
  Mat2 g;
  g << z.hess(1, 0), z.hess(1, 1), -z.hess(0, 0), -z.hess(0, 1);
  return flux_ * g;
}

std::vector<double> Carrier2D::breakpoints(double x1) const {
  const OutletDomain& d = domain();
  double lo = d.lower()(x1), hi = d.upper()(x1);
  std::vector<double> out{0.0};
  double b = rho_.band();
  out.push_back(0.5 * (hi + lo - b));
  out.push_back(0.5 * (hi + lo + b));
  // x2 - rho(x1, x2) is nondecreasing in x2; its root is where psi reaches 1.
  double a = 0.0, c = hi;
  for (int it = 0; it < 200 && c - a > 1e-16 * std::max(1.0, hi); ++it) {
    double m = 0.5 * (a + c);
    double g = m - rho_(Vec2(x1, m)).value;
    if (g < 0.0)
      a = m;
    else
      c = m;
  }
  out.push_back(0.5 * (a + c));
  std::sort(out.begin(), out.end());
  std::vector<double> inside;
  for (double v : out)
    if (v > lo && v < hi) inside.push_back(v);
  return inside;
}

CarrierBounds Carrier2D::sample_bounds(double x1_lo, double x1_hi, int n1, int n2) const {
  CarrierBounds b;
  if (flux_ == 0.0) {
    b.samples = n1 * n2;
    return b;
  }
  const OutletDomain& d = domain();
  for (int i = 0; i < n1; ++i) {
    double x1 = n1 == 1 ? x1_lo : x1_lo + (x1_hi - x1_lo) * i / (n1 - 1);
    double lo = d.lower()(x1), hi = d.upper()(x1);
    for (int j = 0; j < n2; ++j) {
      Vec2 x(x1, lo + (hi - lo) * (j + 0.5) / n2);
      b.sup_value = std::max(b.sup_value, value(x).norm());
      b.sup_gradient = std::max(b.sup_gradient, gradient(x).norm());
      ++b.samples;
    }
  }
  return b;
}

std::shared_ptr<Carrier2D> build_carrier_2d(const OutletDomain& domain, double flux) {
  return std::make_shared<Carrier2D>(domain, flux);
}

}  // namespace thickflow
