#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "thickflow/carrier.hpp"
#include "thickflow/quadrature.hpp"

namespace thickflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Carrier3D::Carrier3D(AxisymmetricOutlet outlet, double flux)
    : outlet_(std::move(outlet)), psi_(Cutoff::axial()), flux_(flux) {
  if (!(outlet_.l1 > 0.0)) throw InvalidBounds("l1 must be positive");
  if (!std::isfinite(flux)) throw InvalidBounds("flux must be finite");
  for (int k = 0; k <= 20000; ++k) {
    double x1 = -64.0 + 128.0 * k / 20000.0;
    if (outlet_.radius(x1) < 0.5 * outlet_.l1 - 1e-12)
      throw CylinderViolation("pipe radius below l1/2 at x1 = " + std::to_string(x1));
  }
}

Carrier3D::Radial Carrier3D::radial(double x1, double r) const {
  Curve::Jet R = outlet_.radius.jet(x1);
  if (r > R.value * (1.0 + 1e-12)) throw OutsideDomain("point outside the pipe");
  double rho = R.value - r;
  if (!(rho > 0.0)) return {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  double s = r / rho;
  CutoffJet p = psi_(s);
  if (p.d1 == 0.0 && p.d2 == 0.0) return {p.value, 0.0, 0.0, 0.0, 0.0, 0.0};
  double r2 = rho * rho, r3 = r2 * rho;
  double sr = R.value / r2;
  double s1 = -r * R.d1 / r2;
  double srr = 2.0 * R.value / r3;
  double s1r = R.d1 * (rho - 2.0 * R.value) / r3;
  double s11 = -r * R.d2 / r2 + 2.0 * r * R.d1 * R.d1 / r3;
  return {p.value,
          p.d1 * sr,
          p.d1 * s1,
          p.d2 * sr * sr + p.d1 * srr,
          p.d2 * s1 * sr + p.d1 * s1r,
          p.d2 * s1 * s1 + p.d1 * s11};
}

double Carrier3D::stream(const Vec3& x) const { return radial(x[0], std::hypot(x[1], x[2])).zeta; }

Vec3 Carrier3D::value(const Vec3& x) const {
  double r = std::hypot(x[1], x[2]);
  Radial z = radial(x[0], r);
  if (flux_ == 0.0 || (z.zr == 0.0 && z.z1 == 0.0)) return Vec3::Zero();
  if (r < 1e-12 * outlet_.l1) throw EvaluationTooCloseToAxis("cutoff active at the axis");
  double A = z.zr / (kTwoPi * r);
  double B = -z.z1 / (kTwoPi * r * r);
  return flux_ * Vec3(A, B * x[1], B * x[2]);
}

Mat3 Carrier3D::gradient(const Vec3& x) const {
  double r = std::hypot(x[1], x[2]);
  Radial z = radial(x[0], r);
  if (flux_ == 0.0 || (z.zr == 0.0 && z.z1 == 0.0 && z.zrr == 0.0 && z.z1r == 0.0 && z.z11 == 0.0))
    return Mat3::Zero();
  if (r < 1e-12 * outlet_.l1) throw EvaluationTooCloseToAxis("cutoff active at the axis");
  double B = -z.z1 / (kTwoPi * r * r);
  double A1 = z.z1r / (kTwoPi * r);
  double Ar = z.zrr / (kTwoPi * r) - z.zr / (kTwoPi * r * r);
  double B1 = -z.z11 / (kTwoPi * r * r);
  double Br = -z.z1r / (kTwoPi * r * r) + z.z1 / (std::numbers::pi * r * r * r);
  Mat3 g;
  g(0, 0) = A1;
  for (int k = 1; k < 3; ++k) g(0, k) = Ar * x[k] / r;
  for (int j = 1; j < 3; ++j) {
    g(j, 0) = B1 * x[j];
    for (int k = 1; k < 3; ++k) g(j, k) = Br * x[k] * x[j] / r + (j == k ? B : 0.0);
  }
  return flux_ * g;
}

double Carrier3D::section_flux(double x1, int radial_points, int angular) const {
  double R = outlet_.radius(x1);
  // psi switches on at r = R/2 and saturates at r = 2R/3.
  const double breaks[] = {0.5 * R, 2.0 * R / 3.0};
  auto ring = [&](double r) {
    double s = 0.0;
    for (int k = 0; k < angular; ++k) {
      double th = kTwoPi * k / angular;
      s += value(Vec3(x1, r * std::cos(th), r * std::sin(th)))[0];
    }
    return s * kTwoPi / angular * r;
  };
  return integrate_1d(ring, 0.0, R, radial_points, breaks);
}

double Carrier3D::boundary_circulation(double x1, int angular) const {
  double R = outlet_.radius(x1);
  double s = 0.0;
  for (int k = 0; k < angular; ++k) {
    double th = kTwoPi * k / angular;
    Vec3 p(x1, R * std::cos(th), R * std::sin(th));
    Vec3 b(0.0, -p[2] / (kTwoPi * R * R), p[1] / (kTwoPi * R * R));
    Vec3 tangent(0.0, -std::sin(th) * R, std::cos(th) * R);
    s += stream(p) * b.dot(tangent);
  }
  return flux_ * s * kTwoPi / angular;
}

CarrierBounds Carrier3D::sample_bounds(double x1_lo, double x1_hi, int samples, unsigned long long seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CarrierBounds b;
  for (int k = 0; k < samples; ++k) {
    double x1 = x1_lo + (x1_hi - x1_lo) * unit(rng);
    double R = outlet_.radius(x1);
    double r = R * std::sqrt(unit(rng)) * (1.0 - 1e-9);
    double th = kTwoPi * unit(rng);
    Vec3 x(x1, r * std::cos(th), r * std::sin(th));
    b.sup_value = std::max(b.sup_value, value(x).norm());
    b.sup_gradient = std::max(b.sup_gradient, gradient(x).norm());
    ++b.samples;
  }
  return b;
}

std::shared_ptr<Carrier3D> build_carrier_3d(const AxisymmetricOutlet& outlet, double flux) {
  return std::make_shared<Carrier3D>(outlet, flux);
}

}  // namespace thickflow
