#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "thickflow/geometry.hpp"

namespace thickflow {

THICKFLOW_ERROR(OutsideDomain);
THICKFLOW_ERROR(EvaluationTooCloseToAxis);

// Planar velocity field with analytic gradient.
class VectorField {
 public:
  virtual ~VectorField() = default;
  virtual Vec2 value(const Vec2& x) const = 0;
  virtual Mat2 gradient(const Vec2& x) const = 0;
};

class ZeroField final : public VectorField {
 public:
  Vec2 value(const Vec2&) const override { return Vec2::Zero(); }
  Mat2 gradient(const Vec2&) const override { return Mat2::Zero(); }
};

struct DistanceJet {
  double value;
  Vec2 grad;
  Mat2 hess;
};

// Smooth distance surrogate for a graph channel. With u, v the vertical distances
// to the walls, rho = (u + v)/2 + b phi(|u - v|/b), which equals min(u, v) when
// |u - v| >= b and stays above it inside the centre band.
class RegularizedDistance {
 public:
  explicit RegularizedDistance(OutletDomain domain);
  RegularizedDistance(OutletDomain domain, double band);

  DistanceJet operator()(const Vec2& x) const;
  double band() const { return band_; }
  const OutletDomain& domain() const { return domain_; }

 private:
  OutletDomain domain_;
  double band_;
};

DistanceJet regularized_distance(const OutletDomain& domain, const Vec2& x);

struct DistanceBounds {
  double ratio_min;  // min rho/d
  double ratio_max;  // max rho/d
  double k1;         // max |grad rho|
  double k2;         // max d |hess rho|
  int samples;
};

DistanceBounds measure_distance_bounds(const RegularizedDistance& rho, double x1_lo, double x1_hi, int samples,
                                       unsigned long long seed);

struct CutoffJet {
  double value;
  double d1;
  double d2;
};

// Quintic smoothstep from 0 at s0 to 1 at s1.
class Cutoff {
 public:
  Cutoff(double s0, double s1);
  static Cutoff planar() { return Cutoff(0.0, 1.0); }
  static Cutoff axial() { return Cutoff(1.0, 2.0); }

  CutoffJet operator()(double s) const;
  double s0() const { return s0_; }
  double s1() const { return s1_; }
  double sup_d1() const;
  double sup_d2() const;

 private:
  double s0_, s1_;
};

CutoffJet cutoff_psi(const Cutoff& params, double s);

struct StreamJet {
  double value;
  Vec2 grad;
  Mat2 hess;
};

struct CarrierBounds {
  double sup_value = 0.0;     // sup |a~|
  double sup_gradient = 0.0;  // sup |grad a~|
  int samples = 0;
};

// a = alpha (d2 zeta, -d1 zeta) with zeta = psi(x2 / rho).
class Carrier2D final : public VectorField {
 public:
  Carrier2D(OutletDomain domain, double flux);

  Vec2 value(const Vec2& x) const override;
  Mat2 gradient(const Vec2& x) const override;
  StreamJet stream(const Vec2& x) const;

  double flux() const { return flux_; }
  const OutletDomain& domain() const { return rho_.domain(); }
  const RegularizedDistance& distance() const { return rho_; }
  const Cutoff& cutoff() const { return psi_; }
  // x2 positions where the field loses smoothness on the section x1.
  std::vector<double> breakpoints(double x1) const;
  CarrierBounds bounds() const { return bounds_; }
  CarrierBounds sample_bounds(double x1_lo, double x1_hi, int n1, int n2) const;

 private:
  RegularizedDistance rho_;
  Cutoff psi_;
  double flux_;
  CarrierBounds bounds_;
};

std::shared_ptr<Carrier2D> build_carrier_2d(const OutletDomain& domain, double flux);

struct AxisymmetricOutlet {
  Curve radius;
  double l1;
};

// a = alpha curl(zeta b) with b the angle form and zeta = psi(|x'| / (R - |x'|)).
class Carrier3D {
 public:
  Carrier3D(AxisymmetricOutlet outlet, double flux);

  Vec3 value(const Vec3& x) const;
  Mat3 gradient(const Vec3& x) const;
  double flux() const { return flux_; }
  double stream(const Vec3& x) const;
  // Flux through the disc at x1 by polar quadrature.
  double section_flux(double x1, int radial = 64, int angular = 64) const;
  // alpha times the line integral of zeta b over the boundary circle.
  double boundary_circulation(double x1, int angular = 256) const;
  CarrierBounds sample_bounds(double x1_lo, double x1_hi, int samples, unsigned long long seed) const;
  const AxisymmetricOutlet& outlet() const { return outlet_; }

 private:
  struct Radial {
    double zeta, zr, z1, zrr, z1r, z11;
  };
  Radial radial(double x1, double r) const;

  AxisymmetricOutlet outlet_;
  Cutoff psi_;
  double flux_;
};

std::shared_ptr<Carrier3D> build_carrier_3d(const AxisymmetricOutlet& outlet, double flux);

struct FluxEstimate {
  double value;
  double error;
};

FluxEstimate verify_flux(const Carrier2D& carrier, const CrossSection& section);

struct ProbeField {
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> gradient;
};

struct LemmaAReport {
  double c_i = 0.0;
  double c_ii = 0.0;
  double c_iii = 0.0;
  double p = 0.0;
  double t = 0.0;
  std::vector<double> slice_energies;  // outlet 1 then outlet 2, unit slices
};

// Ratios of the carrier estimates over Omega_t, computed by strip quadrature.
LemmaAReport verify_lemma_a_estimates(const Carrier2D& carrier, double p, double t,
                                      std::span<const ProbeField> probes);

// Wall-vanishing probe fields used by the carrier certification.
std::vector<ProbeField> default_probes(const OutletDomain& domain);

struct CertifyOptions {
  std::vector<double> sections{-16.0, -12.0, -8.0, -4.0, -1.5, 1.5, 4.0, 8.0, 12.0, 16.0};
  int points = 10000;          // divergence sample points
  double extent = 16.0;        // |x1| range of the divergence samples
  double fd_step = 2e-8;
  std::vector<double> windows{4.0, 8.0, 16.0};
  double p = 3.0;
  unsigned long long seed = 1;
};

struct CarrierCertificate {
  std::vector<double> sections;
  std::vector<double> flux_error;    // |flux(section) - alpha|
  double max_flux_error = 0.0;
  double max_divergence = 0.0;       // central-difference divergence over sup |grad a|
  int divergence_points = 0;
  double homogeneity_error = 0.0;    // max |a_{2 alpha} - 2 a_alpha| / sup |a_{2 alpha}|
  std::vector<LemmaAReport> lemma;   // one per window
  double c_ii_spread = 0.0;          // (max - min) / max over the windows
};

CarrierCertificate certify_carrier(const OutletDomain& domain, double flux, const CertifyOptions& opts = {});

}  // namespace thickflow
