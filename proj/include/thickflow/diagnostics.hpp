#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "thickflow/fem.hpp"

namespace thickflow {

THICKFLOW_ERROR(WindowExceedsDomain);
THICKFLOW_ERROR(GridMismatch);
THICKFLOW_ERROR(SliceOutsideMesh);
THICKFLOW_ERROR(TooFewSamples);
THICKFLOW_ERROR(NotStrictlyIncreasingPsi);
THICKFLOW_ERROR(HypothesisViolated);
THICKFLOW_ERROR(RegionMismatch);
THICKFLOW_ERROR(BadExponent);

// E2 = |u|^2_{1,2} and Ep = |u|^p_{1,p} of the perturbation over {|x1| < t}.
struct DirichletEnergy {
  double e2 = 0.0;
  double ep = 0.0;
};

DirichletEnergy dirichlet_energy(const Solution& sol, double t);

// Per-quadrature-point energy densities of a solution, sorted by |x1|, for cheap window sweeps.
class EnergyProfile {
 public:
  explicit EnergyProfile(const Solution& sol);

  DirichletEnergy window(double t) const;
  // int |grad v|^p of the total velocity over the slice of the given outlet.
  double slice(Outlet outlet, double t0, double t1) const;
  double truncation() const { return truncation_; }
  double T() const { return T_; }

 private:
  struct Entry {
    double key;
    double e2, ep, vp;
  };
  std::vector<Entry> by_abs_;
  std::vector<double> prefix_e2_, prefix_ep_;
  std::vector<Entry> by_x1_;
  std::vector<double> prefix_vp_;
  double truncation_ = 0.0;
  double T_ = 1.0;
};

// int_{Omega_{i,t-1,t}} |grad v|^p with v = u + a.
double slice_dissipation(const Solution& sol, Outlet outlet, double t);

// z(eta) = int_{eta-1}^{eta} y by the trapezoid rule on the y grid; z'(eta) = y(eta) - y(eta-1).
struct ZSeries {
  std::vector<double> eta;
  std::vector<double> z;
  std::vector<double> zprime;
};

ZSeries z_series(double t0, double dt, const std::vector<double>& y, const std::vector<double>& eta);

struct DiagnosticsSeries {
  double T = 0.0;
  std::vector<double> t;
  std::vector<double> y2;  // (1/T) |u|^2_{1,2,Omega_t}
  std::vector<double> yp;  // |u|^p_{1,p,Omega_t}
  std::vector<double> z;
  std::vector<double> zprime;
  std::vector<double> slice1;
  std::vector<double> slice2;

  std::vector<double> y() const;
  void write_csv(std::ostream& os) const;
};

// Rows t = 1, 1 + dt, ..., t_max with dt dividing 1.
DiagnosticsSeries diagnostics_series(const Solution& sol, double t_max, double dt = 0.125);

struct SandwichReport {
  bool monotone = true;
  bool sandwich = true;
  double worst_margin = 0.0;  // most negative of z - y(eta-1) and y(eta) - z
};

SandwichReport check_sandwich(const DiagnosticsSeries& series, double tolerance = 0.0);

struct GrowthReport {
  double sup_ratio = 0.0;  // sup y(t)/t
  double sup_at = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double relative_residual = 0.0;
  bool superlinear = false;
};

GrowthReport growth_rate(const std::vector<double>& t, const std::vector<double>& y, double t_lo, double t_hi,
                         double residual_tolerance = 0.1);
GrowthReport growth_rate(const DiagnosticsSeries& series, double t_lo, double t_hi);

// Interior unit-slice dissipations over t in [t_lo, t_hi] for both outlets.
struct SliceReport {
  std::vector<double> t;
  std::vector<double> outlet1;
  std::vector<double> outlet2;
  double kappa = 0.0;      // largest interior slice value
  double variation = 0.0;  // (max - min) / max over interior slices
};

SliceReport slice_report(const Solution& sol, double t_lo, double t_hi);

// Least-squares fit of log kappa = log k0 + gamma log |alpha| over nonzero alpha.
struct KappaFit {
  double k0 = 0.0;
  double gamma = 0.0;
  bool increasing = false;
};

KappaFit fit_kappa(const std::vector<double>& alpha, const std::vector<double>& kappa);

// Psi(tau) = sum c_k |tau|^{e_k} sign(tau), strictly increasing when every c_k, e_k > 0.
struct PsiSpec {
  std::vector<double> coefficients;
  std::vector<double> exponents;

  static PsiSpec energy(double c2, double p);  // c2 (tau + tau^{1/2} + tau^{1/p} + tau^{2/p} + tau^{3/p})
  static PsiSpec power(double c, double m);

  void validate() const;
  double operator()(double tau) const;
  bool vanishes_at_zero() const;
};

struct Affine {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double t) const { return slope * t + intercept; }
};

enum class Verdict { holds, hypothesis_failed, conclusion_failed };
std::string to_string(Verdict v);

struct ComparisonVerdict {
  Verdict verdict = Verdict::holds;
  std::string detail;  // first violated condition
  int index = -1;
  double margin = 0.0; // smallest slack over all checks
};

ComparisonVerdict comparison_check(const ZSeries& z, const PsiSpec& psi, double delta, const Affine& phi,
                                   double tolerance = 1e-12);

struct BlowupBound {
  enum class Kind { power, linear } kind = Kind::power;
  double value = 2.0;  // m for power, c for linear

  static BlowupBound power(double m) { return {Kind::power, m}; }
  static BlowupBound linear(double c) { return {Kind::linear, c}; }
};

struct BlowupEstimate {
  double rate = 0.0;       // min over the tail
  double tail_start = 0.0;
  bool positive = false;
};

// Tail = second half of the samples.
BlowupEstimate blowup_rate(const ZSeries& z, const PsiSpec& psi, const BlowupBound& bound,
                           double tolerance = 1e-12);

struct ShearBoundReport {
  double max_constant = 0.0;  // largest c with |dv_i/dx_j| >= c |x'|^{1/(p-1)} at every point
  double violation_measure = 0.0;
  bool holds = false;
};

// Checks |dv_i/dx_j| >= c |x2|^{1/(p-1)} on quadrature points with |x1| in [t_lo, t_hi].
ShearBoundReport shear_bound_check(const Solution& sol, double c, int i, int j, double t_lo, double t_hi);

// || |D(v)|^{(p-2)/2} D(w) ||^2 over {x_lo < x1 < x_hi}; w is a P2 field on the solution's layout.
double weighted_dissipation(const Solution& sol, const Vector& w, double x_lo, double x_hi);

class Rational {
 public:
  Rational(long long num = 0, long long den = 1);
  static Rational parse(const std::string& text);

  long long num() const { return num_; }
  long long den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  long long num_;
  long long den_;
};

struct ExponentSet {
  Rational p;
  Rational conjugate;
  std::optional<Rational> sobolev;  // empty: p >= n, any finite exponent
  std::optional<Rational> q;        // empty: n = 2, any number in [1, inf)
  std::optional<Rational> l;
};

ExponentSet exponents(const Rational& p, int n);

}  // namespace thickflow
