#include <algorithm>
#include <cmath>
#include <sstream>

#include "thickflow/diagnostics.hpp"

namespace thickflow {

PsiSpec PsiSpec::energy(double c2, double p) {
  return {{c2, c2, c2, c2, c2}, {1.0, 0.5, 1.0 / p, 2.0 / p, 3.0 / p}};
}

PsiSpec PsiSpec::power(double c, double m) { return {{c}, {m}}; }

void PsiSpec::validate() const {
  if (coefficients.empty() || coefficients.size() != exponents.size())
    throw NotStrictlyIncreasingPsi("Psi needs matching nonempty coefficient and exponent lists");
  for (std::size_t k = 0; k < coefficients.size(); ++k)
    if (!(coefficients[k] > 0.0) || !(exponents[k] > 0.0) || !std::isfinite(coefficients[k]) ||
        !std::isfinite(exponents[k]))
      throw NotStrictlyIncreasingPsi("Psi terms need positive coefficients and exponents");
}

double PsiSpec::operator()(double tau) const {
  double a = std::abs(tau), s = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k)
    s += coefficients[k] * (exponents[k] == 1.0 ? a : (exponents[k] == 2.0 ? a * a : std::pow(a, exponents[k])));
  return tau < 0.0 ? -s : s;
}

bool PsiSpec::vanishes_at_zero() const { return (*this)(0.0) == 0.0; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::hypothesis_failed:
      return "hypothesis_failed";
    case Verdict::conclusion_failed:
      return "conclusion_failed";
  }
  return "unknown";
}

ComparisonVerdict comparison_check(const ZSeries& z, const PsiSpec& psi, double delta, const Affine& phi,
                                   double tolerance) {
  psi.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw HypothesisViolated("delta must lie in (0, 1)");
  if (z.z.empty() || z.z.size() != z.eta.size() || z.zprime.size() != z.eta.size())
    throw GridMismatch("z series is empty or ragged");
  ComparisonVerdict out;
  bool first = true;
  auto slack = [&](double s, int k, const char* what) {
    out.margin = first ? s : std::min(out.margin, s);
    first = false;
    if (s < -tolerance && out.index < 0) {
      std::ostringstream os;
      os << what << " at t = " << z.eta[k];
      out.detail = os.str();
      out.index = k;
      return false;
    }
    return true;
  };
  const double dphi = phi.slope;
  const std::size_t n = z.eta.size();
  for (std::size_t k = 0; k < n; ++k) {
    double t = z.eta[k];
    double scale = std::max({1.0, std::abs(z.z[k]), std::abs(phi(t))});
    if (!slack((psi(z.zprime[k]) + (1.0 - delta) * phi(t) - z.z[k]) / scale, static_cast<int>(k),
               "z <= Psi(z') + (1 - delta) phi fails")) {
      out.verdict = Verdict::hypothesis_failed;
      return out;
    }
    if (!slack((phi(t) - psi(dphi) / delta) / scale, static_cast<int>(k), "phi >= Psi(phi') / delta fails")) {
      out.verdict = Verdict::hypothesis_failed;
      return out;
    }
  }
  double tn = z.eta[n - 1];
  if (!slack((phi(tn) - z.z[n - 1]) / std::max({1.0, std::abs(phi(tn))}), static_cast<int>(n - 1),
             "z(T) <= phi(T) fails")) {
    out.verdict = Verdict::hypothesis_failed;
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double t = z.eta[k];
    if (!slack((phi(t) - z.z[k]) / std::max({1.0, std::abs(phi(t))}), static_cast<int>(k), "z <= phi fails")) {
      out.verdict = Verdict::conclusion_failed;
      return out;
    }
  }
  out.verdict = Verdict::holds;
  return out;
}

BlowupEstimate blowup_rate(const ZSeries& z, const PsiSpec& psi, const BlowupBound& bound, double tolerance) {
  psi.validate();
  const std::size_t n = z.eta.size();
  if (n < 2 || z.z.size() != n || z.zprime.size() != n) throw GridMismatch("z series is too short or ragged");
  if (!psi.vanishes_at_zero()) throw HypothesisViolated("Psi(0) must vanish");
  bool nonzero = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (z.z[k] < 0.0) throw HypothesisViolated("z must be nonnegative");
    if (k > 0 && z.z[k] < z.z[k - 1]) throw HypothesisViolated("z must be nondecreasing");
    if (z.z[k] != 0.0) nonzero = true;
    double scale = std::max(1.0, std::abs(z.z[k]));
    if (z.z[k] - psi(z.zprime[k]) > tolerance * scale) throw HypothesisViolated("z <= Psi(z') fails on the samples");
  }
  if (!nonzero) throw HypothesisViolated("z is identically zero");
  if (bound.kind == BlowupBound::Kind::power && !(bound.value > 1.0))
    throw HypothesisViolated("power bound needs m > 1");
  if (bound.kind == BlowupBound::Kind::linear && !(bound.value > 0.0))
    throw HypothesisViolated("linear bound needs c > 0");
  BlowupEstimate est;
  const std::size_t start = n / 2;
  est.tail_start = z.eta[start];
  bool first = true;
  for (std::size_t k = start; k < n; ++k) {
    double t = z.eta[k];
    double r;
    if (bound.kind == BlowupBound::Kind::power) {
      double e = bound.value / (bound.value - 1.0);
      r = e == 2.0 ? z.z[k] / (t * t) : z.z[k] / std::pow(t, e);
    } else {
      r = z.z[k] / std::exp(t / bound.value);
    }
    est.rate = first ? r : std::min(est.rate, r);
    first = false;
  }
  est.positive = est.rate > 0.0;
  return est;
}

}  // namespace thickflow
