#include <algorithm>
#include <cmath>
#include <random>

#include "thickflow/carrier.hpp"
#include "thickflow/quadrature.hpp"

namespace thickflow {

FluxEstimate verify_flux(const Carrier2D& carrier, const CrossSection& section) {
  std::vector<double> breaks = carrier.breakpoints(section.x1);
  auto flux_density = [&](double x2) { return carrier.value(Vec2(section.x1, x2)).dot(section.normal); };
  double fine = integrate_1d(flux_density, section.lower, section.upper, 64, breaks);
  double coarse = integrate_1d(flux_density, section.lower, section.upper, 32, breaks);
  return {fine, std::abs(fine - coarse)};
}

LemmaAReport verify_lemma_a_estimates(const Carrier2D& carrier, double p, double t,
                                      std::span<const ProbeField> probes) {
  if (!(p >= 2.0)) throw InvalidBounds("lemma estimates need p >= 2");
  if (!(t > 0.0)) throw NonPositiveLength("window length must be positive");
  LemmaAReport rep;
  rep.p = p;
  rep.t = t;
  const double alpha = std::abs(carrier.flux());
  const int slices = static_cast<int>(std::floor(t + 1e-12));
  if (alpha == 0.0) {
    rep.slice_energies.assign(2 * slices, 0.0);
    return rep;
  }
  const OutletDomain& dom = carrier.domain();
  auto breaks = [&](double x1) { return carrier.breakpoints(x1); };
  auto strip = [&](double lo, double hi, const std::function<double(const Vec2&)>& f) {
    return integrate_strip(dom, lo, hi, f, breaks, 12, 0.5);
  };
  auto grad_p = [&](const Vec2& x) { return std::pow(carrier.gradient(x).norm(), p); };

  double max_slice = 0.0;
  for (int k = 1; k <= slices; ++k) {
    double e = strip(-static_cast<double>(k), -static_cast<double>(k - 1), grad_p);
    rep.slice_energies.push_back(e);
    max_slice = std::max(max_slice, e);
  }
  for (int k = 1; k <= slices; ++k) {
    double e = strip(static_cast<double>(k - 1), static_cast<double>(k), grad_p);
    rep.slice_energies.push_back(e);
    max_slice = std::max(max_slice, e);
  }
  double window = strip(-t, t, grad_p);
  rep.c_ii = max_slice / std::pow(alpha, p);
  rep.c_iii = window / (std::pow(alpha, p) * (t + 1.0));

  const double pc = p / (p - 1.0);
  for (const auto& probe : probes) {
    double num = strip(-t, t, [&](const Vec2& x) {
      return std::pow(carrier.value(x).norm(), pc) * std::pow(probe.value(x).norm(), pc);
    });
    double semi = strip(-t, t, [&](const Vec2& x) { return std::pow(probe.gradient(x).norm(), p); });
    if (!(semi > 0.0)) continue;
    double den = std::pow(alpha, pc) * std::pow(t, (p - 2.0) / (p - 1.0)) * std::pow(semi, pc / p);
    rep.c_i = std::max(rep.c_i, num / den);
  }
  return rep;
}

std::vector<ProbeField> default_probes(const OutletDomain& domain) {
  std::vector<ProbeField> out;
  for (double k : {0.5, 1.0, 2.0}) {
    auto weight = [domain](const Vec2& x, Vec2& grad) {
      Curve::Jet hi = domain.upper().jet(x[0]), lo = domain.lower().jet(x[0]);
      double a = hi.value - x[1], b = x[1] - lo.value;
      grad = Vec2(hi.d1 * b - a * lo.d1, -b + a);
      return a * b;
    };
    ProbeField f;
    f.value = [weight, k](const Vec2& x) {
      Vec2 g;
      double w = weight(x, g);
      return Vec2(w * std::sin(k * x[0] + 0.3), w * std::cos(k * x[0]));
    };
    f.gradient = [weight, k](const Vec2& x) {
      Vec2 g;
      double w = weight(x, g);
      double s = std::sin(k * x[0] + 0.3), c = std::cos(k * x[0]);
      double ds = k * std::cos(k * x[0] + 0.3), dc = -k * std::sin(k * x[0]);
      Mat2 G;
      G << g[0] * s + w * ds, g[1] * s, g[0] * c + w * dc, g[1] * c;
      return G;
    };
    out.push_back(std::move(f));
  }
  return out;
}

CarrierCertificate certify_carrier(const OutletDomain& domain, double flux, const CertifyOptions& opts) {
  CarrierCertificate cert;
  auto carrier = build_carrier_2d(domain, flux);
  for (double x1 : opts.sections) {
    CrossSection sec = domain.cross_section(x1 < 0.0 ? Outlet::first : Outlet::second, x1);
    double err = std::abs(verify_flux(*carrier, sec).value - flux);
    cert.sections.push_back(x1);
    cert.flux_error.push_back(err);
    cert.max_flux_error = std::max(cert.max_flux_error, err);
  }

  auto doubled = build_carrier_2d(domain, 2.0 * flux);
  const double scale = std::max(carrier->bounds().sup_gradient, 1e-300);
  const double h = opts.fd_step;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double homog = 0.0, size = 0.0;
  for (int k = 0; k < opts.points; ++k) {
    double x1 = -opts.extent + 2.0 * opts.extent * unit(rng);
    double lo = domain.lower()(x1) + 4.0 * h, hi = domain.upper()(x1) - 4.0 * h;
    Vec2 x(x1, lo + (hi - lo) * unit(rng));
    double div = (carrier->value(x + Vec2(h, 0.0))[0] - carrier->value(x - Vec2(h, 0.0))[0]) / (2.0 * h) +
                 (carrier->value(x + Vec2(0.0, h))[1] - carrier->value(x - Vec2(0.0, h))[1]) / (2.0 * h);
    cert.max_divergence = std::max(cert.max_divergence, std::abs(div) / scale);
    Vec2 a2 = doubled->value(x);
    homog = std::max(homog, (a2 - 2.0 * carrier->value(x)).norm());
    size = std::max(size, a2.norm());
  }
  cert.divergence_points = opts.points;
  cert.homogeneity_error = size > 0.0 ? homog / size : homog;

  auto probes = default_probes(domain);
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < opts.windows.size(); ++k) {
    cert.lemma.push_back(verify_lemma_a_estimates(*carrier, opts.p, opts.windows[k], probes));
    double c = cert.lemma.back().c_ii;
    lo = k == 0 ? c : std::min(lo, c);
    hi = k == 0 ? c : std::max(hi, c);
  }
  cert.c_ii_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  return cert;
}

}  // namespace thickflow
