#include <cmath>
#include <sstream>

#include "doctest.h"
#include "thickflow/diagnostics.hpp"

using namespace thickflow;

namespace {

struct Grid {
  std::vector<double> t, y;
};

Grid sample(double t0, double t1, double dt, double (*f)(double)) {
  Grid g;
  for (int k = 0; t0 + k * dt <= t1 + 1e-12; ++k) {
    g.t.push_back(t0 + k * dt);
    g.y.push_back(f(g.t.back()));
  }
  return g;
}

Solution rest(double p, double T) {
  OutletDomain s = OutletDomain::straight();
  auto m = std::make_shared<Mesh>(mesh(truncate(s, T), 0.2));
  Discretization d(m, build_carrier_2d(s, 0.0), PowerLaw(p, T));
  return d.unpack(Vector::Zero(d.size()));
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("z series of constant, linear and quadratic data") {
  const std::vector<double> eta{2.0, 3.5, 5.0};
  Grid c = sample(0.0, 6.0, 0.125, [](double) { return 2.5; });
  ZSeries zc = z_series(0.0, 0.125, c.y, eta);
  for (std::size_t k = 0; k < eta.size(); ++k) {
    CHECK(zc.z[k] == doctest::Approx(2.5));
    CHECK(zc.zprime[k] == 0.0);
  }
  Grid l = sample(0.0, 6.0, 0.125, [](double t) { return t; });
  ZSeries zl = z_series(0.0, 0.125, l.y, eta);
  for (std::size_t k = 0; k < eta.size(); ++k) {
    CHECK(zl.z[k] == doctest::Approx(eta[k] - 0.5).epsilon(1e-14));
    CHECK(zl.zprime[k] == doctest::Approx(1.0));
  }
  Grid q = sample(0.0, 6.0, 1.0 / 512.0, [](double t) { return t * t; });
  ZSeries zq = z_series(0.0, 1.0 / 512.0, q.y, eta);
  for (std::size_t k = 0; k < eta.size(); ++k) {
    CHECK(zq.z[k] == doctest::Approx(eta[k] * eta[k] - eta[k] + 1.0 / 3.0).epsilon(1e-6));
    CHECK(zq.zprime[k] == doctest::Approx(2.0 * eta[k] - 1.0));
  }
  CHECK_THROWS_AS(z_series(0.0, 0.3, l.y, eta), GridMismatch);
}

TEST_CASE("growth rate fit") {
  Grid a = sample(1.0, 10.0, 0.5, [](double t) { return 3.0 * t + 1.0; });
  GrowthReport g = growth_rate(a.t, a.y, 1.0, 10.0);
  CHECK(g.c1 == doctest::Approx(3.0));
  CHECK(g.c2 == doctest::Approx(1.0));
  CHECK(g.sup_at == 1.0);
  CHECK(g.sup_ratio == doctest::Approx(4.0));
  CHECK_FALSE(g.superlinear);
  Grid b = sample(1.0, 10.0, 0.5, [](double t) { return t * t; });
  CHECK(growth_rate(b.t, b.y, 1.0, 10.0).superlinear);
  CHECK_THROWS_AS(growth_rate(a.t, a.y, 2.0, 2.2), TooFewSamples);
}

TEST_CASE("comparison verdicts") {
  ZSeries zero{{1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  CHECK(comparison_check(zero, PsiSpec::power(1.0, 2.0), 0.5, Affine{1.0, 1.0}).verdict == Verdict::holds);
  ZSeries q;
  for (double t = 1.0; t <= 10.0; t += 0.25) {
    q.eta.push_back(t);
    q.z.push_back(t * t / 4.0);
    q.zprime.push_back(t / 2.0);
  }
  // z = t^2/4 solves z = Psi(z') with Psi(tau) = tau^2 but exceeds phi = 0 at the right end.
  ComparisonVerdict v = comparison_check(q, PsiSpec::power(1.0, 2.0), 0.5, Affine{0.0, 0.0});
  CHECK(v.verdict == Verdict::hypothesis_failed);
  CHECK(v.detail.find("z(T)") != std::string::npos);
  CHECK_THROWS_AS(PsiSpec::power(-1.0, 2.0).validate(), NotStrictlyIncreasingPsi);
}

TEST_CASE("blow-up rates") {
  ZSeries q, e;
  for (double t = 1.0; t <= 20.0; t += 0.5) {
    q.eta.push_back(t);
    q.z.push_back(t * t / 4.0);
    q.zprime.push_back(t / 2.0);
    e.eta.push_back(t);
    e.z.push_back(std::exp(t));
    e.zprime.push_back(std::exp(t));
  }
  BlowupEstimate bq = blowup_rate(q, PsiSpec::power(1.0, 2.0), BlowupBound::power(2.0));
  CHECK(std::abs(bq.rate - 0.25) <= 1e-12);
  CHECK(bq.positive);
  BlowupEstimate be = blowup_rate(e, PsiSpec::power(1.0, 1.0), BlowupBound::linear(1.0));
  CHECK(std::abs(be.rate - 1.0) <= 1e-12);
}

TEST_CASE("zero solution has zero energies") {
  Solution s = rest(3.0, 5.0);
  DirichletEnergy e = dirichlet_energy(s, 4.0);
  CHECK(e.e2 == 0.0);
  CHECK(e.ep == 0.0);
  CHECK(slice_dissipation(s, Outlet::first, 3.0) == 0.0);
  CHECK_THROWS_AS(dirichlet_energy(s, 6.0), WindowExceedsDomain);
  ShearBoundReport z = shear_bound_check(s, 0.0, 0, 1, 1.0, 4.0);
  CHECK(z.holds);
  CHECK(z.max_constant == 0.0);
  CHECK_FALSE(shear_bound_check(s, 0.1, 0, 1, 1.0, 4.0).holds);
  CHECK(weighted_dissipation(s, Vector::Zero(s.velocity.size()), -4.0, 4.0) == 0.0);
}

TEST_CASE("weighted dissipation at p = 2 is the strain energy") {
  Solution s = rest(2.0, 3.0);
  const P2Layout& L = *s.layout;
  Vector w(2 * L.num_nodes);
  for (int n = 0; n < L.num_nodes; ++n) {
    w[2 * n] = L.node_coords[n][1];
    w[2 * n + 1] = 0.0;
  }
  // D(w) = [[0, 1/2], [1/2, 0]], |D|^2 = 1/2 over an area of 2.
  CHECK(weighted_dissipation(s, w, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("diagnostic series csv") {
  Solution s = rest(3.0, 6.0);
  DiagnosticsSeries d = diagnostics_series(s, 5.0);
  std::ostringstream os;
  d.write_csv(os);
  std::string text = os.str();
  CHECK(text.rfind("t,y2,yp,z,zprime,slice1,slice2\n", 0) == 0);
  for (double v : d.y()) CHECK(v == 0.0);
  SandwichReport sw = check_sandwich(d);
  CHECK(sw.monotone);
  CHECK(sw.sandwich);
}

TEST_CASE("kappa fit") {
  KappaFit f = fit_kappa({0.05, 0.1, 0.2}, {1.0, 8.0, 64.0});
  CHECK(f.increasing);
  CHECK(f.gamma == doctest::Approx(3.0));
}

TEST_CASE("exponent bookkeeping") {
  ExponentSet a = exponents(Rational(4), 3);
  CHECK(a.conjugate == Rational(4, 3));
  REQUIRE(a.q);
  CHECK(*a.q == Rational(10));
  REQUIRE(a.l);
  CHECK(*a.l == Rational(5, 3));
  ExponentSet b = exponents(Rational(2), 3);
  CHECK(b.conjugate == Rational(2));
  CHECK(*b.q == Rational(6));
  CHECK(*b.l == Rational(2));
  ExponentSet c = exponents(Rational(3), 2);
  CHECK_FALSE(c.q.has_value());
  CHECK(Rational::parse("20/12") == Rational(5, 3));
  CHECK(Rational(5, 3).str() == "5/3");
  CHECK_THROWS_AS(exponents(Rational(1), 3), BadExponent);
}

}
