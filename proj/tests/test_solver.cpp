#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thickflow/solver.hpp"

using namespace thickflow;

namespace {

std::shared_ptr<Discretization> channel(double flux, double p, double T, double h, bool convection = true) {
  OutletDomain s = OutletDomain::straight();
  auto m = std::make_shared<Mesh>(mesh(truncate(s, T), h));
  DiscretizationOptions o;
  o.convection = convection;
  return std::make_shared<Discretization>(m, build_carrier_2d(s, flux), PowerLaw(p, T), o);
}

SolverConfig config(double p, double T) {
  SolverConfig c;
  c.law = PowerLaw(p, T);
  return c;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("zero flux converges immediately to zero") {
  for (double p : {2.0, 3.0, 4.0}) {
    auto d = channel(0.0, p, 5.0, 0.2);
    SolveResult r = solve_truncated(*d, config(p, 5.0));
    CHECK(r.iterations == 1);
    CHECK(r.state.norm() == 0.0);
  }
}

TEST_CASE("invalid configuration is rejected") {
  SolverConfig c = config(3.0, 5.0);
  c.damping = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidSolverConfig);
}

TEST_CASE("newtonian case matches a single linear solve") {
  auto d = channel(0.1, 2.0, 3.0, 0.2, false);
  SolveResult r = solve_truncated(*d, config(2.0, 3.0));
  Vector zero = Vector::Zero(d->size());
  SparseSolver lu;
  lu.factorize(d->jacobian(zero));
  Vector direct = -lu.solve(d->residual(zero));
  CHECK((r.state - direct).norm() <= 1e-8 * direct.norm());
}

TEST_CASE("poiseuille profile") {
  PoiseuilleProfile prof{3.0};
  CHECK(prof.flux() == doctest::Approx(std::sqrt(2.0) / 10.0).epsilon(1e-12));
  CHECK(prof.value(0.5) == doctest::Approx(0.0));
  CHECK(prof.value(0.0) == doctest::Approx((2.0 / 3.0) * std::pow(0.5, 1.5)));
}

TEST_CASE("manufactured problem on a coarse mesh") {
  ManufacturedCase mc = manufactured_poiseuille(3.0, 2.0, 0.1);
  SolverConfig c = config(3.0, 2.0);
  SolveResult r = solve_truncated(*mc.disc, c);
  ManufacturedError e = manufactured_error(mc, r.state);
  CHECK(std::abs(e.flux - std::sqrt(2.0) / 10.0) <= 0.02 * std::sqrt(2.0) / 10.0);
  CHECK(e.lp_error < 0.1);
}

TEST_CASE("continuation at zero flux stays at rest") {
  SolverConfig c = config(3.0, 6.0);
  c.schedule = {6.0, 8.0};
  ContinuationReport rep = continuation_run(OutletDomain::straight(), 0.0, c, 4.0, 0.2);
  REQUIRE(rep.stages.size() == 2);
  for (double d : rep.cauchy) CHECK(d == 0.0);
  for (const auto& s : rep.stages) CHECK(s.y_window == 0.0);
}

TEST_CASE("uniqueness probe at zero flux") {
  auto d = channel(0.0, 3.0, 5.0, 0.2);
  SolverConfig c = config(3.0, 5.0);
  auto guesses = random_initial_guesses(*d, 2, 1e-2, 4);
  guesses[0].setZero();
  UniquenessReport u = probe_uniqueness(*d, c, guesses);
  CHECK(u.coincide);
  CHECK(u.distances.maxCoeff() <= 10.0 * u.tolerance);
}

TEST_CASE("divergence solver") {
  auto m = std::make_shared<const Mesh>(mesh_box(0.0, 1.0, 0.0, 1.0, 0.125));
  BogovskiiSolver solver(m);
  BogovskiiResult zero = solver.solve([](const Vec2&) { return 0.0; }, 2.0);
  CHECK(zero.w.norm() == 0.0);
  CHECK_THROWS_AS(solver.solve([](const Vec2&) { return 1.0; }, 2.0), NonZeroMean);

  const double pi = std::numbers::pi;
  auto f1 = [pi](const Vec2& x) { return std::cos(pi * x[0]); };
  auto f2 = [pi](const Vec2& x) { return std::cos(2.0 * pi * x[1]) * std::cos(pi * x[0]); };
  BogovskiiResult a = solver.solve(f1, 2.0);
  BogovskiiResult b = solver.solve(f2, 2.0);
  BogovskiiResult ab = solver.solve([&](const Vec2& x) { return f1(x) + f2(x); }, 2.0);
  CHECK((ab.w - a.w - b.w).norm() <= 1e-10 * ab.w.norm());
  CHECK(a.divergence_residual <= 1e-8);

  // f = div g with g = (sin^2(pi x) sin^2(pi y), 0) compactly supported in the square.
  auto f = [pi](const Vec2& x) {
    return 2.0 * pi * std::sin(pi * x[0]) * std::cos(pi * x[0]) * std::pow(std::sin(pi * x[1]), 2);
  };
  double prev = 0.0;
  for (double h : {0.25, 0.125}) {
    BogovskiiResult r = bogovskii_solve(std::make_shared<const Mesh>(mesh_box(0.0, 1.0, 0.0, 1.0, h)), f, 3.0);
    CHECK(r.divergence_residual <= 1e-6);
    if (prev > 0.0) CHECK(std::abs(r.ratio - prev) <= 0.15 * prev);
    prev = r.ratio;
  }
}

}
