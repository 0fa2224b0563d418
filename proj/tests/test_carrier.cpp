#include <cmath>

#include "doctest.h"
#include "thickflow/carrier.hpp"

using namespace thickflow;

TEST_SUITE("carrier") {

TEST_CASE("regularized distance on the straight channel") {
  OutletDomain s = OutletDomain::straight();
  CHECK(regularized_distance(s, Vec2(0.0, 0.0)).value >= 0.5);
  DistanceJet near = regularized_distance(s, Vec2(0.0, 0.49));
  CHECK(near.value >= 0.01 - 1e-14);
  CHECK(near.grad.norm() <= 2.0);
}

TEST_CASE("cutoff end values") {
  CutoffJet lo = cutoff_psi(Cutoff::planar(), -1.0);
  CHECK(lo.value == 0.0);
  CHECK(lo.d1 == 0.0);
  CHECK(lo.d2 == 0.0);
  CutoffJet hi = cutoff_psi(Cutoff::planar(), 2.0);
  CHECK(hi.value == 1.0);
  CHECK(hi.d1 == 0.0);
  CHECK(hi.d2 == 0.0);
}

TEST_CASE("carrier flux and homogeneity") {
  OutletDomain s = OutletDomain::straight();
  auto zero = build_carrier_2d(s, 0.0);
  CHECK(zero->value(Vec2(0.3, 0.1)).norm() == 0.0);
  auto one = build_carrier_2d(s, 1.0);
  auto two = build_carrier_2d(s, 2.0);
  for (Vec2 x : {Vec2(0.0, 0.0), Vec2(-3.0, 0.2), Vec2(7.5, -0.45)}) {
    CHECK((two->value(x) - 2.0 * one->value(x)).norm() <= 1e-14);
    CHECK((two->gradient(x) - 2.0 * one->gradient(x)).norm() <= 1e-13);
  }
  CHECK(verify_flux(*one, s.cross_section(Outlet::second, 2.0)).value == doctest::Approx(1.0).epsilon(1e-10));
  auto neg = build_carrier_2d(s, -3.7);
  CHECK(std::abs(verify_flux(*neg, s.cross_section(Outlet::first, -8.0)).value + 3.7) <= 1e-9);
}

TEST_CASE("carrier extends by zero just past the walls") {
  Curve up = Curve::sine(0.75, 0.2);
  OutletDomain w = OutletDomain::build(up, up.negated(), 1.0, 2.0);
  auto a = build_carrier_2d(w, 1.0);
  for (double x1 : {-1.0, 0.3, 2.0}) {
    CHECK(a->value(Vec2(x1, up(x1) + 1e-3)).norm() == 0.0);
    CHECK(a->value(Vec2(x1, -up(x1) - 1e-3)).norm() == 0.0);
    CHECK(a->value(Vec2(x1, up(x1) - 1e-3)).norm() <= 1e-12);
  }
  CHECK_THROWS_AS(a->value(Vec2(0.0, 3.0)), OutsideDomain);
}

TEST_CASE("zero carrier gives zero estimate ratios") {
  OutletDomain s = OutletDomain::straight();
  auto zero = build_carrier_2d(s, 0.0);
  auto probes = default_probes(s);
  LemmaAReport r = verify_lemma_a_estimates(*zero, 3.0, 4.0, probes);
  CHECK(r.c_i == 0.0);
  CHECK(r.c_ii == 0.0);
  CHECK(r.c_iii == 0.0);
}

TEST_CASE("axisymmetric carrier vanishes at zero flux") {
  AxisymmetricOutlet o{Curve::constant(1.0), 1.0};
  auto c = build_carrier_3d(o, 0.0);
  CHECK(c->value(Vec3(2.0, 0.3, 0.2)).norm() == 0.0);
  auto unit = build_carrier_3d(o, 1.0);
  CHECK(unit->section_flux(3.0) == doctest::Approx(1.0).epsilon(1e-6));
}

}
