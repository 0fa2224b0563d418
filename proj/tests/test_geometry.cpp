#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thickflow/mesh.hpp"

using namespace thickflow;

namespace {

OutletDomain wavy() {
  Curve up = Curve::sine(0.75, 0.2);
  return OutletDomain::build(up, up.negated(), 1.0, 2.0);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("straight and wavy channels build") {
  OutletDomain s = OutletDomain::straight();
  CHECK(s.width(3.0) == doctest::Approx(1.0));
  OutletDomain w = wavy();
  CHECK(w.width(std::numbers::pi / 2) == doctest::Approx(1.9));
}

TEST_CASE("narrow channel violates the cylinder bound") {
  CHECK_THROWS_AS(OutletDomain::build(Curve::constant(0.4), Curve::constant(-0.4), 1.0, 1.0), CylinderViolation);
}

TEST_CASE("truncation is monotone and matches the profile integral") {
  OutletDomain s = OutletDomain::straight();
  TruncatedDomain t5 = truncate(s, 5.0), t3 = truncate(s, 3.0);
  CHECK(t5.area() == doctest::Approx(10.0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-6.0, 6.0), uy(-0.6, 0.6);
  for (int k = 0; k < 2000; ++k) {
    Vec2 x(ux(rng), uy(rng));
    if (t3.contains(x)) CHECK(t5.contains(x));
  }
  OutletDomain w = wavy();
  const double T = 2.0 * std::numbers::pi;
  CHECK(truncate(w, T).area() == doctest::Approx(1.5 * 2.0 * T).epsilon(1e-10));
}

TEST_CASE("slices and cross sections") {
  OutletDomain s = OutletDomain::straight();
  CHECK(s.slice_area(s.slice(Outlet::first, 4.0, 5.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(s.slice(Outlet::first, 4.0, 4.0), BadInterval);
  CrossSection c = s.cross_section(Outlet::second, 3.0);
  CHECK(c.lower == doctest::Approx(-0.5));
  CHECK(c.upper == doctest::Approx(0.5));
  CHECK(c.normal[0] == 1.0);
  CHECK(s.cross_section(Outlet::first, -3.0).normal[0] == 1.0);
  OutletDomain w = wavy();
  double exact = 0.0;
  for (int k = 0; k < 20000; ++k) {
    double x = -5.0 + (k + 0.5) / 20000.0;
    exact += 2.0 * (0.75 + 0.2 * std::sin(x)) / 20000.0;
  }
  CHECK(w.slice_area(w.slice(Outlet::first, 4.0, 5.0)) == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("meshes") {
  Mesh box = mesh_box(0.0, 1.0, 0.0, 1.0, 0.25);
  CHECK(box.num_triangles() >= 32);
  for (int k = 0; k < box.num_triangles(); ++k) CHECK(box.signed_area(k) > 0.0);
  Mesh ch = mesh(truncate(OutletDomain::straight(), 5.0), 0.1);
  auto walls = ch.boundary_edge_mask(BoundaryTag::wall);
  for (int e = 0; e < ch.num_edges(); ++e)
    if (walls[e]) CHECK(std::abs(std::abs(ch.edge_midpoint(e)[1]) - 0.5) < 1e-12);
  validate_mesh(ch);
}

TEST_CASE("mesh boundary approaches a curved wall at second order") {
  Curve up = Curve::sine(0.75, 0.2, 1.0, 0.5);
  OutletDomain w = OutletDomain::build(up, up.negated(), 1.0, 2.0);
  double prev = 0.0;
  for (double h : {0.2, 0.1, 0.05}) {
    Mesh m = mesh(truncate(w, 3.0), h);
    double worst = 0.0;
    auto walls = m.boundary_edge_mask(BoundaryTag::wall);
    for (int e = 0; e < m.num_edges(); ++e) {
      if (!walls[e]) continue;
      Vec2 mid = m.edge_midpoint(e);
      worst = std::max(worst, std::abs(std::abs(mid[1]) - (0.75 + 0.2 * std::sin(mid[0] + 0.5))));
    }
    CHECK(worst <= 0.2 * h * h);
    double area_error = std::abs(m.area() - truncate(w, 3.0).area());
    if (prev > 0.0) CHECK(area_error < 0.35 * prev);
    prev = area_error;
  }
}

}
