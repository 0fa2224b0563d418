#include <cmath>

#include "doctest.h"
#include "thickflow/ineqlab.hpp"

using namespace thickflow;

TEST_SUITE("ineqlab") {

TEST_CASE("monotonicity ratio") {
  MonotonicityReport two = monotonicity_ratio(2.0, 20000, 1);
  CHECK(two.min_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(two.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  Mat2 x = Mat2::Zero();
  x(0, 0) = 1.0;
  CHECK(monotonicity_ratio(4.0, x, Mat2(-x)) == doctest::Approx(0.25));
  MonotonicityReport four = monotonicity_ratio(4.0, 20000, 1, 2);
  CHECK(four.min_ratio >= 0.9 * four.floor);
  CHECK(four.min_ratio > 0.0);
  CHECK_THROWS_AS(monotonicity_ratio(1.5, 20000, 1), BadExponent);
}

TEST_CASE("sampling does not depend on the thread count") {
  MonotonicityReport a = monotonicity_ratio(3.0, 10000, 9, 1);
  MonotonicityReport b = monotonicity_ratio(3.0, 10000, 9, 3);
  CHECK(a.min_ratio == b.min_ratio);
  CHECK(a.max_ratio == b.max_ratio);
}

TEST_CASE("korn constant") {
  Mesh m = mesh_box(0.0, 1.0, 0.0, 1.0, 0.25);
  InequalityReport r = korn_constant(m, 2.0);
  CHECK(r.constant >= 1.0);
  CHECK(r.constant <= std::sqrt(2.0) + 1e-2);
  SearchOptions o;
  o.trials = 20;
  InequalityReport r3 = korn_constant(m, 3.0, o);
  CHECK(std::isfinite(r3.constant));
  CHECK(r3.constant >= 1.0);
}

TEST_CASE("poincare constant") {
  Mesh m = mesh_box(0.0, 1.0, 0.0, 1.0, 0.25);
  auto bottom = [](const Vec2& x) { return x[1] < 1e-12; };
  auto part = [](const Vec2& x) { return x[1] < 1e-12 && x[0] < 0.5; };
  InequalityReport full = poincare_constant(m, 2.0, bottom);
  InequalityReport half = poincare_constant(m, 2.0, part);
  CHECK(full.constant >= 1.0 - 1e-6);
  CHECK(half.constant >= full.constant);
  CHECK(half.constant >= 2.0 - 1e-6);
  CHECK_THROWS_AS(poincare_constant(m, 2.0, [](const Vec2&) { return false; }), EmptyTracePart);
}

TEST_CASE("bogovskii constant is finite") {
  auto m = std::make_shared<const Mesh>(mesh_box(0.0, 1.0, 0.0, 1.0, 0.25));
  InequalityReport r = bogovskii_constant(m, 2.0);
  CHECK(std::isfinite(r.constant));
  CHECK(r.constant > 0.0);
  nlohmann::json j = r.to_json();
  CHECK(j.at("id") == r.id);
}

}
