#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "thickflow/error.hpp"
#include "thickflow/types.hpp"

namespace thickflow {

THICKFLOW_ERROR(CylinderViolation);
THICKFLOW_ERROR(DiameterViolation);
THICKFLOW_ERROR(InvalidBounds);
THICKFLOW_ERROR(InvalidProfile);
THICKFLOW_ERROR(NonPositiveLength);
THICKFLOW_ERROR(BadInterval);
THICKFLOW_ERROR(WrongSide);

// A wall profile x1 -> f(x1) with two analytic derivatives.
class Curve {
 public:
  struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
  };

  static Curve constant(double value);
  static Curve sine(double mean, double amplitude, double frequency = 1.0, double phase = 0.0);
  // base + height * exp(-((x - center) / width)^2)
  static Curve bump(double base, double height, double width, double center = 0.0);
  // Cubic spline with zero end slopes, extended by constants outside the table.
  static Curve table(std::vector<double> x, std::vector<double> y);

  Jet jet(double x) const;
  double operator()(double x) const { return jet(x).value; }
  Curve negated() const;

  // Range over which the profile is not trivially periodic or constant.
  std::optional<std::pair<double, double>> tabulated_range() const;

 private:
  struct Constant {
    double value;
  };
  struct Sine {
    double mean, amplitude, frequency, phase;
  };
  struct Bump {
    double base, height, width, center;
  };
  struct Table {
    std::vector<double> x, y, m;
  };
  using Rep = std::variant<Constant, Sine, Bump, Table>;

  explicit Curve(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;
  double sign_ = 1.0;
};

enum class Outlet { first = 1, second = 2 };

struct CrossSection {
  Outlet outlet;
  double x1;
  double lower;
  double upper;
  Vec2 normal;
  double length() const { return upper - lower; }
};

class OutletDomain;

// Points of an outlet with t0 < (-1)^i x1 <= t1.
struct SliceRegion {
  Outlet outlet;
  double t0;
  double t1;

  double x1_lo() const;
  double x1_hi() const;
  bool contains_x1(double x1) const;
};

struct SampleGrid {
  double half_extent = 64.0;
  int points = 20001;
};

class OutletDomain {
 public:
  // Validates the cylinder and diameter bounds on a dense sample grid.
  static OutletDomain build(Curve upper, Curve lower, double l1, double l2,
                            SampleGrid grid = {});
  static OutletDomain straight(double half_width = 0.5);

  const Curve& upper() const { return upper_; }
  const Curve& lower() const { return lower_; }
  double l1() const { return l1_; }
  double l2() const { return l2_; }

  bool contains(const Vec2& x) const;
  double width(double x1) const;
  double max_width(double x1_lo, double x1_hi) const;

  CrossSection cross_section(Outlet outlet, double x1) const;
  SliceRegion slice(Outlet outlet, double t0, double t1) const;
  double slice_area(const SliceRegion& region) const;
  double area_between(double x1_lo, double x1_hi) const;

  // Euclidean distance to the nearer wall.
  double boundary_distance(const Vec2& x) const;

 private:
  OutletDomain(Curve upper, Curve lower, double l1, double l2)
      : upper_(std::move(upper)), lower_(std::move(lower)), l1_(l1), l2_(l2) {}

  Curve upper_;
  Curve lower_;
  double l1_;
  double l2_;
};

class TruncatedDomain {
 public:
  TruncatedDomain(OutletDomain domain, double t);

  const OutletDomain& domain() const { return domain_; }
  double t() const { return t_; }
  bool contains(const Vec2& x) const;
  double area() const;
  // Omega_{t, s}: points with t < |x1| < s.
  double annulus_area(double s) const;

 private:
  OutletDomain domain_;
  double t_;
};

TruncatedDomain truncate(const OutletDomain& domain, double t);

// Tensor-product quadrature of f over {x1_lo < x1 < x1_hi, f1 < x2 < f2}.
// The optional callback supplies interior x2 breakpoints at each x1.
double integrate_strip(const OutletDomain& domain, double x1_lo, double x1_hi,
                       const std::function<double(const Vec2&)>& f,
                       const std::function<std::vector<double>(double)>& x2_breaks = {},
                       int order = 16, double panel = 0.25);

}  // namespace thickflow
