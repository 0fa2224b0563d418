#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "thickflow/geometry.hpp"
#include "thickflow/quadrature.hpp"

namespace thickflow {

namespace {

constexpr double kTol = 1e-12;

std::string at(double x1) {
  std::ostringstream os;
  os << " at x1 = " << x1;
  return os.str();
}

double sample_extent(const Curve& upper, const Curve& lower, double base) {
  double extent = base;
  for (const Curve* c : {&upper, &lower})
    if (auto r = c->tabulated_range()) extent = std::max({extent, std::abs(r->first) + 1.0, std::abs(r->second) + 1.0});
  return extent;
}

double wall_distance(const Curve& wall, const Vec2& x, double radius) {
  auto dist2 = [&](double s) {
    double dy = wall(s) - x[1];
    double dx = s - x[0];
    return dx * dx + dy * dy;
  };
  const int samples = 400;
  double best_s = x[0], best = dist2(x[0]);
  double step = 2.0 * radius / samples;
  for (int k = 0; k <= samples; ++k) {
    double s = x[0] - radius + k * step;
    double d = dist2(s);
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  double lo = best_s - step, hi = best_s + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = dist2(a), fb = dist2(b);
  for (int it = 0; it < 80; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = dist2(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = dist2(b);
    }
  }
  return std::sqrt(std::min({best, fa, fb}));
}

}  // namespace

OutletDomain OutletDomain::build(Curve upper, Curve lower, double l1, double l2, SampleGrid grid) {
  if (!(l1 > 0.0)) throw InvalidBounds("l1 must be positive");
  if (!(l2 > 0.0)) throw InvalidBounds("l2 must be positive");
  if (l1 > l2) throw InvalidBounds("l1 must not exceed l2");
  if (grid.points < 2) throw InvalidBounds("sample grid needs at least two points");

  double extent = sample_extent(upper, lower, grid.half_extent);
  int points = static_cast<int>(std::ceil(grid.points * extent / grid.half_extent));
  for (int k = 0; k < points; ++k) {
    double x1 = -extent + 2.0 * extent * k / (points - 1);
    Curve::Jet hi = upper.jet(x1), lo = lower.jet(x1);
    if (!std::isfinite(hi.value) || !std::isfinite(hi.d1) || !std::isfinite(lo.value) || !std::isfinite(lo.d1))
      throw InvalidProfile("profile is not finite" + at(x1));
    if (hi.value < 0.5 * l1 - kTol) throw CylinderViolation("upper wall below l1/2" + at(x1));
    if (lo.value > -0.5 * l1 + kTol) throw CylinderViolation("lower wall above -l1/2" + at(x1));
    if (hi.value - lo.value > l2 + kTol) throw DiameterViolation("cross-section wider than l2" + at(x1));
  }
  return OutletDomain(std::move(upper), std::move(lower), l1, l2);
}

OutletDomain OutletDomain::straight(double half_width) {
  return build(Curve::constant(half_width), Curve::constant(-half_width), 2.0 * half_width, 2.0 * half_width);
}

bool OutletDomain::contains(const Vec2& x) const { return lower_(x[0]) < x[1] && x[1] < upper_(x[0]); }

double OutletDomain::width(double x1) const { return upper_(x1) - lower_(x1); }

double OutletDomain::max_width(double x1_lo, double x1_hi) const {
  double w = 0.0;
  const int n = std::max(2, static_cast<int>(std::ceil((x1_hi - x1_lo) / 0.01)) + 1);
  for (int k = 0; k < n; ++k) w = std::max(w, width(x1_lo + (x1_hi - x1_lo) * k / (n - 1)));
  return w;
}

CrossSection OutletDomain::cross_section(Outlet outlet, double x1) const {
  if (outlet == Outlet::first && x1 > 0.0) throw WrongSide("outlet 1 sections need x1 <= 0");
  if (outlet == Outlet::second && x1 < 0.0) throw WrongSide("outlet 2 sections need x1 >= 0");
  return CrossSection{outlet, x1, lower_(x1), upper_(x1), Vec2(1.0, 0.0)};
}

SliceRegion OutletDomain::slice(Outlet outlet, double t0, double t1) const {
  if (!(t0 >= 0.0) || !(t1 > t0)) throw BadInterval("slice needs 0 <= t0 < t1");
  return SliceRegion{outlet, t0, t1};
}

double SliceRegion::x1_lo() const { return outlet == Outlet::second ? t0 : -t1; }
double SliceRegion::x1_hi() const { return outlet == Outlet::second ? t1 : -t0; }

bool SliceRegion::contains_x1(double x1) const {
  double s = outlet == Outlet::second ? x1 : -x1;
  return s > t0 && s <= t1;
}

double OutletDomain::area_between(double x1_lo, double x1_hi) const {
  std::vector<double> breaks;
  for (const Curve* c : {&upper_, &lower_})
    if (auto r = c->tabulated_range()) {
      breaks.push_back(r->first);
      breaks.push_back(r->second);
    }
  return integrate_1d([this](double x) { return width(x); }, x1_lo, x1_hi, 16, breaks, 0.25);
}

double OutletDomain::slice_area(const SliceRegion& region) const {
  return area_between(region.x1_lo(), region.x1_hi());
}

double OutletDomain::boundary_distance(const Vec2& x) const {
  double up = upper_(x[0]) - x[1];
  double down = x[1] - lower_(x[0]);
  double radius = std::max(std::min(up, down), 0.0);
  if (radius == 0.0) return 0.0;
  return std::min(wall_distance(upper_, x, radius), wall_distance(lower_, x, radius));
}

TruncatedDomain::TruncatedDomain(OutletDomain domain, double t) : domain_(std::move(domain)), t_(t) {
  if (!(t > 0.0)) throw NonPositiveLength("truncation length must be positive");
}

bool TruncatedDomain::contains(const Vec2& x) const { return std::abs(x[0]) < t_ && domain_.contains(x); }

double TruncatedDomain::area() const { return domain_.area_between(-t_, t_); }

double TruncatedDomain::annulus_area(double s) const {
  if (!(s > t_)) throw BadInterval("annulus needs s > t");
  return domain_.area_between(-s, -t_) + domain_.area_between(t_, s);
}

TruncatedDomain truncate(const OutletDomain& domain, double t) { return TruncatedDomain(domain, t); }

double integrate_strip(const OutletDomain& domain, double x1_lo, double x1_hi,
                       const std::function<double(const Vec2&)>& f,
                       const std::function<std::vector<double>(double)>& x2_breaks, int order, double panel) {
  auto column = [&](double x1) {
    std::vector<double> breaks;
    if (x2_breaks) breaks = x2_breaks(x1);
    return integrate_1d([&](double x2) { return f(Vec2(x1, x2)); }, domain.lower()(x1), domain.upper()(x1), order,
                        breaks, panel);
  };
  return integrate_1d(column, x1_lo, x1_hi, order, {}, panel);
}

}  // namespace thickflow
