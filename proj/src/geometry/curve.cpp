#include <algorithm>
#include <cmath>

#include "thickflow/geometry.hpp"

namespace thickflow {

Curve Curve::constant(double value) { return Curve(Constant{value}); }

Curve Curve::sine(double mean, double amplitude, double frequency, double phase) {
  return Curve(Sine{mean, amplitude, frequency, phase});
}

Curve Curve::bump(double base, double height, double width, double center) {
  if (!(width > 0.0)) throw InvalidProfile("bump width must be positive");
  return Curve(Bump{base, height, width, center});
}

Curve Curve::table(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InvalidProfile("table needs at least two (x, y) pairs of equal length");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x[i + 1] > x[i])) throw InvalidProfile("table abscissae must be strictly increasing");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InvalidProfile("table values must be finite");

  // Clamped spline with zero end slopes, solved by the Thomas algorithm.
  std::vector<double> a(n), b(n), c(n), r(n);
  auto h = [&](std::size_t i) { return x[i + 1] - x[i]; };
  b[0] = h(0) / 3.0;
  c[0] = h(0) / 6.0;
  r[0] = (y[1] - y[0]) / h(0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = h(i - 1) / 6.0;
    b[i] = (h(i - 1) + h(i)) / 3.0;
    c[i] = h(i) / 6.0;
    r[i] = (y[i + 1] - y[i]) / h(i) - (y[i] - y[i - 1]) / h(i - 1);
  }
  a[n - 1] = h(n - 2) / 6.0;
  b[n - 1] = h(n - 2) / 3.0;
  r[n - 1] = -(y[n - 1] - y[n - 2]) / h(n - 2);
  for (std::size_t i = 1; i < n; ++i) {
    double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    r[i] -= m * r[i - 1];
  }
  std::vector<double> m(n);
  m[n - 1] = r[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m[i] = (r[i] - c[i] * m[i + 1]) / b[i];
  return Curve(Table{std::move(x), std::move(y), std::move(m)});
}

Curve Curve::negated() const {
  Curve out = *this;
  out.sign_ = -sign_;
  return out;
}

std::optional<std::pair<double, double>> Curve::tabulated_range() const {
  if (const auto* t = std::get_if<Table>(&rep_)) return std::make_pair(t->x.front(), t->x.back());
  if (const auto* b = std::get_if<Bump>(&rep_))
    return std::make_pair(b->center - 8.0 * b->width, b->center + 8.0 * b->width);
  return std::nullopt;
}

Curve::Jet Curve::jet(double x) const {
  Jet j = std::visit(
      [x](const auto& r) -> Jet {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Constant>) {
          return {r.value, 0.0, 0.0};
        } else if constexpr (std::is_same_v<R, Sine>) {
          double arg = r.frequency * x + r.phase;
          double s = std::sin(arg), c = std::cos(arg);
          return {r.mean + r.amplitude * s, r.amplitude * r.frequency * c,
                  -r.amplitude * r.frequency * r.frequency * s};
        } else if constexpr (std::is_same_v<R, Bump>) {
          double u = (x - r.center) / r.width;
          double e = r.height * std::exp(-u * u);
          return {r.base + e, -2.0 * u / r.width * e, (4.0 * u * u - 2.0) / (r.width * r.width) * e};
        } else {
          const auto& xs = r.x;
          if (x <= xs.front()) return {r.y.front(), 0.0, 0.0};
          if (x >= xs.back()) return {r.y.back(), 0.0, 0.0};
          std::size_t i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
          i = std::min(i, xs.size() - 2);
          double h = xs[i + 1] - xs[i];
          double A = (xs[i + 1] - x) / h, B = 1.0 - A;
          double value = A * r.y[i] + B * r.y[i + 1] + ((A * A * A - A) * r.m[i] + (B * B * B - B) * r.m[i + 1]) * h * h / 6.0;
          double d1 = (r.y[i + 1] - r.y[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * r.m[i] +
                      (3.0 * B * B - 1.0) / 6.0 * h * r.m[i + 1];
          double d2 = A * r.m[i] + B * r.m[i + 1];
          return {value, d1, d2};
        }
      },
      rep_);
  if (sign_ < 0.0) {
    j.value = -j.value;
    j.d1 = -j.d1;
    j.d2 = -j.d2;
  }
  return j;
}

}  // namespace thickflow
