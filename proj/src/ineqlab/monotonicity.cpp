#include <algorithm>
#include <cmath>
#include <random>

#include "thickflow/diagnostics.hpp"
#include "thickflow/ineqlab.hpp"

namespace thickflow {

namespace {

double frob(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

double powp(double s, double e) { return e == 0.0 ? 1.0 : std::pow(s, e); }

Mat2 sample_tensor(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e3));
  Eigen::Vector3d d(g(rng), g(rng), g(rng));
  d /= d.norm();
  double r = std::exp(u(rng));
  Mat2 x;
  x << d[0], d[2] / std::sqrt(2.0), d[2] / std::sqrt(2.0), d[1];
  return r * x;
}

}  // namespace

double monotonicity_ratio(double p, const Mat2& x, const Mat2& y) {
  if (!(p >= 2.0)) throw BadExponent("monotonicity needs p >= 2");
  double nx = std::sqrt(frob(x, x)), ny = std::sqrt(frob(y, y));
  Mat2 d = x - y;
  double dd = frob(d, d);
  Mat2 s = powp(nx, p - 2.0) * x - powp(ny, p - 2.0) * y;
  double lhs = p == 2.0 ? dd : frob(s, d);
  return lhs / std::pow(dd, 0.5 * p);
}

MonotonicityReport monotonicity_ratio(double p, int samples, std::uint64_t seed, int threads) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw BadExponent("monotonicity needs p >= 2");
  if (samples < 1) throw BadExponent("sample count must be positive");
  constexpr int chunk = 1000;
  const int chunks = (samples + chunk - 1) / chunk;
  struct Partial {
    double lo = INFINITY, hi = -INFINITY, mid = INFINITY;
  };
  std::vector<Partial> parts(chunks);
  parallel_for(chunks, threads, [&](int c) {
    std::seed_seq ss{seed, static_cast<std::uint64_t>(c)};
    std::mt19937_64 rng(ss);
    Partial& out = parts[c];
    const int n = std::min(chunk, samples - c * chunk);
    for (int k = 0; k < n; ++k) {
      Mat2 x = sample_tensor(rng), y = sample_tensor(rng);
      Mat2 d = x - y;
      double dd = frob(d, d);
      if (dd == 0.0) continue;
      double nx = std::sqrt(frob(x, x)), ny = std::sqrt(frob(y, y));
      double lhs = p == 2.0 ? dd : frob(powp(nx, p - 2.0) * x - powp(ny, p - 2.0) * y, d);
      double r = lhs / std::pow(dd, 0.5 * p);
      double m = lhs / (dd * (powp(nx, p - 2.0) + powp(ny, p - 2.0)));
      out.lo = std::min(out.lo, r);
      out.hi = std::max(out.hi, r);
      out.mid = std::min(out.mid, m);
    }
  });
  MonotonicityReport rep;
  rep.p = p;
  rep.samples = samples;
  rep.floor = std::pow(2.0, 2.0 - p);
  rep.min_ratio = INFINITY;
  rep.max_ratio = -INFINITY;
  rep.min_intermediate = INFINITY;
  for (const auto& q : parts) {
    rep.min_ratio = std::min(rep.min_ratio, q.lo);
    rep.max_ratio = std::max(rep.max_ratio, q.hi);
    rep.min_intermediate = std::min(rep.min_intermediate, q.mid);
  }
  return rep;
}

}  // namespace thickflow
