#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "thickflow/ineqlab.hpp"

namespace thickflow {

InequalityReport bogovskii_constant(std::shared_ptr<const Mesh> m, double q, const SearchOptions& opts) {
  if (opts.trials < 20) throw InvalidSolverConfig("Bogovskii estimate needs at least 20 trials");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& v : m->vertices) {
    x0 = std::min(x0, v[0]);
    x1 = std::max(x1, v[0]);
    y0 = std::min(y0, v[1]);
    y1 = std::max(y1, v[1]);
  }
  BogovskiiSolver solver(m);
  QuadratureCache cache(*m);
  double area = 0.0;
  for (const auto& P : cache.points) area += P.weight;

  struct Mode {
    int kx, ky;
    double a;
  };
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> freq(0, 3);
  std::normal_distribution<double> amp(0.0, 1.0);
  std::vector<std::vector<Mode>> family(opts.trials);
  for (auto& f : family)
    for (int k = 0; k < 3; ++k) {
      Mode md{freq(rng), freq(rng), amp(rng)};
      if (md.kx == 0 && md.ky == 0) md.kx = 1;
      f.push_back(md);
    }

  InequalityReport rep;
  rep.id = "bogovskii";
  rep.q = q;
  rep.h = m->h;
  rep.dofs = 2 * solver.layout().num_nodes;
  rep.trials = opts.trials;
  const double pi = std::numbers::pi;
  for (const auto& modes : family) {
    auto raw = [&](const Vec2& x) {
      double s = 0.0;
      for (const auto& md : modes)
        s += md.a * std::cos(pi * md.kx * (x[0] - x0) / (x1 - x0)) * std::cos(pi * md.ky * (x[1] - y0) / (y1 - y0));
      return s;
    };
    double mean = 0.0;
    for (const auto& P : cache.points) mean += P.weight * raw(P.x);
    mean /= area;
    BogovskiiResult r = solver.solve([&](const Vec2& x) { return raw(x) - mean; }, q);
    rep.constant = std::max(rep.constant, r.ratio);
  }
  rep.note = "maximum over a fixed-seed family of zero-mean cosine data";
  return rep;
}

}  // namespace thickflow
