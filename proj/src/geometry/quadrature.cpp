#include "thickflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace thickflow {

namespace {

GaussRule compute_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex lock;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int order,
                    std::span<const double> breakpoints, double max_panel) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& rule = gauss_legendre(order);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double lo = cuts[k], hi = cuts[k + 1];
    if (hi <= lo) continue;
    int panels = 1;
    if (max_panel > 0.0) panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
    double len = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      double c = lo + (p + 0.5) * len;
      double half = 0.5 * len;
      double s = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) s += rule.weights[q] * f(c + half * rule.nodes[q]);
      total += half * s;
    }
  }
  return total;
}

const std::vector<TrianglePoint>& triangle_rule_degree6() {
  static const std::vector<TrianglePoint> rule = [] {
    std::vector<TrianglePoint> r;
    auto add3 = [&](double a, double b, double w) {
      r.push_back({{a, b, b}, w});
      r.push_back({{b, a, b}, w});
      r.push_back({{b, b, a}, w});
    };
    add3(0.501426509658179, 0.249286745170910, 0.116786275726379);
    add3(0.873821971016996, 0.063089014491502, 0.050844906370207);
    const double a = 0.053145049844817, b = 0.310352451033784, c = 0.636502499121399;
    const double w = 0.082851075618374;
    r.push_back({{a, b, c}, w});
    r.push_back({{a, c, b}, w});
    r.push_back({{b, a, c}, w});
    r.push_back({{b, c, a}, w});
    r.push_back({{c, a, b}, w});
    r.push_back({{c, b, a}, w});
    return r;
  }();
  return rule;
}

}  // namespace thickflow
