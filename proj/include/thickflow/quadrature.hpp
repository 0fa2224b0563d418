#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace thickflow {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Cached Gauss-Legendre rule with n points.
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre over [a, b] split at the given interior breakpoints.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    int order = 16, std::span<const double> breakpoints = {},
                    double max_panel = 0.0);

struct TrianglePoint {
  std::array<double, 3> bary;
  double weight;  // weights sum to 1; multiply by the element area
};

// Symmetric 12-point rule exact for polynomials of degree 6.
const std::vector<TrianglePoint>& triangle_rule_degree6();

}  // namespace thickflow
