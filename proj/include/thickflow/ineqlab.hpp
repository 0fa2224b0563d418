#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "thickflow/diagnostics.hpp"
#include "thickflow/solver.hpp"

namespace thickflow {

THICKFLOW_ERROR(EmptyTracePart);

// Runs body(0..n-1) on up to `threads` workers; the call order is unspecified.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

struct MonotonicityReport {
  double p = 2.0;
  int samples = 0;
  double min_ratio = 0.0;          // <|x|^{p-2}x - |y|^{p-2}y, x - y> / |x - y|^p
  double max_ratio = 0.0;
  double min_intermediate = 0.0;   // same left side over |x - y|^2 (|x|^{p-2} + |y|^{p-2})
  double floor = 0.0;              // 2^{2-p}
};

// Pairs of symmetric 2x2 tensors, uniform directions, radii log-uniform in [1e-3, 1e3].
MonotonicityReport monotonicity_ratio(double p, int samples, std::uint64_t seed, int threads = 1);
double monotonicity_ratio(double p, const Mat2& x, const Mat2& y);

struct InequalityReport {
  std::string id;
  double q = 2.0;
  double constant = 0.0;
  double reference = 0.0;  // independent estimate when one exists, else 0
  double h = 0.0;
  int dofs = 0;
  int trials = 0;
  std::string note;

  nlohmann::json to_json() const;
};

struct SearchOptions {
  int trials = 20;
  int ascent_steps = 20;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Smallest C with |v|_{1,q} <= C ||D(v)||_q over discrete fields vanishing on wall edges.
InequalityReport korn_constant(const Mesh& m, double q, const SearchOptions& opts = {});

// Smallest C with ||v||_q <= C (|v|_{1,q} + ||v||_{1,Gamma}) over scalar discrete fields.
InequalityReport poincare_constant(const Mesh& m, double q, const std::function<bool(const Vec2&)>& on_gamma,
                                   const SearchOptions& opts = {});
// q = 2 oracle: dense generalized eigenproblems over a theta scan.
double poincare_oracle(const Mesh& m, const std::function<bool(const Vec2&)>& on_gamma);

// Largest ||w(f)||_{1,q} / ||f||_q over a fixed-seed family of zero-mean trigonometric data.
InequalityReport bogovskii_constant(std::shared_ptr<const Mesh> m, double q, const SearchOptions& opts = {});

nlohmann::json reports_to_json(const std::vector<InequalityReport>& reports);

}  // namespace thickflow
