#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thickflow/fem.hpp"

namespace thickflow {

THICKFLOW_ERROR(InvalidSolverConfig);
THICKFLOW_ERROR(NonZeroMean);

struct SolverConfig {
  PowerLaw law{2.0, 1.0};
  double damping = 1.0;          // Picard relaxation
  double abs_tolerance = 1e-10;  // residual norm
  double rel_tolerance = 1e-9;
  int max_iterations = 200;
  double newton_switch = 1e-3;   // relative residual where Newton takes over
  double min_step = 1.0 / 1024.0;
  double stall_ratio = 0.5;      // Picard contraction above which Newton is tried early
  std::vector<double> schedule;  // continuation truncation lengths
  bool convection = true;

  void validate() const;
};

struct IterationRecord {
  int stage = 0;
  int iterate = 0;
  double residual = 0.0;
  double damping = 0.0;
  std::string method;
};

struct SolveResult {
  Vector state;
  std::vector<IterationRecord> log;
  int iterations = 0;
  double residual = 0.0;
  double initial_residual = 0.0;
  bool converged = false;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::shared_ptr<const SolveResult> last)
      : Error(what), last_(std::move(last)) {}
  const SolveResult& last() const { return *last_; }

 private:
  std::shared_ptr<const SolveResult> last_;
};

// Picard (frozen viscosity, Oseen convection) until the relative residual drops below
// newton_switch, then Newton with halving line search.
SolveResult solve_truncated(const Discretization& disc, const SolverConfig& cfg,
                            std::optional<Vector> initial = std::nullopt, int stage = 0);

struct StageSummary {
  double T = 0.0;
  int dofs = 0;
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double cold_residual = 0.0;     // residual of the zero state on the same stage
  double residual_near_cut = 0.0; // share of the initial residual within 2 units of the previous cut
  double y_window = 0.0;
  double e2_window = 0.0;
  double ep_window = 0.0;
};

struct ContinuationReport {
  std::vector<StageSummary> stages;
  std::vector<double> cauchy;  // delta_k between stages k and k + 1 on the window
  std::vector<IterationRecord> log;
  std::optional<std::string> failure;
  std::optional<Solution> final_solution;
  double window = 0.0;
};

ContinuationReport continuation_run(const OutletDomain& domain, double flux, const SolverConfig& cfg, double t,
                                    double h);

// |u|^p_{1,p} and |u|^2_{1,2} of the perturbation over {|x1| < t}.
struct WindowEnergy {
  double e2 = 0.0;
  double ep = 0.0;
};
WindowEnergy window_energy(const Mesh& m, const P2Layout& layout, const Vector& velocity, double p, double t);

struct BogovskiiResult {
  Vector w;  // interleaved P2 nodal values, zero on the boundary
  double norm_w = 0.0;        // ||w||_{1,q}
  double norm_f = 0.0;        // ||f||_q
  double ratio = 0.0;
  double divergence_residual = 0.0;  // relative weak residual
  int iterations = 0;
};

class BogovskiiSolver {
 public:
  explicit BogovskiiSolver(std::shared_ptr<const Mesh> mesh);
  BogovskiiResult solve(const std::function<double(const Vec2&)>& f, double q) const;
  const Mesh& mesh() const { return *mesh_; }
  const P2Layout& layout() const { return layout_; }

 private:
  SparseMatrix saddle(const SparseMatrix& A) const;
  Vector solve_with(const SparseSolver& solver, const Vector& rhs) const;
  double gradient_norm(const Vector& w, double q) const;

  std::shared_ptr<const Mesh> mesh_;
  P2Layout layout_;
  std::vector<char> constrained_;
  StokesBlocks blocks_;
  std::shared_ptr<const QuadratureCache> cache_;
  std::shared_ptr<SparseSolver> base_;
};

BogovskiiResult bogovskii_solve(std::shared_ptr<const Mesh> mesh, const std::function<double(const Vec2&)>& f,
                                double q);

struct UniquenessReport {
  std::vector<double> residuals;
  std::vector<int> iterations;
  std::vector<bool> converged;
  Eigen::MatrixXd distances;  // pairwise |u_a - u_b|_{1,p}
  double tolerance = 0.0;
  bool coincide = false;
};

UniquenessReport probe_uniqueness(const Discretization& disc, const SolverConfig& cfg,
                                  std::span<const Vector> initial_guesses);

std::vector<Vector> random_initial_guesses(const Discretization& disc, int count, double amplitude,
                                           unsigned long long seed);

// Power-law Poiseuille profile in a straight channel of half-width 1/2 driven by a unit
// shear-stress gradient: V(x2) = ((p-1)/p) ((1/2)^{p/(p-1)} - |x2|^{p/(p-1)}).
struct PoiseuilleProfile {
  double p;
  double value(double x2) const;
  double slope(double x2) const;
  double curvature(double x2) const;
  double flux() const;
  // Body force making (V, 0) an exact solution of the floored system with zero pressure.
  Vec2 force(const Vec2& x, double T) const;
};

// Carrier plus lifting correction: the manufactured problem on a straight channel.
struct ManufacturedCase {
  std::shared_ptr<Discretization> disc;
  std::shared_ptr<Carrier2D> carrier;
  PoiseuilleProfile profile;
  double window = 1.0;
};

ManufacturedCase manufactured_poiseuille(double p, double half_length, double h, bool convection = true);

struct ManufacturedError {
  double lp_error = 0.0;   // ||v_h - V||_{L^p} on the window
  double flux = 0.0;       // measured at x1 = 0
  int dofs = 0;
};

ManufacturedError manufactured_error(const ManufacturedCase& mc, const Vector& state);

// Flux of v = u + a through the section x1 = const.
double measured_flux(const Solution& sol, const OutletDomain& domain, double x1);

}  // namespace thickflow
