#include <cmath>
#include <random>
#include <sstream>

#include "thickflow/solver.hpp"

namespace thickflow {

void SolverConfig::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidSolverConfig("damping must lie in (0, 1]");
  if (!(abs_tolerance > 0.0) || !(rel_tolerance > 0.0)) throw InvalidSolverConfig("tolerances must be positive");
  if (max_iterations < 1) throw InvalidSolverConfig("max_iterations must be positive");
  if (!(newton_switch > 0.0)) throw InvalidSolverConfig("newton_switch must be positive");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw InvalidSolverConfig("min_step must lie in (0, 1]");
  if (!(stall_ratio > 0.0 && stall_ratio <= 1.0)) throw InvalidSolverConfig("stall_ratio must lie in (0, 1]");
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (!(schedule[k] > schedule[k - 1])) throw InvalidSolverConfig("schedule must be strictly increasing");
  for (double T : schedule)
    if (!(T > 0.0)) throw InvalidSolverConfig("schedule entries must be positive");
}

SolveResult solve_truncated(const Discretization& disc, const SolverConfig& cfg, std::optional<Vector> initial,
                            int stage) {
  cfg.validate();
  auto res = std::make_shared<SolveResult>();
  Vector x = initial ? std::move(*initial) : Vector::Zero(disc.size());
  if (x.size() != disc.size()) throw DimensionMismatch("initial guess has the wrong size");
  Vector R = disc.residual(x);
  double r = R.norm();
  const double r0 = r;
  res->initial_residual = r0;
  bool newton = false;
  int stalled = 0, cooldown = 0;
  SparseSolver lu;

  for (int it = 1;; ++it) {
    if (r <= cfg.abs_tolerance || r <= cfg.rel_tolerance * r0) {
      res->converged = true;
      res->iterations = it;
      res->residual = r;
      res->log.push_back({stage, it, r, 0.0, "converged"});
      break;
    }
    if (it > cfg.max_iterations) {
      res->state = x;
      res->iterations = it - 1;
      res->residual = r;
      std::ostringstream os;
      os << "no convergence after " << cfg.max_iterations << " iterations, residual " << r;
      throw NonConvergence(os.str(), res);
    }
    if (!newton && r <= cfg.newton_switch * r0) newton = true;
    if (!newton && stalled >= 2 && cooldown == 0) newton = true;

    Vector dir;
    double theta;
    if (!newton) {
      SparseMatrix K;
      Vector b;
      disc.picard_system(x, K, b);
      lu.factorize(K);
      dir = lu.solve(b) - x;
      theta = cfg.damping;
    } else {
      lu.factorize(disc.jacobian(x));
      dir = -lu.solve(R);
      theta = 1.0;
    }

    bool accepted = false;
    Vector xn, Rn;
    double rn = 0.0;
    for (; theta >= cfg.min_step; theta *= 0.5) {
      xn = x + theta * dir;
      Rn = disc.residual(xn);
      rn = Rn.norm();
      if (rn < r) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!newton) {
        newton = true;
        --it;
        continue;
      }
      if (r > cfg.newton_switch * r0 && cooldown == 0) {
        newton = false;
        stalled = 0;
        cooldown = 5;
        --it;
        continue;
      }
      res->state = x;
      res->iterations = it;
      res->residual = r;
      std::ostringstream os;
      os << "line search failed at iteration " << it << ", residual " << r;
      throw NonConvergence(os.str(), res);
    }
    if (!newton) {
      stalled = rn > cfg.stall_ratio * r ? stalled + 1 : 0;
      if (cooldown > 0) --cooldown;
    }
    x = std::move(xn);
    R = std::move(Rn);
    r = rn;
    res->log.push_back({stage, it, r, theta, newton ? "newton" : "picard"});
  }
  res->state = std::move(x);
  return *res;
}

std::vector<Vector> random_initial_guesses(const Discretization& disc, int count, double amplitude,
                                           unsigned long long seed) {
  std::vector<Vector> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < count; ++k) {
    Vector x = Vector::Zero(disc.size());
    for (int i = 0; i < disc.dofs().num_free_velocity; ++i) x[i] = amplitude * unit(rng);
    out.push_back(std::move(x));
  }
  return out;
}

UniquenessReport probe_uniqueness(const Discretization& disc, const SolverConfig& cfg,
                                  std::span<const Vector> guesses) {
  if (guesses.size() < 2) throw InvalidSolverConfig("uniqueness probe needs at least two initial guesses");
  for (std::size_t a = 0; a < guesses.size(); ++a)
    for (std::size_t b = a + 1; b < guesses.size(); ++b)
      if (guesses[a].size() == guesses[b].size() && (guesses[a] - guesses[b]).norm() == 0.0)
        throw InvalidSolverConfig("uniqueness probe needs distinct initial guesses");
  UniquenessReport rep;
  std::vector<Vector> velocities;
  for (const auto& g : guesses) {
    SolveResult r = solve_truncated(disc, cfg, g);
    rep.residuals.push_back(r.residual);
    rep.iterations.push_back(r.iterations);
    rep.converged.push_back(r.converged);
    velocities.push_back(disc.full_velocity(r.state));
  }
  const std::size_t n = velocities.size();
  rep.distances = Eigen::MatrixXd::Zero(n, n);
  rep.tolerance = 10.0 * cfg.abs_tolerance;
  rep.coincide = true;
  const double huge = 1e300;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      WindowEnergy e = window_energy(disc.mesh(), *disc.layout(), velocities[a] - velocities[b], disc.law().p, huge);
      double d = std::pow(e.ep, 1.0 / disc.law().p);
      rep.distances(a, b) = rep.distances(b, a) = d;
      if (!(d <= rep.tolerance)) rep.coincide = false;
    }
  return rep;
}

}  // namespace thickflow
