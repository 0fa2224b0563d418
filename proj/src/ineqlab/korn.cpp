#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "fields.hpp"
#include "thickflow/diagnostics.hpp"
#include "thickflow/ineqlab.hpp"

namespace thickflow {

namespace {

constexpr int dense_limit = 5000;

struct KornProblem {
  const detail::P2Fields& fields;
  const std::vector<int>& free_index;
  double q;

  Vector expand(const Vector& x) const {
    Vector full = Vector::Zero(static_cast<Eigen::Index>(free_index.size()));
    for (std::size_t i = 0; i < free_index.size(); ++i)
      if (free_index[i] >= 0) full[static_cast<Eigen::Index>(i)] = x[free_index[i]];
    return full;
  }

  // log of the ratio and its gradient with respect to the free coefficients.
  double evaluate(const Vector& x, Vector* grad) const {
    Vector full = expand(x);
    const auto& cache = fields.cache();
    const auto& layout = fields.layout();
    const int nt = static_cast<int>(layout.element_nodes.size());
    double num = 0.0, den = 0.0;
    Vector gn, gd;
    if (grad) {
      gn = Vector::Zero(x.size());
      gd = Vector::Zero(x.size());
    }
    for (int t = 0; t < nt; ++t)
      for (int k = 0; k < cache.points_per_element; ++k) {
        const auto& P = cache.at(t, k);
        Mat2 G = fields.vector_gradient(full, t, k);
        Mat2 D = strain_rate(G);
        double g = G.norm(), d = D.norm();
        num += P.weight * std::pow(g, q);
        den += P.weight * std::pow(d, q);
        if (!grad) continue;
        double wg = g > 0.0 ? P.weight * std::pow(g, q - 2.0) : 0.0;
        double wd = d > 0.0 ? P.weight * std::pow(d, q - 2.0) : 0.0;
        const auto& nodes = layout.element_nodes[t];
        for (int a = 0; a < 6; ++a)
          for (int c = 0; c < 2; ++c) {
            int r = free_index[2 * nodes[a] + c];
            if (r < 0) continue;
            Mat2 E = Mat2::Zero();
            E.row(c) = P.dN[a].transpose();
            gn[r] += wg * (G.array() * E.array()).sum();
            gd[r] += wd * (D.array() * strain_rate(E).array()).sum();
          }
      }
    if (grad) *grad = gn / num - gd / den;
    return (std::log(num) - std::log(den)) / q;
  }
};

double ascend(const KornProblem& prob, Vector x, int steps) {
  Vector g;
  double f = prob.evaluate(x, &g);
  double step = 0.1 * x.norm() / std::max(g.norm(), 1e-300);
  for (int s = 0; s < steps; ++s) {
    bool moved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Vector y = x + step * g;
      Vector gy;
      double fy = prob.evaluate(y, &gy);
      if (std::isfinite(fy) && fy > f) {
        x = y / y.norm();
        step = 2.0 * step * y.norm();
        f = fy;
        g = gy * y.norm();
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return std::exp(f);
}

}  // namespace

InequalityReport korn_constant(const Mesh& m, double q, const SearchOptions& opts) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw BadExponent("Korn exponent must satisfy q >= 1");
  detail::P2Fields fields(m);
  const P2Layout& layout = fields.layout();
  std::vector<char> constrained(layout.wall_node.begin(), layout.wall_node.end());
  StokesBlocks blocks = assemble_stokes_blocks(m, layout, constrained);
  SparseMatrix S = assemble_strain_form(m, layout, blocks.free_index, blocks.num_free);
  InequalityReport rep;
  rep.id = "korn";
  rep.q = q;
  rep.h = m.h;
  rep.dofs = blocks.num_free;

  Eigen::MatrixXd seeds;
  if (blocks.num_free <= dense_limit) {
    Eigen::MatrixXd G = Eigen::MatrixXd(blocks.A), Sd = Eigen::MatrixXd(S);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Sd);
    if (eig.info() != Eigen::Success) throw LinearSolveFailure("Korn eigenproblem failed");
    const Eigen::Index n = eig.eigenvalues().size();
    rep.reference = std::sqrt(eig.eigenvalues()[n - 1]);
    seeds = eig.eigenvectors().rightCols(std::min<Eigen::Index>(3, n));
    if (q == 2.0) {
      rep.constant = rep.reference;
      rep.note = "dense generalized eigenproblem";
      return rep;
    }
  }
  KornProblem prob{fields, blocks.free_index, q};
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vector> starts;
  for (Eigen::Index k = 0; k < seeds.cols(); ++k) starts.push_back(seeds.col(k).normalized());
  for (int k = 0; k < opts.trials; ++k) {
    Vector x(blocks.num_free);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = g(rng);
    starts.push_back(x.normalized());
  }
  std::vector<double> best(starts.size(), 0.0);
  parallel_for(static_cast<int>(starts.size()), opts.threads,
               [&](int k) { best[k] = ascend(prob, starts[k], opts.ascent_steps); });
  for (double b : best) rep.constant = std::max(rep.constant, b);
  rep.trials = static_cast<int>(starts.size());
  rep.note = "maximum over eigenvector and random starts after local ascent";
  return rep;
}

}  // namespace thickflow
