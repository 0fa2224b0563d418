#include <algorithm>
#include <cmath>

#include "thickflow/solver.hpp"

namespace thickflow {

namespace {

Mat2 gradient_at(const QuadratureCache::Point& P, const std::array<int, 6>& nodes, const Vector& w) {
  Mat2 G = Mat2::Zero();
  for (int a = 0; a < 6; ++a)
    for (int c = 0; c < 2; ++c) G.row(c) += w[2 * nodes[a] + c] * P.dN[a].transpose();
  return G;
}

}  // namespace

BogovskiiSolver::BogovskiiSolver(std::shared_ptr<const Mesh> mesh)
    : mesh_(std::move(mesh)), layout_(*mesh_) {
  constrained_.resize(layout_.num_nodes);
  for (int n = 0; n < layout_.num_nodes; ++n) constrained_[n] = layout_.boundary(n);
  blocks_ = assemble_stokes_blocks(*mesh_, layout_, constrained_);
  cache_ = std::make_shared<QuadratureCache>(*mesh_);
  base_ = std::make_shared<SparseSolver>();
  base_->factorize(saddle(blocks_.A));
}

SparseMatrix BogovskiiSolver::saddle(const SparseMatrix& A) const {
  const int nf = blocks_.num_free, nv = mesh_->num_vertices();
  std::vector<Triplet> trips;
  trips.reserve(A.nonZeros() + 2 * blocks_.B.nonZeros() + 2 * nv);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) trips.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < blocks_.B.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(blocks_.B, k); it; ++it) {
      trips.emplace_back(nf + it.row(), it.col(), it.value());
      trips.emplace_back(it.col(), nf + it.row(), it.value());
    }
  for (int j = 0; j < nv; ++j) {
    trips.emplace_back(nf + j, nf + nv, blocks_.mean[j]);
    trips.emplace_back(nf + nv, nf + j, blocks_.mean[j]);
  }
  SparseMatrix K(nf + nv + 1, nf + nv + 1);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

Vector BogovskiiSolver::solve_with(const SparseSolver& solver, const Vector& rhs) const {
  const int nf = blocks_.num_free, nv = mesh_->num_vertices();
  Vector b = Vector::Zero(nf + nv + 1);
  b.segment(nf, nv) = rhs;
  Vector x = solver.solve(b);
  Vector w = Vector::Zero(2 * layout_.num_nodes);
  for (int i = 0; i < 2 * layout_.num_nodes; ++i)
    if (blocks_.free_index[i] >= 0) w[i] = x[blocks_.free_index[i]];
  return w;
}

double BogovskiiSolver::gradient_norm(const Vector& w, double q) const {
  double s = 0.0;
  for (int t = 0; t < mesh_->num_triangles(); ++t)
    for (int k = 0; k < cache_->points_per_element; ++k) {
      const auto& P = cache_->at(t, k);
      s += P.weight * std::pow(gradient_at(P, layout_.element_nodes[t], w).norm(), q);
    }
  return std::pow(s, 1.0 / q);
}

BogovskiiResult BogovskiiSolver::solve(const std::function<double(const Vec2&)>& f, double q) const {
  if (!(q > 1.0) || !std::isfinite(q)) throw InvalidSolverConfig("exponent q must lie in (1, inf)");
  const int nv = mesh_->num_vertices();
  Vector rhs = Vector::Zero(nv);
  double mean = 0.0, fq = 0.0;
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const auto& tri = mesh_->triangles[t];
    for (int k = 0; k < cache_->points_per_element; ++k) {
      const auto& P = cache_->at(t, k);
      double v = f(P.x);
      mean += P.weight * v;
      fq += P.weight * std::pow(std::abs(v), q);
      for (int j = 0; j < 3; ++j) rhs[tri[j]] += P.weight * v * P.bary[j];
    }
  }
  BogovskiiResult out;
  out.norm_f = std::pow(fq, 1.0 / q);
  if (std::abs(mean) > 1e-10 * std::max(out.norm_f, 1e-300) && std::abs(mean) > 0.0)
    throw NonZeroMean("datum has mean " + std::to_string(mean));
  out.w = Vector::Zero(2 * layout_.num_nodes);
  if (out.norm_f == 0.0) return out;

  out.w = solve_with(*base_, rhs);
  out.iterations = 1;
  if (q != 2.0) {
    const int npts = static_cast<int>(cache_->points.size());
    std::vector<double> weights(npts);
    const double theta = q > 2.0 ? 1.0 / (q - 1.0) : 1.0;
    double prev = gradient_norm(out.w, q);
    for (int it = 0; it < 60; ++it) {
      double mean_sq = 0.0, area = 0.0;
      for (int t = 0; t < mesh_->num_triangles(); ++t)
        for (int k = 0; k < cache_->points_per_element; ++k) {
          const auto& P = cache_->at(t, k);
          double g = gradient_at(P, layout_.element_nodes[t], out.w).squaredNorm();
          weights[t * cache_->points_per_element + k] = g;
          mean_sq += P.weight * g;
          area += P.weight;
        }
      double eps2 = 1e-6 * mean_sq / area;
      for (double& w : weights) w = std::pow(eps2 + w, 0.5 * (q - 2.0));
      StokesBlocks weighted = assemble_stokes_blocks(*mesh_, layout_, constrained_, &weights);
      SparseSolver solver;
      solver.factorize(saddle(weighted.A));
      Vector next = solve_with(solver, rhs);
      out.w += theta * (next - out.w);
      ++out.iterations;
      double now = gradient_norm(out.w, q);
      bool done = std::abs(now - prev) <= 1e-6 * prev;
      prev = now;
      if (done) break;
    }
  }
  out.norm_w = gradient_norm(out.w, q);
  out.ratio = out.norm_w / out.norm_f;
  Vector wf(blocks_.num_free);
  for (int i = 0; i < 2 * layout_.num_nodes; ++i)
    if (blocks_.free_index[i] >= 0) wf[blocks_.free_index[i]] = out.w[i];
  Vector r = blocks_.B * wf - rhs;
  out.divergence_residual = r.lpNorm<Eigen::Infinity>() / std::max(rhs.lpNorm<Eigen::Infinity>(), 1e-300);
  return out;
}

BogovskiiResult bogovskii_solve(std::shared_ptr<const Mesh> mesh, const std::function<double(const Vec2&)>& f,
                                double q) {
  return BogovskiiSolver(std::move(mesh)).solve(f, q);
}

}  // namespace thickflow
