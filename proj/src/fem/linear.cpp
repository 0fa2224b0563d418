#include <Eigen/SparseLU>

#include "thickflow/fem.hpp"

#ifdef THICKFLOW_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace thickflow {

struct SparseSolver::Impl {
#ifdef THICKFLOW_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  SparseMatrix matrix;
};

SparseSolver::SparseSolver() : impl_(std::make_unique<Impl>()) {
#ifdef THICKFLOW_HAVE_UMFPACK
  impl_->lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
  impl_->lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_AMD;
#endif
}
SparseSolver::~SparseSolver() = default;

std::string SparseSolver::backend() {
#ifdef THICKFLOW_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

void SparseSolver::factorize(const SparseMatrix& A) {
  impl_->matrix = A;
  impl_->matrix.makeCompressed();
  impl_->lu.compute(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) throw LinearSolveFailure("sparse factorization failed");
}

Vector SparseSolver::solve(const Vector& b) const {
  Vector x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) throw LinearSolveFailure("sparse solve failed");
  return x;
}

Eigen::MatrixXd SparseSolver::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd x(b.rows(), b.cols());
  for (int j = 0; j < b.cols(); ++j) x.col(j) = solve(Vector(b.col(j)));
  return x;
}

}  // namespace thickflow
