#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "thickflow/fem.hpp"

using namespace thickflow;

namespace {

Vector random_vector(int n, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (int k = 0; k < n; ++k) v[k] = u(rng);
  return v;
}

std::shared_ptr<Discretization> channel(double flux, double p, double T, double h = 0.2) {
  OutletDomain s = OutletDomain::straight();
  auto m = std::make_shared<Mesh>(mesh(truncate(s, 2.0), h));
  return std::make_shared<Discretization>(m, build_carrier_2d(s, flux), PowerLaw(p, T));
}

}  // namespace

TEST_SUITE("fem") {

TEST_CASE("strain rate of simple fields") {
  Mat2 shear;
  shear << 0, 1, 0, 0;
  Mat2 D = strain_rate(shear);
  CHECK(D(0, 1) == 0.5);
  CHECK(D(1, 0) == 0.5);
  CHECK(D(0, 0) == 0.0);
  Mat2 stretch;
  stretch << 1, 0, 0, -1;
  CHECK(strain_rate(stretch).trace() == 0.0);
  Mat2 rot;
  rot << 0, -1, 1, 0;
  CHECK(strain_rate(rot).norm() == 0.0);
}

TEST_CASE("stress law") {
  CHECK(stress(Mat2::Zero(), PowerLaw(3.0, 2.0)).norm() == 0.0);
  Mat2 D;
  D << 1, 0, 0, -1;
  Mat2 S = stress(D, PowerLaw(4.0, 1e300));
  CHECK(S(0, 0) == doctest::Approx(2.0));
  CHECK(S(1, 1) == doctest::Approx(-2.0));
  Mat2 S2 = stress(D, PowerLaw(2.0, 4.0));
  CHECK((S2 - 1.25 * D).norm() <= 1e-15);
  CHECK_THROWS_AS(PowerLaw(1.5, 1.0), InvalidLaw);
}

TEST_CASE("zero state of the homogeneous problem has zero residual") {
  auto d = channel(0.0, 3.0, 2.0);
  CHECK(d->residual(Vector::Zero(d->size())).norm() == 0.0);
  CHECK_THROWS_AS(d->residual(Vector::Zero(d->size() + 1)), DimensionMismatch);
}

TEST_CASE("jacobian matches finite differences") {
  for (double p : {2.0, 3.0, 4.0}) {
    auto d = channel(0.2, p, 3.0);
    Vector u = random_vector(d->size(), 3, 0.2);
    Vector w = random_vector(d->size(), 5, 1.0);
    const double eps = 1e-6;
    Vector fd = (d->residual(u + eps * w) - d->residual(u - eps * w)) / (2.0 * eps);
    Vector jw = d->jacobian(u) * w;
    CHECK((fd - jw).norm() <= 1e-4 * jw.norm());
  }
}

TEST_CASE("jacobian at rest is symmetric in the viscous block") {
  auto d = channel(0.0, 3.0, 2.0);
  SparseMatrix J = d->jacobian(Vector::Zero(d->size()));
  const int nv = d->dofs().num_free_velocity;
  Eigen::MatrixXd A = Eigen::MatrixXd(J).topLeftCorner(nv, nv);
  CHECK((A - A.transpose()).norm() <= 1e-12 * A.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("convection is skew") {
  auto d = channel(0.0, 2.0, 1.0);
  const P2Layout& L = *d->layout();
  Vector w = random_vector(2 * L.num_nodes, 11, 1.0);
  Vector u = random_vector(2 * L.num_nodes, 13, 1.0);
  for (int n = 0; n < L.num_nodes; ++n)
    if (L.boundary(n)) u[2 * n] = u[2 * n + 1] = 0.0;
  CHECK(std::abs(trilinear_form(d->mesh(), L, w, u, u)) <= 1e-12);
}

TEST_CASE("viscous operator is monotone") {
  auto d = channel(0.1, 3.0, 2.0);
  for (unsigned s = 0; s < 5; ++s) {
    Vector a = random_vector(d->size(), 20 + s, 0.5), b = random_vector(d->size(), 40 + s, 0.5);
    const int nv = d->dofs().num_free_velocity;
    a.tail(d->size() - nv).setZero();
    b.tail(d->size() - nv).setZero();
    double m = (d->viscous_action(a) - d->viscous_action(b)).head(nv).dot((a - b).head(nv));
    CHECK(m >= -1e-12);
  }
}

TEST_CASE("discrete inf-sup constant stays bounded below") {
  OutletDomain s = OutletDomain::straight();
  for (double h : {0.2, 0.1, 0.05}) CHECK(inf_sup_constant(mesh(truncate(s, 1.0), h)) >= 0.1);
}

TEST_CASE("matrix market export") {
  auto d = channel(0.0, 2.0, 1.0, 0.2);
  SparseMatrix J = d->jacobian(Vector::Zero(d->size()));
  auto path = std::filesystem::temp_directory_path() / "thickflow_fem_test.mtx";
  write_matrix_market(J, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("%%MatrixMarket matrix coordinate real", 0) == 0);
  std::filesystem::remove(path);
}

}
