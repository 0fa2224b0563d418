#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thickflow/carrier.hpp"
#include "thickflow/mesh.hpp"

namespace thickflow {

THICKFLOW_ERROR(DimensionMismatch);
THICKFLOW_ERROR(InvalidLaw);
THICKFLOW_ERROR(LinearSolveFailure);

struct PowerLaw {
  double p = 2.0;
  double T = 1.0;

  PowerLaw() = default;
  PowerLaw(double p, double T);
  double conjugate() const { return p / (p - 1.0); }
  double floor() const { return 1.0 / T; }
};

Mat2 strain_rate(const Mat2& grad);
// S_T(D) = (1/T + |D|^{p-2}) D with the Frobenius norm.
Mat2 stress(const Mat2& D, const PowerLaw& law);
// Directional derivative of S_T at D along E.
Mat2 stress_derivative(const Mat2& D, const Mat2& E, const PowerLaw& law);

// Quadratic Lagrange basis on the reference triangle, barycentric input.
namespace p2 {
std::array<double, 6> values(const std::array<double, 3>& bary);
// Gradients with respect to (l1, l2) where l0 = 1 - l1 - l2.
std::array<Vec2, 6> reference_gradients(const std::array<double, 3>& bary);
}  // namespace p2

// P2 node numbering: vertices first, then one node per edge.
struct P2Layout {
  int num_vertices = 0;
  int num_nodes = 0;
  std::vector<std::array<int, 6>> element_nodes;  // v0 v1 v2 e01 e12 e20
  std::vector<Vec2> node_coords;
  std::vector<char> wall_node;
  std::vector<char> cut_node;

  explicit P2Layout(const Mesh& m);
  bool boundary(int node) const { return wall_node[node] || cut_node[node]; }
};

struct ElementMap {
  Vec2 origin;
  Mat2 jacobian;     // columns x1 - x0, x2 - x0
  Mat2 inverse_t;    // J^{-T}
  double area;

  static ElementMap of(const Mesh& m, int triangle);
  Vec2 point(const std::array<double, 3>& bary) const;
};

// Evaluation of P2 vector fields stored as interleaved nodal values (2 * num_nodes).
struct FieldValue {
  Vec2 value;
  Mat2 gradient;
};

FieldValue evaluate_p2(const Mesh& m, const P2Layout& layout, const Vector& coeffs, int triangle,
                       const std::array<double, 3>& bary);

Vector interpolate_p2(const P2Layout& layout, const std::function<Vec2(const Vec2&)>& f);
Vector interpolate_p1(const Mesh& m, const std::function<double(const Vec2&)>& f);

// Degrees of freedom for the saddle-point system: free velocity, pressure, one multiplier.
struct DofMap {
  std::vector<int> velocity;  // per interleaved component, -1 when constrained
  int num_free_velocity = 0;
  int num_pressure = 0;
  int pressure_offset = 0;
  int multiplier = 0;
  int size = 0;

  DofMap(const P2Layout& layout, const std::vector<char>& constrained_node);
};

struct Solution {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const P2Layout> layout;
  std::shared_ptr<const VectorField> lifting;
  PowerLaw law;
  Vector velocity;  // perturbation u, interleaved P2 nodal values
  Vector pressure;  // P1 vertex values
  double truncation = 0.0;

  // Total velocity v = u + a at a point of a triangle.
  FieldValue total(int triangle, const std::array<double, 3>& bary) const;
  FieldValue perturbation(int triangle, const std::array<double, 3>& bary) const;
};

// Quadrature-point cache for a mesh with the degree-6 rule.
struct QuadratureCache {
  struct Point {
    Vec2 x;
    double weight;  // includes the element area
    std::array<double, 3> bary;
    std::array<double, 6> N;
    std::array<Vec2, 6> dN;
  };
  std::vector<Point> points;  // element-major, points_per_element per element
  int points_per_element = 0;

  explicit QuadratureCache(const Mesh& m);
  const Point& at(int triangle, int q) const { return points[triangle * points_per_element + q]; }
};

struct DiscretizationOptions {
  bool convection = true;
  std::function<Vec2(const Vec2&)> body_force;
  // Points where the body force may be singular (integrable); elements touching
  // the set are integrated with graded rules.
  std::function<bool(const Vec2&)> singular_set;
};

class Discretization {
 public:
  Discretization(std::shared_ptr<const Mesh> mesh, std::shared_ptr<const VectorField> lifting, PowerLaw law,
                 DiscretizationOptions options = {});

  int size() const { return dofs_.size; }
  const DofMap& dofs() const { return dofs_; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  std::shared_ptr<const P2Layout> layout() const { return layout_; }
  std::shared_ptr<const VectorField> lifting() const { return lifting_; }
  const PowerLaw& law() const { return law_; }
  const DiscretizationOptions& options() const { return options_; }
  const QuadratureCache& quadrature() const { return *cache_; }
  const Vector& load() const { return load_; }

  Vector residual(const Vector& state) const;
  SparseMatrix jacobian(const Vector& state) const;
  // Frozen-viscosity Oseen system K(x) y = b(x); its fixed points are the zeros of the residual.
  void picard_system(const Vector& state, SparseMatrix& K, Vector& rhs) const;

  // Viscous operator <A(v), phi_j> over the free velocity test functions, v = u + a.
  Vector viscous_action(const Vector& state) const;

  Solution unpack(const Vector& state) const;
  Vector pack(const Solution& sol) const;
  Vector full_velocity(const Vector& state) const;
  // max |(B u)_m| over the pressure test functions.
  double divergence_residual(const Vector& state) const;

 private:
  enum class Mode { residual, jacobian, picard, viscous };
  void assemble(const Vector& state, Mode mode, Vector* vec, std::vector<Triplet>* trips) const;
  void check(const Vector& state) const;

  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const P2Layout> layout_;
  std::shared_ptr<const VectorField> lifting_;
  PowerLaw law_;
  DiscretizationOptions options_;
  DofMap dofs_;
  std::shared_ptr<const QuadratureCache> cache_;
  std::vector<Vec2> lift_value_;
  std::vector<Mat2> lift_grad_;
  Vector load_;  // over the full unknown vector
};

// Skew form b(w; u, v) = 1/2 [(w . grad u, v) - (w . grad v, u)] for interleaved P2 fields.
double trilinear_form(const Mesh& m, const P2Layout& layout, const Vector& w, const Vector& u, const Vector& v);

// Load vector int f . phi_i over all interleaved P2 components. Elements with an edge or a
// vertex in the singular set use a graded collapsed rule that absorbs |dist|^{-1/2} singularities.
Vector assemble_load(const Mesh& m, const P2Layout& layout, const std::function<Vec2(const Vec2&)>& f,
                     const std::function<bool(const Vec2&)>& singular_set = {});

// Blocks over free velocity components (constrained set given per node).
struct StokesBlocks {
  SparseMatrix A;   // int mu grad u : grad v
  SparseMatrix B;   // int q div v, rows = P1 vertices
  SparseMatrix Mp;  // P1 mass
  Vector mean;      // int q_m
  std::vector<int> free_index;  // interleaved component -> free index or -1
  int num_free = 0;
};

StokesBlocks assemble_stokes_blocks(const Mesh& m, const P2Layout& layout, const std::vector<char>& constrained_node,
                                    const std::vector<double>* qp_weights = nullptr);

// int D(u) : D(v) over free components.
SparseMatrix assemble_strain_form(const Mesh& m, const P2Layout& layout, const std::vector<int>& free_index,
                                  int num_free);

// Scalar P2 forms for the Poincare estimates.
struct ScalarForms {
  SparseMatrix K;  // stiffness
  SparseMatrix M;  // mass
};
ScalarForms assemble_scalar_forms(const Mesh& m, const P2Layout& layout);
// int_Gamma phi_i ds over boundary edges selected by the predicate on their midpoint.
Vector boundary_trace(const Mesh& m, const P2Layout& layout, const std::function<bool(const Vec2&)>& on_gamma,
                      double* measure = nullptr);

// Smallest nonconstant generalized eigenvalue of B A^{-1} B^T against the pressure mass.
double inf_sup_constant(const Mesh& m);

class SparseSolver {
 public:
  SparseSolver();
  ~SparseSolver();
  SparseSolver(const SparseSolver&) = delete;
  SparseSolver& operator=(const SparseSolver&) = delete;

  void factorize(const SparseMatrix& A);
  Vector solve(const Vector& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
  static std::string backend();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Values of an interleaved P2 field from another mesh at this layout's nodes; zero outside.
Vector transfer_velocity(const Mesh& from, const P2Layout& from_layout, const Vector& coeffs, const P2Layout& to_layout);
Vector transfer_pressure(const Mesh& from, const Vector& pressure, const Mesh& to);

void write_matrix_market(const SparseMatrix& A, const std::string& path);

}  // namespace thickflow
