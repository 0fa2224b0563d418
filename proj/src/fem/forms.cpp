#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "thickflow/fem.hpp"
#include "thickflow/quadrature.hpp"

namespace thickflow {

namespace {

struct GradedPoint {
  std::array<double, 3> bary;
  double weight;  // fraction of the element area
};

const std::vector<GradedPoint>& graded_rule(bool edge) {
  static const auto build = [](bool edge_rule) {
    const GaussRule& g = gauss_legendre(12);
    std::vector<GradedPoint> pts;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      double tau = 0.5 * (g.nodes[i] + 1.0), wt = 0.5 * g.weights[i];
      for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        double s = 0.5 * (g.nodes[j] + 1.0), ws = 0.5 * g.weights[j];
        double r = tau * tau;
        if (edge_rule) {
          // local order: A, B singular, C regular; distance to AB grows like r
          pts.push_back({{1.0 - r - s * (1.0 - r), s * (1.0 - r), r}, 2.0 * (1.0 - r) * 2.0 * tau * wt * ws});
        } else {
          // local order: C singular apex, A, B
          pts.push_back({{1.0 - r, r * (1.0 - s), r * s}, 2.0 * r * 2.0 * tau * wt * ws});
        }
      }
    }
    return pts;
  };
  static const std::vector<GradedPoint> edge_pts = build(true);
  static const std::vector<GradedPoint> vertex_pts = build(false);
  return edge ? edge_pts : vertex_pts;
}

}  // namespace

Vector assemble_load(const Mesh& m, const P2Layout& layout, const std::function<Vec2(const Vec2&)>& f,
                     const std::function<bool(const Vec2&)>& singular_set) {
  Vector out = Vector::Zero(2 * layout.num_nodes);
  const auto& rule = triangle_rule_degree6();
  for (int t = 0; t < m.num_triangles(); ++t) {
    ElementMap e = ElementMap::of(m, t);
    const auto& tri = m.triangles[t];
    std::array<int, 3> order{0, 1, 2};
    int singular = 0;
    bool on[3] = {false, false, false};
    if (singular_set)
      for (int k = 0; k < 3; ++k)
        if (singular_set(m.vertices[tri[k]])) {
          on[k] = true;
          ++singular;
        }
    std::vector<std::pair<std::array<double, 3>, double>> pts;
    if (singular == 2 || singular == 1) {
      bool edge = singular == 2;
      if (edge) {
        int c = on[0] ? (on[1] ? 2 : 1) : 0;
        order = {(c + 1) % 3, (c + 2) % 3, c};
      } else {
        int c = on[0] ? 0 : (on[1] ? 1 : 2);
        order = {c, (c + 1) % 3, (c + 2) % 3};
      }
      for (const auto& gp : graded_rule(edge)) {
        std::array<double, 3> b{};
        for (int k = 0; k < 3; ++k) b[order[k]] = gp.bary[k];
        pts.push_back({b, gp.weight});
      }
    } else {
      for (const auto& q : rule) pts.push_back({q.bary, q.weight});
    }
    const auto& nodes = layout.element_nodes[t];
    for (const auto& [b, w] : pts) {
      Vec2 fx = f(e.point(b));
      auto N = p2::values(b);
      for (int k = 0; k < 6; ++k) {
        out[2 * nodes[k]] += w * e.area * N[k] * fx[0];
        out[2 * nodes[k] + 1] += w * e.area * N[k] * fx[1];
      }
    }
  }
  return out;
}

double trilinear_form(const Mesh& m, const P2Layout& layout, const Vector& w, const Vector& u, const Vector& v) {
  QuadratureCache cache(m);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& nodes = layout.element_nodes[t];
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      Vec2 wq = Vec2::Zero(), uq = Vec2::Zero(), vq = Vec2::Zero();
      Mat2 Gu = Mat2::Zero(), Gv = Mat2::Zero();
      for (int k = 0; k < 6; ++k) {
        int n = nodes[k];
        Vec2 wc(w[2 * n], w[2 * n + 1]), uc(u[2 * n], u[2 * n + 1]), vc(v[2 * n], v[2 * n + 1]);
        wq += P.N[k] * wc;
        uq += P.N[k] * uc;
        vq += P.N[k] * vc;
        Gu += uc * P.dN[k].transpose();
        Gv += vc * P.dN[k].transpose();
      }
      total += P.weight * 0.5 * ((Gu * wq).dot(vq) - (Gv * wq).dot(uq));
    }
  }
  return total;
}

StokesBlocks assemble_stokes_blocks(const Mesh& m, const P2Layout& layout, const std::vector<char>& constrained,
                                    const std::vector<double>* qp_weights) {
  StokesBlocks out;
  out.free_index.assign(2 * layout.num_nodes, -1);
  int k = 0;
  for (int n = 0; n < layout.num_nodes; ++n)
    if (!constrained[n]) {
      out.free_index[2 * n] = k++;
      out.free_index[2 * n + 1] = k++;
    }
  out.num_free = k;
  QuadratureCache cache(m);
  std::vector<Triplet> ta, tb, tm;
  out.mean = Vector::Zero(m.num_vertices());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& nodes = layout.element_nodes[t];
    const auto& tri = m.triangles[t];
    double A[6][6] = {}, B[3][12] = {}, M[3][3] = {};
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      double w = P.weight;
      double mu = qp_weights ? (*qp_weights)[t * cache.points_per_element + q] : 1.0;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) A[a][b] += w * mu * P.dN[a].dot(P.dN[b]);
      for (int j = 0; j < 3; ++j) {
        for (int a = 0; a < 6; ++a)
          for (int c = 0; c < 2; ++c) B[j][2 * a + c] += w * P.bary[j] * P.dN[a][c];
        for (int i = 0; i < 3; ++i) M[j][i] += w * P.bary[j] * P.bary[i];
        out.mean[tri[j]] += w * P.bary[j];
      }
    }
    for (int a = 0; a < 6; ++a)
      for (int c = 0; c < 2; ++c) {
        int ra = out.free_index[2 * nodes[a] + c];
        if (ra < 0) continue;
        for (int b = 0; b < 6; ++b) {
          int cb = out.free_index[2 * nodes[b] + c];
          if (cb >= 0) ta.emplace_back(ra, cb, A[a][b]);
        }
        for (int j = 0; j < 3; ++j) tb.emplace_back(tri[j], ra, B[j][2 * a + c]);
      }
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) tm.emplace_back(tri[j], tri[i], M[j][i]);
  }
  out.A.resize(out.num_free, out.num_free);
  out.A.setFromTriplets(ta.begin(), ta.end());
  out.B.resize(m.num_vertices(), out.num_free);
  out.B.setFromTriplets(tb.begin(), tb.end());
  out.Mp.resize(m.num_vertices(), m.num_vertices());
  out.Mp.setFromTriplets(tm.begin(), tm.end());
  return out;
}

SparseMatrix assemble_strain_form(const Mesh& m, const P2Layout& layout, const std::vector<int>& free_index,
                                  int num_free) {
  QuadratureCache cache(m);
  std::vector<Triplet> trips;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& nodes = layout.element_nodes[t];
    double K[12][12] = {};
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 2; ++c)
          for (int b = 0; b < 6; ++b)
            for (int d = 0; d < 2; ++d)
              K[2 * a + c][2 * b + d] +=
                  P.weight * 0.5 * ((c == d ? P.dN[a].dot(P.dN[b]) : 0.0) + P.dN[b][c] * P.dN[a][d]);
    }
    for (int i = 0; i < 12; ++i) {
      int r = free_index[2 * nodes[i / 2] + i % 2];
      if (r < 0) continue;
      for (int j = 0; j < 12; ++j) {
        int c = free_index[2 * nodes[j / 2] + j % 2];
        if (c >= 0) trips.emplace_back(r, c, K[i][j]);
      }
    }
  }
  SparseMatrix S(num_free, num_free);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

ScalarForms assemble_scalar_forms(const Mesh& m, const P2Layout& layout) {
  QuadratureCache cache(m);
  std::vector<Triplet> tk, tm;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& nodes = layout.element_nodes[t];
    double K[6][6] = {}, M[6][6] = {};
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(t, q);
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
          K[a][b] += P.weight * P.dN[a].dot(P.dN[b]);
          M[a][b] += P.weight * P.N[a] * P.N[b];
        }
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        tk.emplace_back(nodes[a], nodes[b], K[a][b]);
        tm.emplace_back(nodes[a], nodes[b], M[a][b]);
      }
  }
  ScalarForms f;
  f.K.resize(layout.num_nodes, layout.num_nodes);
  f.K.setFromTriplets(tk.begin(), tk.end());
  f.M.resize(layout.num_nodes, layout.num_nodes);
  f.M.setFromTriplets(tm.begin(), tm.end());
  return f;
}

Vector boundary_trace(const Mesh& m, const P2Layout& layout, const std::function<bool(const Vec2&)>& on_gamma,
                      double* measure) {
  Vector L = Vector::Zero(layout.num_nodes);
  double total = 0.0;
  for (const auto& b : m.boundary) {
    if (!on_gamma(m.edge_midpoint(b.edge))) continue;
    int v0 = m.edges[b.edge][0], v1 = m.edges[b.edge][1];
    double len = (m.vertices[v1] - m.vertices[v0]).norm();
    L[v0] += len / 6.0;
    L[v1] += len / 6.0;
    L[layout.num_vertices + b.edge] += 2.0 * len / 3.0;
    total += len;
  }
  if (measure) *measure = total;
  return L;
}

double inf_sup_constant(const Mesh& m) {
  P2Layout layout(m);
  std::vector<char> constrained(layout.num_nodes, 0);
  for (int n = 0; n < layout.num_nodes; ++n) constrained[n] = layout.boundary(n);
  StokesBlocks blocks = assemble_stokes_blocks(m, layout, constrained);
  SparseSolver solver;
  solver.factorize(blocks.A);
  Eigen::MatrixXd Bt = Eigen::MatrixXd(blocks.B.transpose());
  Eigen::MatrixXd X = solver.solve(Bt);
  Eigen::MatrixXd S = blocks.B * X;
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::MatrixXd Mp = Eigen::MatrixXd(blocks.Mp);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Mp, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw LinearSolveFailure("pressure Schur eigenproblem failed");
  return std::sqrt(std::max(0.0, eig.eigenvalues()[1]));
}

}  // namespace thickflow
