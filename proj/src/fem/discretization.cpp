#include <cmath>

#include "thickflow/fem.hpp"

namespace thickflow {

namespace {

std::vector<char> all_boundary_nodes(const P2Layout& layout) {
  std::vector<char> c(layout.num_nodes, 0);
  for (int n = 0; n < layout.num_nodes; ++n) c[n] = layout.boundary(n) ? 1 : 0;
  return c;
}

double viscosity_power(double n, double p) { return p == 2.0 ? 1.0 : std::pow(n, p - 2.0); }

}  // namespace

Discretization::Discretization(std::shared_ptr<const Mesh> mesh, std::shared_ptr<const VectorField> lifting,
                               PowerLaw law, DiscretizationOptions options)
    : mesh_(std::move(mesh)),
      layout_(std::make_shared<P2Layout>(*mesh_)),
      lifting_(std::move(lifting)),
      law_(law),
      options_(std::move(options)),
      dofs_(*layout_, all_boundary_nodes(*layout_)),
      cache_(std::make_shared<QuadratureCache>(*mesh_)) {
  const std::size_t nq = cache_->points.size();
  lift_value_.assign(nq, Vec2::Zero());
  lift_grad_.assign(nq, Mat2::Zero());
  if (lifting_)
    for (std::size_t i = 0; i < nq; ++i) {
      lift_value_[i] = lifting_->value(cache_->points[i].x);
      lift_grad_[i] = lifting_->gradient(cache_->points[i].x);
    }
  load_ = Vector::Zero(dofs_.size);
  if (options_.body_force) {
    Vector full = assemble_load(*mesh_, *layout_, options_.body_force, options_.singular_set);
    for (int i = 0; i < full.size(); ++i)
      if (dofs_.velocity[i] >= 0) load_[dofs_.velocity[i]] = full[i];
  }
}

void Discretization::check(const Vector& state) const {
  if (state.size() != dofs_.size)
    throw DimensionMismatch("state has " + std::to_string(state.size()) + " entries, expected " +
                            std::to_string(dofs_.size));
}

Vector Discretization::full_velocity(const Vector& state) const {
  check(state);
  Vector u = Vector::Zero(2 * layout_->num_nodes);
  for (int i = 0; i < u.size(); ++i)
    if (dofs_.velocity[i] >= 0) u[i] = state[dofs_.velocity[i]];
  return u;
}

Solution Discretization::unpack(const Vector& state) const {
  Solution s;
  s.mesh = mesh_;
  s.layout = layout_;
  s.lifting = lifting_;
  s.law = law_;
  s.velocity = full_velocity(state);
  s.pressure = state.segment(dofs_.pressure_offset, dofs_.num_pressure);
  double t = 0.0;
  for (const auto& v : mesh_->vertices) t = std::max(t, std::abs(v[0]));
  s.truncation = t;
  return s;
}

Vector Discretization::pack(const Solution& sol) const {
  if (sol.velocity.size() != 2 * layout_->num_nodes || sol.pressure.size() != dofs_.num_pressure)
    throw DimensionMismatch("solution does not match the discretization");
  Vector x = Vector::Zero(dofs_.size);
  for (int i = 0; i < sol.velocity.size(); ++i)
    if (dofs_.velocity[i] >= 0) x[dofs_.velocity[i]] = sol.velocity[i];
  x.segment(dofs_.pressure_offset, dofs_.num_pressure) = sol.pressure;
  return x;
}

void Discretization::assemble(const Vector& state, Mode mode, Vector* vec, std::vector<Triplet>* trips) const {
  check(state);
  const Vector u = full_velocity(state);
  const double lambda = state[dofs_.multiplier];
  const Mesh& m = *mesh_;
  const bool conv = options_.convection && mode != Mode::viscous;
  const double p = law_.p;
  const int npe = cache_->points_per_element;

  if (vec) *vec = Vector::Zero(mode == Mode::viscous ? dofs_.num_free_velocity : dofs_.size);
  if (trips) {
    trips->clear();
    trips->reserve(static_cast<std::size_t>(m.num_triangles()) * 225 + 8 * m.num_vertices());
  }

  double K[12][12], Kp[12][3], ru[12], rp[3], mult[3];
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& nodes = layout_->element_nodes[t];
    const auto& tri = m.triangles[t];
    int vd[12], pd[3];
    Vec2 uc[6];
    for (int k = 0; k < 6; ++k) {
      uc[k] = Vec2(u[2 * nodes[k]], u[2 * nodes[k] + 1]);
      vd[2 * k] = dofs_.velocity[2 * nodes[k]];
      vd[2 * k + 1] = dofs_.velocity[2 * nodes[k] + 1];
    }
    double pc[3];
    for (int j = 0; j < 3; ++j) {
      pd[j] = dofs_.pressure_offset + tri[j];
      pc[j] = state[pd[j]];
    }
    std::fill(&K[0][0], &K[0][0] + 144, 0.0);
    std::fill(&Kp[0][0], &Kp[0][0] + 36, 0.0);
    std::fill(ru, ru + 12, 0.0);
    std::fill(rp, rp + 3, 0.0);
    std::fill(mult, mult + 3, 0.0);
    double rl = 0.0;

    for (int q = 0; q < npe; ++q) {
      const int idx = t * npe + q;
      const auto& P = cache_->points[idx];
      const double w = P.weight;
      Vec2 uq = Vec2::Zero();
      Mat2 Gu = Mat2::Zero();
      for (int k = 0; k < 6; ++k) {
        uq += P.N[k] * uc[k];
        Gu += uc[k] * P.dN[k].transpose();
      }
      const Vec2& a = lift_value_[idx];
      const Mat2& Ga = lift_grad_[idx];
      const Vec2 v = uq + a;
      const Mat2 G = Gu + Ga;
      const Mat2 D = strain_rate(G);
      const double* L = P.bary.data();
      const double Pq = L[0] * pc[0] + L[1] * pc[1] + L[2] * pc[2];

      if (mode == Mode::residual || mode == Mode::viscous) {
        const Mat2 S = stress(D, law_);
        const Vec2 Gv = G * v;
        for (int k = 0; k < 6; ++k) {
          const Vec2& g = P.dN[k];
          const double vg = v.dot(g);
          for (int c = 0; c < 2; ++c) {
            double r = S(c, 0) * g[0] + S(c, 1) * g[1];
            if (mode == Mode::residual) {
              if (conv) r += 0.5 * (Gv[c] * P.N[k] - vg * v[c]);
              r -= Pq * g[c];
            }
            ru[2 * k + c] += w * r;
          }
        }
        if (mode == Mode::residual) {
          const double divu = Gu.trace();
          for (int j = 0; j < 3; ++j) rp[j] += w * L[j] * (lambda - divu);
          rl += w * Pq;
        }
        continue;
      }

      const double n = D.norm();
      const double mu = law_.floor() + viscosity_power(n, p);
      double beta = 0.0;
      if (mode == Mode::jacobian && p > 2.0 && n > 0.0) beta = (p - 2.0) * std::pow(n, p - 2.0) / (n * n);
      Vec2 Dg[6];
      double vg[6];
      for (int k = 0; k < 6; ++k) {
        Dg[k] = D * P.dN[k];
        vg[k] = v.dot(P.dN[k]);
      }
      for (int k = 0; k < 6; ++k) {
        const Vec2& gk = P.dN[k];
        for (int c = 0; c < 2; ++c) {
          const int row = 2 * k + c;
          for (int mm = 0; mm < 6; ++mm) {
            const Vec2& gm = P.dN[mm];
            const double gmk = gm.dot(gk);
            for (int d = 0; d < 2; ++d) {
              double val = mu * 0.5 * ((c == d ? gmk : 0.0) + gm[c] * gk[d]);
              if (beta != 0.0) val += beta * Dg[mm][d] * Dg[k][c];
              if (conv) {
                double cv = (c == d ? vg[mm] * P.N[k] - vg[k] * P.N[mm] : 0.0);
                if (mode == Mode::jacobian) cv += P.N[mm] * G(c, d) * P.N[k] - P.N[mm] * gk[d] * v[c];
                val += 0.5 * cv;
              }
              K[row][2 * mm + d] += w * val;
            }
          }
          for (int j = 0; j < 3; ++j) Kp[row][j] -= w * L[j] * gk[c];
        }
      }
      for (int j = 0; j < 3; ++j) mult[j] += w * L[j];
      if (mode == Mode::picard) {
        const Mat2 Da = strain_rate(Ga);
        const Vec2 Gav = Ga * v;
        for (int k = 0; k < 6; ++k) {
          const Vec2& gk = P.dN[k];
          for (int c = 0; c < 2; ++c) {
            double r = -mu * (Da(c, 0) * gk[0] + Da(c, 1) * gk[1]);
            if (conv) r -= 0.5 * (Gav[c] * P.N[k] - vg[k] * a[c]);
            ru[2 * k + c] += w * r;
          }
        }
      }
    }

    if (vec) {
      for (int i = 0; i < 12; ++i)
        if (vd[i] >= 0) (*vec)[vd[i]] += ru[i];
      if (mode == Mode::residual) {
        for (int j = 0; j < 3; ++j) (*vec)[pd[j]] += rp[j];
        (*vec)[dofs_.multiplier] += rl;
      }
    }
    if (trips) {
      for (int i = 0; i < 12; ++i) {
        if (vd[i] < 0) continue;
        for (int j = 0; j < 12; ++j)
          if (vd[j] >= 0 && K[i][j] != 0.0) trips->emplace_back(vd[i], vd[j], K[i][j]);
        for (int j = 0; j < 3; ++j) {
          trips->emplace_back(vd[i], pd[j], Kp[i][j]);
          trips->emplace_back(pd[j], vd[i], Kp[i][j]);
        }
      }
      for (int j = 0; j < 3; ++j) {
        trips->emplace_back(pd[j], dofs_.multiplier, mult[j]);
        trips->emplace_back(dofs_.multiplier, pd[j], mult[j]);
      }
    }
  }
}

Vector Discretization::residual(const Vector& state) const {
  Vector r;
  assemble(state, Mode::residual, &r, nullptr);
  r -= load_;
  return r;
}

SparseMatrix Discretization::jacobian(const Vector& state) const {
  std::vector<Triplet> trips;
  assemble(state, Mode::jacobian, nullptr, &trips);
  SparseMatrix J(dofs_.size, dofs_.size);
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

void Discretization::picard_system(const Vector& state, SparseMatrix& K, Vector& rhs) const {
  std::vector<Triplet> trips;
  assemble(state, Mode::picard, &rhs, &trips);
  rhs += load_;
  K.resize(dofs_.size, dofs_.size);
  K.setFromTriplets(trips.begin(), trips.end());
}

Vector Discretization::viscous_action(const Vector& state) const {
  Vector r;
  assemble(state, Mode::viscous, &r, nullptr);
  return r;
}

double Discretization::divergence_residual(const Vector& state) const {
  Vector probe = state;
  probe.segment(dofs_.pressure_offset, dofs_.num_pressure).setZero();
  probe[dofs_.multiplier] = 0.0;
  Vector r;
  assemble(probe, Mode::residual, &r, nullptr);
  return r.segment(dofs_.pressure_offset, dofs_.num_pressure).cwiseAbs().maxCoeff();
}

}  // namespace thickflow
