#include <cmath>

#include "thickflow/solver.hpp"

namespace thickflow {

WindowEnergy window_energy(const Mesh& m, const P2Layout& layout, const Vector& velocity, double p, double t) {
  QuadratureCache cache(m);
  WindowEnergy e;
  for (int tr = 0; tr < m.num_triangles(); ++tr) {
    const auto& nodes = layout.element_nodes[tr];
    for (int q = 0; q < cache.points_per_element; ++q) {
      const auto& P = cache.at(tr, q);
      if (!(std::abs(P.x[0]) < t)) continue;
      Mat2 G = Mat2::Zero();
      for (int k = 0; k < 6; ++k) G += Vec2(velocity[2 * nodes[k]], velocity[2 * nodes[k] + 1]) * P.dN[k].transpose();
      double n2 = G.squaredNorm();
      e.e2 += P.weight * n2;
      e.ep += P.weight * std::pow(n2, 0.5 * p);
    }
  }
  return e;
}

namespace {

double share_near(const Discretization& disc, const Vector& r, double cut, double radius) {
  const auto& layout = *disc.layout();
  const auto& dofs = disc.dofs();
  double near = 0.0;
  for (int i = 0; i < 2 * layout.num_nodes; ++i) {
    int d = dofs.velocity[i];
    if (d < 0) continue;
    if (std::abs(std::abs(layout.node_coords[i / 2][0]) - cut) <= radius) near += r[d] * r[d];
  }
  for (int v = 0; v < dofs.num_pressure; ++v) {
    double x1 = disc.mesh().vertices[v][0];
    double val = r[dofs.pressure_offset + v];
    if (std::abs(std::abs(x1) - cut) <= radius) near += val * val;
  }
  double total = r.squaredNorm();
  return total > 0.0 ? std::sqrt(near / total) : 0.0;
}

}  // namespace

ContinuationReport continuation_run(const OutletDomain& domain, double flux, const SolverConfig& cfg, double t,
                                    double h) {
  cfg.validate();
  if (cfg.schedule.empty()) throw InvalidSolverConfig("continuation schedule is empty");
  if (!(t > 0.0)) throw InvalidSolverConfig("diagnostic window must be positive");
  for (double T : cfg.schedule)
    if (T < t + 1.0) throw InvalidSolverConfig("every stage needs T >= t + 1");

  ContinuationReport rep;
  rep.window = t;
  auto carrier = build_carrier_2d(domain, flux);
  std::shared_ptr<Discretization> prev;
  Vector prev_state;
  for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
    const double T = cfg.schedule[k];
    StageSummary st;
    st.T = T;
    try {
      auto m = std::make_shared<Mesh>(mesh(truncate(domain, T), h));
      DiscretizationOptions opts;
      opts.convection = cfg.convection;
      auto disc = std::make_shared<Discretization>(m, carrier, PowerLaw(cfg.law.p, T), opts);
      st.dofs = disc->size();
      Vector x0 = Vector::Zero(disc->size());
      st.cold_residual = disc->residual(x0).norm();
      if (prev) {
        Solution s = prev->unpack(prev_state);
        Solution ext = disc->unpack(x0);
        ext.velocity = transfer_velocity(prev->mesh(), *prev->layout(), s.velocity, *disc->layout());
        ext.pressure = transfer_pressure(prev->mesh(), s.pressure, *m);
        x0 = disc->pack(ext);
        Vector r = disc->residual(x0);
        st.residual_near_cut = share_near(*disc, r, cfg.schedule[k - 1], 2.0);
      }
      SolveResult res = solve_truncated(*disc, cfg, x0, static_cast<int>(k));
      st.initial_residual = res.initial_residual;
      st.final_residual = res.residual;
      st.iterations = res.iterations;
      rep.log.insert(rep.log.end(), res.log.begin(), res.log.end());
      Vector u = disc->full_velocity(res.state);
      WindowEnergy e = window_energy(*m, *disc->layout(), u, cfg.law.p, t);
      st.e2_window = e.e2;
      st.ep_window = e.ep;
      st.y_window = e.e2 / T + e.ep;
      if (prev) {
        Vector old = transfer_velocity(prev->mesh(), *prev->layout(), prev->full_velocity(prev_state), *disc->layout());
        WindowEnergy d = window_energy(*m, *disc->layout(), u - old, cfg.law.p, t);
        rep.cauchy.push_back(std::pow(d.ep, 1.0 / cfg.law.p));
      }
      rep.stages.push_back(st);
      prev = disc;
      prev_state = res.state;
    } catch (const NonConvergence& e) {
      rep.log.insert(rep.log.end(), e.last().log.begin(), e.last().log.end());
      rep.failure = "stage " + std::to_string(k) + ": " + e.what();
      rep.stages.push_back(st);
      return rep;
    } catch (const Error& e) {
      rep.failure = "stage " + std::to_string(k) + ": " + e.what();
      rep.stages.push_back(st);
      return rep;
    }
  }
  rep.final_solution = prev->unpack(prev_state);
  return rep;
}

}  // namespace thickflow
