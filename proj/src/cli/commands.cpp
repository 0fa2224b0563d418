#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "thickflow/cli.hpp"
#include "thickflow/diagnostics.hpp"
#include "thickflow/ineqlab.hpp"

namespace thickflow {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path prepare_output(const ExperimentConfig& cfg, const RunOptions& opts) {
  fs::path out = opts.out.empty() ? fs::path(cfg.output) : opts.out;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory '" + out.string() + "': " + ec.message());
  return out;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

void write_log(const fs::path& path, const std::vector<IterationRecord>& log) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (const auto& r : log) {
    json j{{"stage", r.stage}, {"iterate", r.iterate}, {"residual", r.residual}, {"damping", r.damping},
           {"method", r.method}};
    out << j.dump() << '\n';
  }
}

// Finite numbers only; anything else becomes null.
json finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json solver_json(const SolverConfig& s) {
  return {{"damping", s.damping},         {"abs_tolerance", s.abs_tolerance}, {"rel_tolerance", s.rel_tolerance},
          {"max_iterations", s.max_iterations}, {"newton_switch", s.newton_switch}, {"min_step", s.min_step},
          {"stall_ratio", s.stall_ratio}, {"convection", s.convection}};
}

// Constants for the comparison check fitted from the run: z <= c1 eta on the samples, Psi with unit
// coefficient, phi = 2 c1 eta + c3 with 2 c1 + c3 >= 2 Psi(2 c1), delta = 1/2.
json comparison_json(const DiagnosticsSeries& s, double p) {
  ZSeries z{s.t, s.z, s.zprime};
  double c1 = 0.0;
  for (std::size_t k = 0; k < z.eta.size(); ++k) c1 = std::max(c1, z.z[k] / z.eta[k]);
  PsiSpec psi = PsiSpec::energy(1.0, p);
  double c3 = std::max(0.0, 2.0 * psi(2.0 * c1) - 2.0 * c1);
  Affine phi{2.0 * c1, c3};
  ComparisonVerdict v = comparison_check(z, psi, 0.5, phi, 1e-12);
  return {{"verdict", to_string(v.verdict)}, {"detail", v.detail}, {"c1", c1}, {"c3", c3}, {"delta", 0.5},
          {"margin", finite(v.margin)}};
}

json diagnostics_json(const Solution& sol, const ExperimentConfig& cfg, const DiagnosticsSeries& series) {
  json d;
  const double T = sol.truncation;
  DirichletEnergy e = dirichlet_energy(sol, std::min(cfg.window, T));
  d["window"] = cfg.window;
  d["e2_window"] = e.e2;
  d["ep_window"] = e.ep;
  d["y_window"] = e.e2 / sol.law.T + e.ep;
  SandwichReport sw = check_sandwich(series);
  d["monotone"] = sw.monotone;
  d["sandwich"] = sw.sandwich;
  d["sandwich_margin"] = sw.worst_margin;
  double hi = std::min(cfg.fit_hi, T - 1.0);
  try {
    GrowthReport g = growth_rate(series, cfg.fit_lo, hi);
    d["growth"] = {{"c1", g.c1},
                   {"c2", g.c2},
                   {"relative_residual", g.relative_residual},
                   {"sup_ratio", g.sup_ratio},
                   {"sup_at", g.sup_at},
                   {"superlinear", g.superlinear},
                   {"t_lo", cfg.fit_lo},
                   {"t_hi", hi}};
  } catch (const TooFewSamples& ex) {
    d["growth"] = {{"error", ex.what()}};
  }
  if (T - 2.0 >= 2.0) {
    SliceReport sr = slice_report(sol, 2.0, T - 2.0);
    d["slices"] = {{"t", sr.t}, {"outlet1", sr.outlet1}, {"outlet2", sr.outlet2}};
    d["kappa"] = sr.kappa;
    d["slice_variation"] = sr.variation;
  }
  d["comparison"] = comparison_json(series, sol.law.p);
  if (T - 1.0 > 1.0) {
    ShearBoundReport sb = shear_bound_check(sol, 0.0, 0, 1, 1.0, T - 1.0);
    d["shear_bound"] = {{"derivative", "dv1/dx2"}, {"max_constant", sb.max_constant}};
  }
  return d;
}

void write_series(const fs::path& path, const DiagnosticsSeries& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  s.write_csv(out);
}

struct Solved {
  std::shared_ptr<Discretization> disc;
  std::optional<Solution> solution;
  std::vector<IterationRecord> log;
  json info;
  bool converged = false;
  std::string failure;
};

Solved solve_single(const ExperimentConfig& cfg, double flux, double p, double T, const OutletDomain& domain) {
  Solved s;
  SolverConfig sc = cfg.solver;
  sc.law = PowerLaw(p, T);
  sc.schedule.clear();
  auto carrier = build_carrier_2d(domain, flux);
  auto m = std::make_shared<Mesh>(mesh(truncate(domain, T), cfg.h));
  DiscretizationOptions o;
  o.convection = sc.convection;
  s.disc = std::make_shared<Discretization>(m, carrier, sc.law, o);
  try {
    SolveResult r = solve_truncated(*s.disc, sc);
    s.solution = s.disc->unpack(r.state);
    s.log = r.log;
    s.converged = true;
    s.info = {{"iterations", r.iterations}, {"residual", r.residual}, {"initial_residual", r.initial_residual}};
  } catch (const NonConvergence& e) {
    s.solution = s.disc->unpack(e.last().state);
    s.log = e.last().log;
    s.failure = e.what();
    s.info = {{"iterations", e.last().iterations}, {"residual", e.last().residual}, {"error", e.what()}};
  }
  s.info["dofs"] = s.disc->size();
  return s;
}

}  // namespace

int command_run(const ExperimentConfig& cfg, const RunOptions& opts) {
  fs::path out = prepare_output(cfg, opts);
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  json summary;
  summary["command"] = "run";
  summary["version"] = cfg.version;
  summary["domain"] = cfg.domain_spec;
  summary["law"] = {{"p", cfg.p}, {"T", cfg.T}};
  summary["mesh"] = {{"h", cfg.h}};
  summary["seed"] = seed;
  summary["solver"] = solver_json(cfg.solver);
  summary["linear_backend"] = SparseSolver::backend();

  std::optional<Solution> sol;
  std::shared_ptr<Discretization> disc;
  std::vector<IterationRecord> log;
  bool converged = true;
  std::string failure;

  if (cfg.manufactured) {
    ManufacturedCase mc = manufactured_poiseuille(cfg.p, cfg.T, cfg.h, cfg.solver.convection);
    disc = mc.disc;
    SolverConfig sc = cfg.solver;
    sc.law = PowerLaw(cfg.p, cfg.T);
    sc.schedule.clear();
    summary["flux"] = mc.profile.flux();
    try {
      SolveResult r = solve_truncated(*disc, sc);
      log = r.log;
      sol = disc->unpack(r.state);
      ManufacturedError me = manufactured_error(mc, r.state);
      summary["solve"] = {{"iterations", r.iterations}, {"residual", r.residual}, {"dofs", disc->size()}};
      summary["manufactured"] = {{"lp_error", me.lp_error},
                                 {"measured_flux", me.flux},
                                 {"reference_flux", mc.profile.flux()},
                                 {"flux_relative_error", std::abs(me.flux - mc.profile.flux()) / mc.profile.flux()}};
    } catch (const NonConvergence& e) {
      converged = false;
      failure = e.what();
      log = e.last().log;
      sol = disc->unpack(e.last().state);
    }
  } else if (!cfg.schedule.empty()) {
    summary["flux"] = cfg.flux;
    summary["schedule"] = cfg.schedule;
    ContinuationReport rep = continuation_run(*cfg.domain, cfg.flux, cfg.solver, cfg.window, cfg.h);
    log = rep.log;
    json stages = json::array();
    for (const auto& st : rep.stages)
      stages.push_back({{"T", st.T},
                        {"dofs", st.dofs},
                        {"iterations", st.iterations},
                        {"initial_residual", st.initial_residual},
                        {"final_residual", st.final_residual},
                        {"cold_residual", st.cold_residual},
                        {"residual_near_cut", st.residual_near_cut},
                        {"y_window", st.y_window}});
    bool decreasing = true;
    for (std::size_t k = 1; k < rep.cauchy.size(); ++k)
      if (!(rep.cauchy[k] <= rep.cauchy[k - 1])) decreasing = false;
    summary["continuation"] = {{"stages", stages},
                               {"cauchy", rep.cauchy},
                               {"cauchy_decreasing", decreasing},
                               {"window", rep.window}};
    if (rep.failure) {
      converged = false;
      failure = *rep.failure;
      summary["continuation"]["failure"] = *rep.failure;
    }
    if (rep.final_solution) sol = rep.final_solution;
  } else {
    summary["flux"] = cfg.flux;
    Solved s = solve_single(cfg, cfg.flux, cfg.p, cfg.T, *cfg.domain);
    disc = s.disc;
    sol = s.solution;
    log = s.log;
    converged = s.converged;
    failure = s.failure;
    summary["solve"] = s.info;
    if (cfg.uniqueness_guesses >= 2) {
      SolverConfig sc = cfg.solver;
      sc.law = PowerLaw(cfg.p, cfg.T);
      sc.schedule.clear();
      auto guesses = random_initial_guesses(*disc, cfg.uniqueness_guesses, cfg.uniqueness_amplitude, seed);
      try {
        UniquenessReport u = probe_uniqueness(*disc, sc, guesses);
        double worst = 0.0;
        for (Eigen::Index a = 0; a < u.distances.rows(); ++a)
          for (Eigen::Index b = 0; b < u.distances.cols(); ++b) worst = std::max(worst, u.distances(a, b));
        summary["uniqueness"] = {{"guesses", cfg.uniqueness_guesses},
                                 {"iterations", u.iterations},
                                 {"max_distance", worst},
                                 {"tolerance", u.tolerance},
                                 {"coincide", u.coincide}};
      } catch (const NonConvergence& e) {
        summary["uniqueness"] = {{"error", e.what()}};
      }
    }
  }

  write_log(out / "iterations.jsonl", log);
  summary["converged"] = converged;
  if (!failure.empty()) summary["failure"] = failure;
  if (sol) {
    summary["measured_flux"] = measured_flux(*sol, *cfg.domain, 0.0);
    const double tmax = sol->truncation - 1.0;
    if (tmax >= 1.0) {
      DiagnosticsSeries series = diagnostics_series(*sol, tmax);
      write_series(out / "diagnostics.csv", series);
      summary["diagnostics"] = diagnostics_json(*sol, cfg, series);
    }
    export_vtk(*sol, out / "solution.vtk");
  }
  write_json(out / "summary.json", summary);
  return converged ? 0 : 2;
}

int command_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (!cfg.sweep) throw ConfigError("sweep: missing grid");
  fs::path out = prepare_output(cfg, opts);
  const SweepGrid& g = *cfg.sweep;
  struct Point {
    double flux, p, T;
  };
  std::vector<Point> points;
  for (double a : g.flux)
    for (double p : g.p)
      for (double T : g.T) points.push_back({a, p, T});
  struct Row {
    std::string status = "ok";
    int iterations = 0;
    double residual = 0.0, y_window = 0.0, c1 = 0.0, c2 = 0.0, kappa = 0.0, variation = 0.0;
  };
  std::vector<Row> rows(points.size());
  parallel_for(static_cast<int>(points.size()), opts.threads, [&](int k) {
    const Point& pt = points[k];
    Row& row = rows[k];
    try {
      Solved s = solve_single(cfg, pt.flux, pt.p, pt.T, *cfg.domain);
      row.iterations = s.info.value("iterations", 0);
      row.residual = s.info.value("residual", 0.0);
      if (!s.converged) row.status = "nonconvergence";
      const Solution& sol = *s.solution;
      DirichletEnergy e = dirichlet_energy(sol, cfg.window);
      row.y_window = e.e2 / pt.T + e.ep;
      DiagnosticsSeries series = diagnostics_series(sol, pt.T - 1.0);
      GrowthReport gr = growth_rate(series, cfg.fit_lo, pt.T - 2.0);
      row.c1 = gr.c1;
      row.c2 = gr.c2;
      if (pt.T - 2.0 >= 2.0) {
        SliceReport sr = slice_report(sol, 2.0, pt.T - 2.0);
        row.kappa = sr.kappa;
        row.variation = sr.variation;
      }
    } catch (const std::exception& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      row.status = "failed: " + msg;
    }
  });
  {
    std::ofstream csv(out / "sweep.csv");
    if (!csv) throw IoError("cannot write sweep.csv");
    csv << "flux,p,T,status,iterations,residual,y_window,c1,c2,kappa,slice_variation\n";
    char buf[64];
    auto f = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.12e", std::isfinite(v) ? v : 0.0);
      return std::string(buf);
    };
    for (std::size_t k = 0; k < points.size(); ++k) {
      const Row& r = rows[k];
      csv << f(points[k].flux) << ',' << f(points[k].p) << ',' << f(points[k].T) << ',' << r.status << ','
          << r.iterations << ',' << f(r.residual) << ',' << f(r.y_window) << ',' << f(r.c1) << ',' << f(r.c2)
          << ',' << f(r.kappa) << ',' << f(r.variation) << '\n';
    }
  }
  json summary;
  summary["command"] = "sweep";
  summary["rows"] = points.size();
  json fits = json::array();
  for (double p : g.p)
    for (double T : g.T) {
      std::vector<double> alpha, kappa;
      for (std::size_t k = 0; k < points.size(); ++k)
        if (points[k].p == p && points[k].T == T && rows[k].status == "ok") {
          alpha.push_back(points[k].flux);
          kappa.push_back(rows[k].kappa);
        }
      if (alpha.size() < 2) continue;
      KappaFit kf = fit_kappa(alpha, kappa);
      fits.push_back({{"p", p}, {"T", T}, {"increasing", kf.increasing}, {"gamma", kf.gamma}, {"k0", kf.k0}});
    }
  summary["kappa_fits"] = fits;
  bool all_ok = true;
  for (const auto& r : rows)
    if (r.status != "ok") all_ok = false;
  summary["all_ok"] = all_ok;
  write_json(out / "summary.json", summary);
  for (const auto& r : rows)
    if (r.status == "nonconvergence") return 2;
  return 0;
}

int command_ineq(const ExperimentConfig& cfg, const RunOptions& opts) {
  fs::path out = prepare_output(cfg, opts);
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  const IneqSettings& s = cfg.ineq;
  json summary;
  summary["command"] = "ineq";
  json mono = json::array();
  for (double p : s.monotonicity_p) {
    MonotonicityReport r = monotonicity_ratio(p, s.samples, seed, opts.threads);
    mono.push_back({{"p", p},
                    {"samples", r.samples},
                    {"min_ratio", r.min_ratio},
                    {"max_ratio", r.max_ratio},
                    {"min_intermediate", r.min_intermediate},
                    {"floor", r.floor}});
  }
  summary["monotonicity"] = mono;
  std::vector<InequalityReport> reports;
  SearchOptions so;
  so.trials = s.trials;
  so.seed = seed;
  so.threads = opts.threads;
  auto bottom = [](const Vec2& x) { return x[1] < 1e-12; };
  for (double h : s.h) {
    auto m = std::make_shared<Mesh>(mesh_box(0.0, 1.0, 0.0, 1.0, h));
    for (double q : s.q) {
      reports.push_back(korn_constant(*m, q, so));
      reports.push_back(poincare_constant(*m, q, bottom, so));
      reports.push_back(bogovskii_constant(m, q, so));
    }
  }
  summary["constants"] = reports_to_json(reports);
  summary["poincare_oracle"] = poincare_oracle(mesh_box(0.0, 1.0, 0.0, 1.0, 1.0 / 12.0), bottom);
  write_json(out / "summary.json", summary);
  return 0;
}

int command_carrier_check(const ExperimentConfig& cfg, const RunOptions& opts) {
  fs::path out = prepare_output(cfg, opts);
  CertifyOptions co;
  if (!cfg.carrier.sections.empty()) co.sections = cfg.carrier.sections;
  co.points = cfg.carrier.points;
  co.windows = cfg.carrier.windows;
  co.p = cfg.p;
  co.seed = opts.seed.value_or(cfg.seed);
  CarrierCertificate c = certify_carrier(*cfg.domain, cfg.flux, co);
  json lemma = json::array();
  for (const auto& r : c.lemma)
    lemma.push_back({{"t", r.t}, {"c_i", r.c_i}, {"c_ii", r.c_ii}, {"c_iii", r.c_iii}});
  json summary{{"command", "carrier-check"},
               {"domain", cfg.domain_spec},
               {"flux", cfg.flux},
               {"sections", c.sections},
               {"flux_error", c.flux_error},
               {"max_flux_error", c.max_flux_error},
               {"max_divergence", c.max_divergence},
               {"divergence_points", c.divergence_points},
               {"homogeneity_error", c.homogeneity_error},
               {"lemma", lemma},
               {"c_ii_spread", c.c_ii_spread}};
  write_json(out / "summary.json", summary);
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Shear-thickening flow in outlet domains"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--out", out, "Output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  std::string config;
  std::string verb;
  for (const char* name : {"run", "sweep", "ineq", "carrier-check"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config, "Experiment config (JSON)")->required();
    sub->callback([&verb, name] { verb = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  RunOptions opts;
  opts.out = out;
  if (seed_opt->count()) opts.seed = seed;
  opts.threads = threads;
  try {
    ExperimentConfig cfg = load_config(config);
    if (verb == "run") return command_run(cfg, opts);
    if (verb == "sweep") return command_sweep(cfg, opts);
    if (verb == "ineq") return command_ineq(cfg, opts);
    return command_carrier_check(cfg, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace thickflow
