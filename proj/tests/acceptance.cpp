#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thickflow/cli.hpp"
#include "thickflow/diagnostics.hpp"
#include "thickflow/ineqlab.hpp"

using namespace thickflow;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

OutletDomain wavy_channel() {
  Curve up = Curve::sine(0.75, 0.2);
  return OutletDomain::build(up, up.negated(), 1.0, 2.0);
}

SolverConfig solver_config(double p, double T) {
  SolverConfig c;
  c.law = PowerLaw(p, T);
  return c;
}

struct ChannelRun {
  std::shared_ptr<Discretization> disc;
  SolveResult result;
  Solution solution;
  double seconds = 0.0;
};

ChannelRun solve_channel(double flux, double p, double T, double h) {
  auto t0 = Clock::now();
  OutletDomain d = OutletDomain::straight();
  auto m = std::make_shared<Mesh>(mesh(truncate(d, T), h));
  auto disc = std::make_shared<Discretization>(m, build_carrier_2d(d, flux), PowerLaw(p, T));
  SolveResult r = solve_truncated(*disc, solver_config(p, T));
  Solution s = disc->unpack(r.state);
  return {disc, r, s, seconds_since(t0)};
}

Outcome carrier_criterion() {
  Outcome o;
  auto t0 = Clock::now();
  double flux_err = 0.0, div = 0.0, homog = 0.0, spread = 0.0;
  int sections = 0, points = 0;
  for (const OutletDomain& d : {OutletDomain::straight(), wavy_channel()}) {
    CarrierCertificate c = certify_carrier(d, 1.0);
    flux_err = std::max(flux_err, c.max_flux_error);
    div = std::max(div, c.max_divergence);
    homog = std::max(homog, c.homogeneity_error);
    spread = std::max(spread, c.c_ii_spread);
    sections = static_cast<int>(c.sections.size());
    points = c.divergence_points;
  }
  double secs = seconds_since(t0);
  o.require(sections >= 10 && flux_err <= 1e-9, "flux error " + fmt("%.2e", flux_err) + " on " +
                                                     std::to_string(sections) + " sections per channel");
  o.require(points >= 10000 && div <= 1e-6,
            "scaled divergence " + fmt("%.2e", div) + " at " + std::to_string(points) + " points");
  o.require(homog <= 1e-12, "homogeneity " + fmt("%.2e", homog));
  o.require(spread <= 0.10, "C_ii spread " + fmt("%.3f", spread));
  o.require(secs <= 10.0, "runtime " + fmt("%.1f", secs) + " s");
  return o;
}

Outcome manufactured_criterion() {
  Outcome o;
  const double exact = std::sqrt(2.0) / 10.0;
  std::vector<double> errors;
  double flux = 0.0, secs = 0.0;
  int dofs = 0;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    auto t0 = Clock::now();
    ManufacturedCase mc = manufactured_poiseuille(3.0, 2.0, h);
    SolveResult r = solve_truncated(*mc.disc, solver_config(3.0, 2.0));
    ManufacturedError e = manufactured_error(mc, r.state);
    secs = seconds_since(t0);
    errors.push_back(e.lp_error);
    flux = e.flux;
    dofs = mc.disc->size();
  }
  std::string rates;
  bool first_order = true;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    double rate = std::log2(errors[k - 1] / errors[k]);
    if (!(rate >= 1.0)) first_order = false;
    rates += (k > 1 ? "," : "") + fmt("%.2f", rate);
  }
  o.require(first_order, "L^p rates " + rates);
  double rel = std::abs(flux - exact) / exact;
  o.require(rel <= 0.01, "flux " + fmt("%.7f", flux) + " (rel " + fmt("%.1e", rel) + ")");
  o.require(secs <= 120.0, "finest " + std::to_string(dofs) + " dofs in " + fmt("%.1f", secs) + " s");
  return o;
}

struct LongRuns {
  std::vector<double> alpha{0.0, 0.05, 0.1, 0.2};
  std::vector<ChannelRun> runs;
  std::vector<SliceReport> slices;
  DiagnosticsSeries series;  // alpha = 0.1
  double diag_seconds = 0.0;
};

LongRuns long_runs() {
  LongRuns L;
  for (double a : L.alpha) {
    L.runs.push_back(solve_channel(a, 3.0, 24.0, 0.1));
    L.slices.push_back(slice_report(L.runs.back().solution, 2.0, 22.0));
    if (a == 0.1) {
      auto t0 = Clock::now();
      L.series = diagnostics_series(L.runs.back().solution, 23.0);
      L.diag_seconds = seconds_since(t0);
    }
  }
  return L;
}

Outcome growth_criterion(const LongRuns& L) {
  Outcome o;
  SandwichReport sw = check_sandwich(L.series);
  GrowthReport g = growth_rate(L.series, 2.0, 22.0);
  double secs = L.runs[2].seconds + L.diag_seconds;
  o.require(sw.monotone, "y monotone");
  o.require(sw.sandwich, "sandwich margin " + fmt("%.2e", sw.worst_margin));
  o.require(g.relative_residual <= 0.10, "fit y = " + fmt("%.4g", g.c1) + " t + " + fmt("%.4g", g.c2) +
                                             ", residual " + fmt("%.2e", g.relative_residual));
  o.require(secs <= 300.0, "runtime " + fmt("%.1f", secs) + " s");
  return o;
}

Outcome slice_criterion(const LongRuns& L) {
  Outcome o;
  const SliceReport& s = L.slices[2];
  o.require(s.variation <= 0.15, "slice variation " + fmt("%.2e", s.variation));
  bool increasing = L.slices[1].kappa < L.slices[2].kappa && L.slices[2].kappa < L.slices[3].kappa;
  o.require(increasing, "kappa " + fmt("%.4g", L.slices[1].kappa) + " < " + fmt("%.4g", L.slices[2].kappa) +
                            " < " + fmt("%.4g", L.slices[3].kappa));
  o.require(L.slices[0].kappa == 0.0, "kappa(0) = " + fmt("%g", L.slices[0].kappa));
  return o;
}

Outcome continuation_criterion() {
  Outcome o;
  SolverConfig c = solver_config(3.0, 6.0);
  c.schedule = {6.0, 10.0, 16.0, 24.0};
  ContinuationReport rep = continuation_run(OutletDomain::straight(), 0.1, c, 4.0, 0.1);
  o.require(!rep.failure && rep.cauchy.size() == 3, "stages completed");
  if (rep.cauchy.size() != 3) return o;
  bool decreasing = rep.cauchy[1] < rep.cauchy[0] && rep.cauchy[2] < rep.cauchy[1];
  std::string list = fmt("%.3e", rep.cauchy[0]) + "," + fmt("%.3e", rep.cauchy[1]) + "," + fmt("%.3e", rep.cauchy[2]);
  o.require(decreasing, "delta decreasing [" + list + "]");
  double ratio = rep.cauchy[2] / rep.cauchy[0];
  o.require(ratio <= 0.1, "final/first " + fmt("%.3f", ratio));
  return o;
}

// Independent dense check of the comparison hypotheses for z(t) = k1 t + k0 + A (e^{lam (t - T)} - e^{-lam T}).
struct Candidate {
  double k1, k0, A, lam;
  double z(double t, double T) const { return k1 * t + k0 + A * (std::exp(lam * (t - T)) - std::exp(-lam * T)); }
  double dz(double t, double T) const { return k1 + A * lam * std::exp(lam * (t - T)); }
};

Outcome comparison_criterion() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int accepted = 0, holds = 0, tried = 0;
  while (accepted < 100 && tried < 1000000) {
    ++tried;
    PsiSpec psi;
    int terms = 1 + static_cast<int>(3 * u(rng));
    for (int k = 0; k < terms; ++k) {
      psi.coefficients.push_back(0.2 + 2.0 * u(rng));
      psi.exponents.push_back(0.3 + 2.7 * u(rng));
    }
    double delta = 0.1 + 0.8 * u(rng);
    double t0 = 1.0, T = t0 + 2.0 + 18.0 * u(rng);
    double a = 0.1 + 3.0 * u(rng);
    double b = psi(a) / delta - a * t0 + 2.0 * u(rng);
    Affine phi{a, b};
    Candidate c{a * u(rng), b * (2.0 * u(rng) - 1.0), 2.0 * u(rng), 0.2 + 3.0 * u(rng)};
    bool ok = c.z(T, T) <= phi(T);
    for (int k = 0; k <= 4000 && ok; ++k) {
      double t = t0 + (T - t0) * k / 4000.0;
      double zt = c.z(t, T);
      ok = zt >= 0.0 && c.dz(t, T) >= 0.0 && zt <= psi(c.dz(t, T)) + (1.0 - delta) * phi(t) &&
           phi(t) >= psi(phi.slope) / delta;
    }
    if (!ok) continue;
    ++accepted;
    ZSeries z;
    for (int k = 0; k <= 200; ++k) {
      double t = t0 + (T - t0) * k / 200.0;
      z.eta.push_back(t);
      z.z.push_back(c.z(t, T));
      z.zprime.push_back(c.dz(t, T));
    }
    if (comparison_check(z, psi, delta, phi).verdict == Verdict::holds) ++holds;
  }
  o.require(accepted == 100 && holds == 100,
            std::to_string(holds) + "/" + std::to_string(accepted) + " random admissible cases hold");

  ZSeries q, e;
  double exact_residual = 0.0;
  PsiSpec square = PsiSpec::power(1.0, 2.0);
  for (int k = 0; k <= 76; ++k) {
    double t = 1.0 + 0.25 * k;
    q.eta.push_back(t);
    q.z.push_back(t * t / 4.0);
    q.zprime.push_back(t / 2.0);
    exact_residual = std::max(exact_residual, std::abs(q.z.back() - square(q.zprime.back())));
    e.eta.push_back(t);
    e.z.push_back(std::exp(t));
    e.zprime.push_back(std::exp(t));
  }
  o.require(exact_residual == 0.0, "t^2/4 against tau^2 residual " + fmt("%g", exact_residual));
  double rq = blowup_rate(q, square, BlowupBound::power(2.0)).rate;
  double re = blowup_rate(e, PsiSpec::power(1.0, 1.0), BlowupBound::linear(1.0)).rate;
  o.require(std::abs(rq - 0.25) <= 1e-12, "power rate " + fmt("%.15f", rq));
  o.require(std::abs(re - 1.0) <= 1e-12, "linear rate " + fmt("%.15f", re));
  return o;
}

Outcome inequality_criterion() {
  Outcome o;
  MonotonicityReport m2 = monotonicity_ratio(2.0, 100000, 1);
  o.require(std::abs(m2.min_ratio - 1.0) <= 1e-12 && std::abs(m2.max_ratio - 1.0) <= 1e-12,
            "p=2 ratio in [" + fmt("%.15f", m2.min_ratio) + ", " + fmt("%.15f", m2.max_ratio) + "]");
  MonotonicityReport m4 = monotonicity_ratio(4.0, 100000, 1);
  o.require(m4.min_ratio >= 0.9 * m4.floor, "p=4 min " + fmt("%.4f", m4.min_ratio) + " vs floor " +
                                                fmt("%.4f", m4.floor));
  auto bottom = [](const Vec2& x) { return x[1] < 1e-12; };
  double korn = 0.0;
  for (double h : {0.25, 0.125}) korn = std::max(korn, korn_constant(mesh_box(0.0, 1.0, 0.0, 1.0, h), 2.0).constant);
  o.require(korn <= std::sqrt(2.0) + 1e-2, "Korn q=2 " + fmt("%.6f", korn));
  double poincare = poincare_constant(mesh_box(0.0, 1.0, 0.0, 1.0, 0.125), 2.0, bottom).constant;
  double oracle = poincare_oracle(mesh_box(0.0, 1.0, 0.0, 1.0, 1.0 / 12.0), bottom);
  double rel = std::abs(poincare - oracle) / oracle;
  o.require(rel <= 0.05, "Poincare q=2 " + fmt("%.6f", poincare) + " vs oracle " + fmt("%.6f", oracle));
  for (double q : {2.0, 3.0}) {
    double a = bogovskii_constant(std::make_shared<const Mesh>(mesh_box(0.0, 1.0, 0.0, 1.0, 0.25)), q).constant;
    double b = bogovskii_constant(std::make_shared<const Mesh>(mesh_box(0.0, 1.0, 0.0, 1.0, 0.125)), q).constant;
    o.require(std::abs(b - a) <= 0.15 * a,
              "Bogovskii q=" + fmt("%g", q) + " " + fmt("%.4f", a) + " -> " + fmt("%.4f", b));
  }
  return o;
}

bool all_zero(const std::vector<double>& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

Outcome rest_criterion() {
  Outcome o;
  for (double p : {2.0, 3.0, 4.0}) {
    ChannelRun r = solve_channel(0.0, p, 6.0, 0.2);
    DiagnosticsSeries s = diagnostics_series(r.solution, 5.0);
    DirichletEnergy e = dirichlet_energy(r.solution, 4.0);
    SliceReport sl = slice_report(r.solution, 2.0, 4.0);
    bool zero = all_zero(s.y2) && all_zero(s.yp) && all_zero(s.z) && all_zero(s.zprime) && all_zero(s.slice1) &&
                all_zero(s.slice2) && e.e2 == 0.0 && e.ep == 0.0 && sl.kappa == 0.0 &&
                measured_flux(r.solution, OutletDomain::straight(), 0.0) == 0.0;
    o.require(r.result.iterations == 1 && r.result.state.norm() == 0.0 && zero,
              "p=" + fmt("%g", p) + ": " + std::to_string(r.result.iterations) + " iteration, |u| = " +
                  fmt("%g", r.result.state.norm()) + (zero ? ", diagnostics zero" : ", nonzero diagnostics"));
  }
  return o;
}

Outcome uniqueness_criterion() {
  Outcome o;
  OutletDomain d = OutletDomain::straight();
  auto m = std::make_shared<Mesh>(mesh(truncate(d, 6.0), 0.2));
  Discretization disc(m, build_carrier_2d(d, 0.05), PowerLaw(3.0, 6.0));
  auto guesses = random_initial_guesses(disc, 3, 0.05, 17);
  UniquenessReport u = probe_uniqueness(disc, solver_config(3.0, 6.0), guesses);
  double worst = u.distances.maxCoeff();
  o.require(worst <= 10.0 * u.tolerance,
            "max pairwise distance " + fmt("%.2e", worst) + " vs 10 x tol " + fmt("%.2e", 10.0 * u.tolerance));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism_criterion(const std::string& cli) {
  Outcome o;
  fs::path root = fs::temp_directory_path() / "thickflow_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  nlohmann::json run = {{"version", 1},
                        {"law", {{"p", 3.0}, {"T", 8.0}}},
                        {"flux", 0.1},
                        {"mesh", {{"h", 0.2}}},
                        {"uniqueness", {{"guesses", 3}, {"amplitude", 0.01}}},
                        {"seed", 5}};
  nlohmann::json sweep = {{"version", 1},
                          {"law", {{"p", 3.0}, {"T", 6.0}}},
                          {"mesh", {{"h", 0.2}}},
                          {"sweep", {{"flux", {0.05, 0.1, 0.2}}, {"T", {6.0, 7.0}}}}};
  nlohmann::json ineq = {{"version", 1},
                         {"ineq", {{"samples", 10000}, {"h", {0.25}}, {"q", {2.0, 3.0}}}},
                         {"seed", 3}};
  nlohmann::json carrier = {{"version", 1}, {"flux", 1.0}, {"carrier_check", {{"points", 2000}}}};
  struct Job {
    std::string verb;
    nlohmann::json config;
    std::vector<std::string> files;
    std::string flags;
  };
  std::vector<Job> jobs{{"run", run, {"summary.json", "diagnostics.csv", "iterations.jsonl", "solution.vtk"}, ""},
                        {"sweep", sweep, {"summary.json", "sweep.csv"}, " --threads 2"},
                        {"ineq", ineq, {"summary.json"}, " --threads 2"},
                        {"carrier-check", carrier, {"summary.json"}, ""}};
  int compared = 0;
  for (const Job& j : jobs) {
    fs::path cfg = root / (j.verb + ".json");
    std::ofstream(cfg) << j.config.dump(2);
    for (int rep = 0; rep < 2; ++rep) {
      std::string cmd = cli + " " + j.verb + " " + cfg.string() + " --out " +
                        (root / (j.verb + std::to_string(rep))).string() + j.flags + " > /dev/null 2>&1";
      int status = std::system(cmd.c_str());
      o.require(status == 0, j.verb + " exit " + std::to_string(status));
      if (status != 0) return o;
    }
    for (const std::string& f : j.files) {
      std::string a = slurp(root / (j.verb + "0") / f), b = slurp(root / (j.verb + "1") / f);
      if (a.empty() || a != b) o.require(false, j.verb + "/" + f + " differs");
      ++compared;
    }
  }
  o.require(true, std::to_string(compared) + " artifacts byte-identical");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  std::string cli = argc > 1 ? argv[1] : "thickflow";
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& f) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
                seconds_since(t0));
  };
  report(1, "carrier", carrier_criterion);
  report(2, "manufactured p=3", manufactured_criterion);
  LongRuns L;
  std::string long_error;
  try {
    L = long_runs();
  } catch (const std::exception& e) {
    long_error = e.what();
  }
  auto guarded = [&](const std::function<Outcome(const LongRuns&)>& f) {
    return [&, f] {
      if (!long_error.empty()) throw std::runtime_error(long_error);
      return f(L);
    };
  };
  report(3, "growth T=24", guarded(growth_criterion));
  report(4, "slices", guarded(slice_criterion));
  report(5, "continuation", continuation_criterion);
  report(6, "comparison verifier", comparison_criterion);
  report(7, "inequality lab", inequality_criterion);
  report(8, "zero flux", rest_criterion);
  report(9, "uniqueness", uniqueness_criterion);
  report(10, "determinism", [&] { return determinism_criterion(cli); });
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
