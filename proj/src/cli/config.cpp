#include <fstream>
#include <set>
#include <sstream>

#include "thickflow/cli.hpp"
#include "thickflow/geometry_json.hpp"

namespace thickflow {

using nlohmann::json;

namespace {

void allow_only(const json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items())
    if (!keys.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double number(const json& obj, const std::string& key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw ConfigError(path_of(where, key) + " must be a number");
  return obj.at(key).get<double>();
}

long long integer(const json& obj, const std::string& key, const std::string& where, long long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) throw ConfigError(path_of(where, key) + " must be an integer");
  return obj.at(key).get<long long>();
}

bool boolean(const json& obj, const std::string& key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(path_of(where, key) + " must be a boolean");
  return obj.at(key).get<bool>();
}

std::vector<double> numbers(const json& obj, const std::string& key, const std::string& where,
                            std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& a = obj.at(key);
  if (!a.is_array()) throw ConfigError(path_of(where, key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError(path_of(where, key) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

bool increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] > v[k - 1])) return false;
  return true;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  allow_only(j, {"version", "domain", "law", "schedule", "flux", "mesh", "window", "fit", "benchmark", "uniqueness",
                 "solver", "output", "seed", "sweep", "ineq", "carrier_check"},
             "config");
  ExperimentConfig c;
  if (!j.contains("version")) throw ConfigError("version: missing required field");
  c.version = static_cast<int>(integer(j, "version", "", 0));

  c.domain_spec = j.contains("domain") ? j.at("domain")
                                       : json{{"profile", {{"kind", "constant"}, {"value", 0.5}}},
                                              {"l1", 1.0},
                                              {"l2", 1.0}};
  try {
    c.domain = domain_from_json(c.domain_spec);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }

  if (j.contains("law")) {
    const json& law = j.at("law");
    allow_only(law, {"p", "T"}, "law");
    c.p = number(law, "p", "law", c.p);
    c.T = number(law, "T", "law", c.T);
  }
  c.schedule = numbers(j, "schedule", "", {});
  c.flux = number(j, "flux", "", 0.0);
  if (j.contains("mesh")) {
    allow_only(j.at("mesh"), {"h"}, "mesh");
    c.h = number(j.at("mesh"), "h", "mesh", c.h);
  }
  c.window = number(j, "window", "", c.window);
  const double T_top = c.schedule.empty() ? c.T : c.schedule.back();
  c.fit_hi = T_top - 2.0;
  if (j.contains("fit")) {
    allow_only(j.at("fit"), {"t_lo", "t_hi"}, "fit");
    c.fit_lo = number(j.at("fit"), "t_lo", "fit", c.fit_lo);
    c.fit_hi = number(j.at("fit"), "t_hi", "fit", c.fit_hi);
  }
  if (j.contains("benchmark")) {
    if (!j.at("benchmark").is_string()) throw ConfigError("benchmark must be a string");
    std::string b = j.at("benchmark").get<std::string>();
    if (b == "manufactured")
      c.manufactured = true;
    else if (b != "none")
      throw ConfigError("benchmark: unknown value '" + b + "' (expected 'none' or 'manufactured')");
  }
  if (j.contains("uniqueness")) {
    allow_only(j.at("uniqueness"), {"guesses", "amplitude"}, "uniqueness");
    c.uniqueness_guesses = static_cast<int>(integer(j.at("uniqueness"), "guesses", "uniqueness", 3));
    c.uniqueness_amplitude = number(j.at("uniqueness"), "amplitude", "uniqueness", c.uniqueness_amplitude);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    allow_only(s, {"damping", "abs_tolerance", "rel_tolerance", "max_iterations", "newton_switch", "min_step",
                   "stall_ratio", "convection"},
               "solver");
    c.solver.damping = number(s, "damping", "solver", c.solver.damping);
    c.solver.abs_tolerance = number(s, "abs_tolerance", "solver", c.solver.abs_tolerance);
    c.solver.rel_tolerance = number(s, "rel_tolerance", "solver", c.solver.rel_tolerance);
    c.solver.max_iterations = static_cast<int>(integer(s, "max_iterations", "solver", c.solver.max_iterations));
    c.solver.newton_switch = number(s, "newton_switch", "solver", c.solver.newton_switch);
    c.solver.min_step = number(s, "min_step", "solver", c.solver.min_step);
    c.solver.stall_ratio = number(s, "stall_ratio", "solver", c.solver.stall_ratio);
    c.solver.convection = boolean(s, "convection", "solver", c.solver.convection);
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output must be a string");
    c.output = j.at("output").get<std::string>();
  }
  long long seed = integer(j, "seed", "", 0);
  if (seed < 0) throw ConfigError("seed must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    allow_only(s, {"flux", "p", "T"}, "sweep");
    SweepGrid g;
    g.flux = numbers(s, "flux", "sweep", {c.flux});
    g.p = numbers(s, "p", "sweep", {c.p});
    g.T = numbers(s, "T", "sweep", {c.T});
    c.sweep = g;
  }
  if (j.contains("ineq")) {
    const json& s = j.at("ineq");
    allow_only(s, {"monotonicity_p", "samples", "q", "h", "trials"}, "ineq");
    c.ineq.monotonicity_p = numbers(s, "monotonicity_p", "ineq", c.ineq.monotonicity_p);
    c.ineq.samples = static_cast<int>(integer(s, "samples", "ineq", c.ineq.samples));
    c.ineq.q = numbers(s, "q", "ineq", c.ineq.q);
    c.ineq.h = numbers(s, "h", "ineq", c.ineq.h);
    c.ineq.trials = static_cast<int>(integer(s, "trials", "ineq", c.ineq.trials));
  }
  if (j.contains("carrier_check")) {
    const json& s = j.at("carrier_check");
    allow_only(s, {"sections", "points", "windows"}, "carrier_check");
    c.carrier.sections = numbers(s, "sections", "carrier_check", {});
    c.carrier.points = static_cast<int>(integer(s, "points", "carrier_check", c.carrier.points));
    c.carrier.windows = numbers(s, "windows", "carrier_check", c.carrier.windows);
  }
  c.solver.law = PowerLaw(c.p >= 2.0 ? c.p : 2.0, c.T > 0.0 ? c.T : 1.0);
  c.solver.schedule = c.schedule;
  c.validate();
  c.solver.law = PowerLaw(c.p, c.schedule.empty() ? c.T : c.schedule.front());
  return c;
}

void ExperimentConfig::validate() const {
  if (version != 1) throw ConfigError("version: unsupported value " + std::to_string(version) + " (expected 1)");
  if (!(p >= 2.0) || !std::isfinite(p)) throw ConfigError("law.p must be a finite number >= 2");
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("law.T must be positive");
  if (!(window > 0.0)) throw ConfigError("window must be positive");
  if (!std::isfinite(flux)) throw ConfigError("flux must be finite");
  const double l1 = domain ? domain->l1() : 1.0;
  if (!(h > 0.0) || !(h < 0.25 * l1)) throw ConfigError("mesh.h must lie in (0, l1/4)");
  if (schedule.empty()) {
    if (T < window + 1.0) throw ConfigError("law.T must satisfy T >= window + 1");
  } else {
    if (!increasing(schedule)) throw ConfigError("schedule must be strictly increasing");
    if (schedule.front() < window + 1.0) throw ConfigError("schedule entries must satisfy T >= window + 1");
  }
  if (!(fit_hi > fit_lo)) throw ConfigError("fit.t_hi must exceed fit.t_lo");
  if (uniqueness_guesses != 0 && uniqueness_guesses < 2) throw ConfigError("uniqueness.guesses must be at least 2");
  if (!(uniqueness_amplitude > 0.0)) throw ConfigError("uniqueness.amplitude must be positive");
  if (manufactured && flux != 0.0) throw ConfigError("flux is fixed by the manufactured benchmark; omit it");
  try {
    solver.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  if (sweep) {
    if (sweep->flux.empty()) throw ConfigError("sweep.flux must not be empty");
    if (sweep->p.empty()) throw ConfigError("sweep.p must not be empty");
    if (sweep->T.empty()) throw ConfigError("sweep.T must not be empty");
    for (double v : sweep->p)
      if (!(v >= 2.0)) throw ConfigError("sweep.p entries must be >= 2");
    for (double v : sweep->T)
      if (!(v >= window + 1.0)) throw ConfigError("sweep.T entries must satisfy T >= window + 1");
  }
  if (ineq.samples < 10000) throw ConfigError("ineq.samples must be at least 10000");
  if (ineq.trials < 20) throw ConfigError("ineq.trials must be at least 20");
  for (double v : ineq.monotonicity_p)
    if (!(v >= 2.0)) throw ConfigError("ineq.monotonicity_p entries must be >= 2");
  for (double v : ineq.q)
    if (!(v > 1.0)) throw ConfigError("ineq.q entries must exceed 1");
  for (double v : ineq.h)
    if (!(v > 0.0 && v <= 0.25)) throw ConfigError("ineq.h entries must lie in (0, 1/4]");
  if (carrier.points < 1) throw ConfigError("carrier_check.points must be positive");
  for (double v : carrier.windows)
    if (!(v > 0.0)) throw ConfigError("carrier_check.windows entries must be positive");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace thickflow
