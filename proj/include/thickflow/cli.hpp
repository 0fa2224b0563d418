#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "thickflow/solver.hpp"

namespace thickflow {

THICKFLOW_ERROR(ConfigError);
THICKFLOW_ERROR(IoError);

struct SweepGrid {
  std::vector<double> flux;
  std::vector<double> p;
  std::vector<double> T;
};

struct IneqSettings {
  std::vector<double> monotonicity_p{2.0, 4.0};
  int samples = 100000;
  std::vector<double> q{2.0, 3.0};
  std::vector<double> h{0.25, 0.125};
  int trials = 20;
};

struct CarrierCheckSettings {
  std::vector<double> sections;
  int points = 10000;
  std::vector<double> windows{4.0, 8.0, 16.0};
};

struct ExperimentConfig {
  int version = 1;
  nlohmann::json domain_spec;
  std::optional<OutletDomain> domain;
  double p = 2.0;
  double T = 8.0;                // truncation half-length and floor parameter
  std::vector<double> schedule;  // continuation T_k; empty for a single solve
  double flux = 0.0;
  double h = 0.1;
  double window = 4.0;           // diagnostic window t
  double fit_lo = 2.0;
  double fit_hi = 0.0;           // defaults to T - 2
  bool manufactured = false;
  int uniqueness_guesses = 0;
  double uniqueness_amplitude = 1e-2;
  SolverConfig solver;
  std::string output = "out";
  std::uint64_t seed = 0;
  std::optional<SweepGrid> sweep;
  IneqSettings ineq;
  CarrierCheckSettings carrier;

  // Fails fast with a ConfigError naming the offending field.
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

// Exit codes: 0 success, 1 configuration or runtime error, 2 solver non-convergence.
int command_run(const ExperimentConfig& cfg, const RunOptions& opts);
int command_sweep(const ExperimentConfig& cfg, const RunOptions& opts);
int command_ineq(const ExperimentConfig& cfg, const RunOptions& opts);
int command_carrier_check(const ExperimentConfig& cfg, const RunOptions& opts);

int run_cli(int argc, char** argv);

// VTK legacy ASCII with point vectors "velocity" (v = u + a), scalars "pressure" and "strain_norm".
void export_vtk(const Solution& sol, const std::filesystem::path& path);

struct VtkData {
  std::vector<Vec2> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> cell_types;
  std::vector<Vec2> velocity;
  std::vector<double> pressure;
  std::vector<double> strain_norm;
};

VtkData read_vtk(const std::filesystem::path& path);

}  // namespace thickflow
