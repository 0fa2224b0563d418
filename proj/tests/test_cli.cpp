#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "thickflow/cli.hpp"

using namespace thickflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("thickflow_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
  fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  static std::string prog = "thickflow";
  argv.push_back(prog.data());
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json minimal() { return {{"version", 1}, {"law", {{"p", 3.0}, {"T", 6.0}}}, {"mesh", {{"h", 0.2}}}}; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config validation names the field") {
  json j = minimal();
  j["domain"] = {{"profile", {{"kind", "constant"}, {"value", 0.75}}}, {"l1", 2.0}, {"l2", 1.0}};
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("l1") != std::string::npos);
  }
  json k = minimal();
  k["colour"] = "blue";
  CHECK_THROWS_WITH_AS(parse_config(k), doctest::Contains("colour"), ConfigError);
  json v = minimal();
  v["version"] = 2;
  CHECK_THROWS_WITH_AS(parse_config(v), doctest::Contains("version"), ConfigError);
  json m = minimal();
  m["mesh"]["h"] = -1.0;
  CHECK_THROWS_WITH_AS(parse_config(m), doctest::Contains("mesh.h"), ConfigError);
}

TEST_CASE("bad config exits with status 1") {
  fs::path dir = scratch("bad");
  json j = minimal();
  j["domain"] = {{"profile", {{"kind", "constant"}, {"value", 0.75}}}, {"l1", 2.0}, {"l2", 1.0}};
  CHECK(cli({"run", write_config(dir, j).string(), "--out", (dir / "out").string()}) == 1);
  CHECK(cli({"run", (dir / "missing.json").string()}) == 1);
}

TEST_CASE("zero-flux run writes zero diagnostics") {
  fs::path dir = scratch("rest");
  fs::path out = dir / "out";
  CHECK(cli({"run", write_config(dir, minimal()).string(), "--out", out.string()}) == 0);
  for (const char* f : {"summary.json", "diagnostics.csv", "solution.vtk", "iterations.jsonl"})
    CHECK(fs::exists(out / f));
  std::ifstream csv(out / "diagnostics.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,y2,yp,z,zprime,slice1,slice2");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    while (std::getline(ss, cell, ',')) CHECK(std::stod(cell) == 0.0);
  }
  CHECK(rows > 0);
  VtkData v = read_vtk(out / "solution.vtk");
  CHECK(v.velocity.size() == v.points.size());
  for (const auto& u : v.velocity) CHECK(u.norm() == 0.0);
  json s = json::parse(slurp(out / "summary.json"));
  CHECK(s.at("converged") == true);
}

TEST_CASE("vtk round trip") {
  OutletDomain d = OutletDomain::straight();
  auto m = std::make_shared<Mesh>(mesh(truncate(d, 2.0), 0.2));
  Discretization disc(m, build_carrier_2d(d, 0.3), PowerLaw(3.0, 2.0));
  Vector state = Vector::Zero(disc.size());
  for (int k = 0; k < disc.dofs().num_free_velocity; ++k) state[k] = 1e-3 * std::sin(0.7 * k);
  Solution sol = disc.unpack(state);
  fs::path p = scratch("vtk") / "s.vtk";
  export_vtk(sol, p);
  VtkData v = read_vtk(p);
  const P2Layout& L = *sol.layout;
  REQUIRE(static_cast<int>(v.points.size()) == L.num_nodes);
  CHECK(v.cells.size() == static_cast<std::size_t>(m->num_triangles()));
  for (int c : v.cell_types) CHECK(c == 22);
  Vector full = disc.full_velocity(state);
  double worst = 0.0, peak = 0.0, peak_x2 = 1.0;
  for (int n = 0; n < L.num_nodes; ++n) {
    worst = std::max(worst, (v.points[n] - L.node_coords[n]).norm());
    Vec2 x = L.node_coords[n];
    Vec2 expect = Vec2(full[2 * n], full[2 * n + 1]) + sol.lifting->value(x);
    worst = std::max(worst, (v.velocity[n] - expect).norm());
    if (std::abs(x[0]) < 1e-12 && v.velocity[n][0] > peak) {
      peak = v.velocity[n][0];
      peak_x2 = x[1];
    }
  }
  CHECK(worst <= 1e-12);
  CHECK(std::abs(peak_x2) <= 0.25);
  CHECK_THROWS_AS(export_vtk(sol, "/nonexistent/dir/s.vtk"), IoError);
}

TEST_CASE("sweep writes one row per grid point in order") {
  fs::path dir = scratch("sweep");
  json j = {{"version", 1}, {"law", {{"p", 3.0}, {"T", 4.0}}}, {"mesh", {{"h", 0.2}}}, {"window", 2.0},
            {"fit", {{"t_lo", 1.0}, {"t_hi", 2.0}}},
            {"sweep", {{"flux", {0.0, 0.05, 0.1}}, {"T", {5.0, 6.0}}}}};
  fs::path out = dir / "out";
  CHECK(cli({"sweep", write_config(dir, j).string(), "--out", out.string(), "--threads", "2"}) == 0);
  std::ifstream csv(out / "sweep.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("flux,p,T,status", 0) == 0);
  std::vector<std::string> rows;
  while (std::getline(csv, line)) rows.push_back(line);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].rfind("0.000000000000e+00,3.000000000000e+00,5.000000000000e+00,ok", 0) == 0);
  CHECK(rows[5].rfind("1.000000000000e-01,3.000000000000e+00,6.000000000000e+00,ok", 0) == 0);
}

}
