#include <fstream>
#include <sstream>

#include "thickflow/cli.hpp"

namespace thickflow {

namespace {

template <class T>
T next(std::istream& in, const std::string& what) {
  T v;
  if (!(in >> v)) throw IoError("VTK: unexpected end of data while reading " + what);
  return v;
}

void expect(std::istream& in, const std::string& word) {
  std::string w = next<std::string>(in, word);
  if (w != word) throw IoError("VTK: expected '" + word + "', found '" + w + "'");
}

}  // namespace

VtkData read_vtk(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile", 0) != 0) throw IoError("VTK: missing header");
  std::getline(in, line);
  std::getline(in, line);
  if (line != "ASCII") throw IoError("VTK: only ASCII files are supported");
  expect(in, "DATASET");
  expect(in, "UNSTRUCTURED_GRID");
  VtkData d;
  std::size_t npoints = 0;
  std::string key;
  while (in >> key) {
    if (key == "POINTS") {
      npoints = next<std::size_t>(in, "point count");
      next<std::string>(in, "point type");
      d.points.resize(npoints);
      for (auto& p : d.points) {
        p[0] = next<double>(in, "point");
        p[1] = next<double>(in, "point");
        next<double>(in, "point");
      }
    } else if (key == "CELLS") {
      std::size_t n = next<std::size_t>(in, "cell count");
      next<std::size_t>(in, "cell list size");
      d.cells.resize(n);
      for (auto& c : d.cells) {
        int k = next<int>(in, "cell size");
        c.resize(k);
        for (int& v : c) v = next<int>(in, "cell index");
      }
    } else if (key == "CELL_TYPES") {
      std::size_t n = next<std::size_t>(in, "cell type count");
      d.cell_types.resize(n);
      for (int& t : d.cell_types) t = next<int>(in, "cell type");
    } else if (key == "POINT_DATA") {
      next<std::size_t>(in, "point data count");
    } else if (key == "VECTORS") {
      std::string name = next<std::string>(in, "vector name");
      next<std::string>(in, "vector type");
      std::vector<Vec2> vals(npoints);
      for (auto& v : vals) {
        v[0] = next<double>(in, name);
        v[1] = next<double>(in, name);
        next<double>(in, name);
      }
      if (name == "velocity") d.velocity = std::move(vals);
    } else if (key == "SCALARS") {
      std::string name = next<std::string>(in, "scalar name");
      next<std::string>(in, "scalar type");
      std::string tok = next<std::string>(in, "scalar components");
      if (tok == "LOOKUP_TABLE") {
        next<std::string>(in, "lookup table");
      } else {
        expect(in, "LOOKUP_TABLE");
        next<std::string>(in, "lookup table");
      }
      std::vector<double> vals(npoints);
      for (double& v : vals) v = next<double>(in, name);
      if (name == "pressure") d.pressure = std::move(vals);
      else if (name == "strain_norm") d.strain_norm = std::move(vals);
    } else {
      throw IoError("VTK: unsupported section '" + key + "'");
    }
  }
  return d;
}

}  // namespace thickflow
