#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "thickflow/geometry.hpp"

namespace thickflow {

THICKFLOW_ERROR(MeshFailure);

enum class BoundaryTag : unsigned char { wall, cut };

struct BoundaryEdge {
  int edge;
  BoundaryTag tag;
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;       // counter-clockwise
  std::vector<std::array<int, 2>> edges;           // sorted vertex pairs
  std::vector<std::array<int, 3>> triangle_edges;  // local edge k joins local vertices k, k+1
  std::vector<BoundaryEdge> boundary;
  double h = 0.0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double signed_area(int triangle) const;
  double area() const;
  Vec2 edge_midpoint(int edge) const;
  // Vertices lying on a boundary edge with the given tag (or any tag).
  std::vector<char> boundary_vertex_mask(std::optional<BoundaryTag> tag = {}) const;
  std::vector<char> boundary_edge_mask(std::optional<BoundaryTag> tag = {}) const;
};

// Builds edge tables and boundary tags; the classifier maps a boundary edge midpoint to a tag.
Mesh assemble_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                   const std::function<BoundaryTag(int v0, int v1)>& classify, double h);

// Mapped structured grid of {x_lo < x1 < x_hi, lower < x2 < upper} with the union-jack split.
// The x1 = x_lo, x_hi ends are tagged as cuts; top and bottom as walls.
Mesh mesh_strip(double x_lo, double x_hi, const Curve& lower, const Curve& upper, double h);

Mesh mesh(const TruncatedDomain& region, double h);

// Axis-aligned rectangle, all boundary edges tagged as walls.
Mesh mesh_box(double x_lo, double x_hi, double y_lo, double y_hi, double h);

// Checks conformity, tagging and orientation; throws MeshFailure.
void validate_mesh(const Mesh& m);

class MeshLocator {
 public:
  struct Hit {
    int triangle;
    std::array<double, 3> bary;
  };

  explicit MeshLocator(const Mesh& m);
  std::optional<Hit> locate(const Vec2& x, double tolerance = 1e-10) const;

 private:
  const Mesh* mesh_;
  double x0_, y0_, cell_;
  int nx_, ny_;
  std::vector<std::vector<int>> buckets_;
};

std::array<double, 3> barycentric(const Mesh& m, int triangle, const Vec2& x);

}  // namespace thickflow
