#include "thickflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace thickflow {

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Vec2 a = vertices[tri[1]] - vertices[tri[0]];
  const Vec2 b = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (a[0] * b[1] - a[1] * b[0]);
}

double Mesh::area() const {
  double s = 0.0;
  for (int t = 0; t < num_triangles(); ++t) s += signed_area(t);
  return s;
}

Vec2 Mesh::edge_midpoint(int e) const { return 0.5 * (vertices[edges[e][0]] + vertices[edges[e][1]]); }

std::vector<char> Mesh::boundary_edge_mask(std::optional<BoundaryTag> tag) const {
  std::vector<char> mask(edges.size(), 0);
  for (const auto& b : boundary)
    if (!tag || b.tag == *tag) mask[b.edge] = 1;
  return mask;
}

std::vector<char> Mesh::boundary_vertex_mask(std::optional<BoundaryTag> tag) const {
  std::vector<char> mask(vertices.size(), 0);
  for (const auto& b : boundary)
    if (!tag || b.tag == *tag) {
      mask[edges[b.edge][0]] = 1;
      mask[edges[b.edge][1]] = 1;
    }
  return mask;
}

Mesh assemble_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                   const std::function<BoundaryTag(int, int)>& classify, double h) {
  Mesh m;
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);
  m.h = h;
  const long long nv = m.num_vertices();
  std::unordered_map<long long, int> index;
  index.reserve(m.triangles.size() * 2);
  std::vector<int> count;
  m.triangle_edges.resize(m.triangles.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = m.triangles[t][k], b = m.triangles[t][(k + 1) % 3];
      if (a < 0 || b < 0 || a >= nv || b >= nv || a == b) throw MeshFailure("triangle with invalid vertex index");
      int lo = std::min(a, b), hi = std::max(a, b);
      long long key = lo * nv + hi;
      auto [it, inserted] = index.emplace(key, static_cast<int>(m.edges.size()));
      if (inserted) {
        m.edges.push_back({lo, hi});
        count.push_back(0);
      }
      ++count[it->second];
      m.triangle_edges[t][k] = it->second;
    }
  }
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    if (count[e] > 2) throw MeshFailure("non-manifold edge");
    if (count[e] == 1) m.boundary.push_back({static_cast<int>(e), classify(m.edges[e][0], m.edges[e][1])});
  }
  validate_mesh(m);
  return m;
}

void validate_mesh(const Mesh& m) {
  for (int t = 0; t < m.num_triangles(); ++t)
    if (!(m.signed_area(t) > 0.0)) throw MeshFailure("inverted or degenerate triangle");
  std::vector<int> tagged(m.edges.size(), 0);
  for (const auto& b : m.boundary) ++tagged[b.edge];
  for (int v : tagged)
    if (v > 1) throw MeshFailure("boundary edge tagged twice");
}

Mesh mesh_strip(double x_lo, double x_hi, const Curve& lower, const Curve& upper, double h) {
  if (!(h > 0.0)) throw MeshFailure("mesh size must be positive");
  if (!(x_hi > x_lo)) throw MeshFailure("empty strip");
  auto even_count = [](double len, double h) {
    int n = static_cast<int>(std::ceil(len / h - 1e-9));
    n = std::max(n, 2);
    return n + (n % 2);
  };
  double wmax = 0.0;
  {
    const int n = std::max(2, static_cast<int>(std::ceil((x_hi - x_lo) / 0.01)) + 1);
    for (int k = 0; k < n; ++k) {
      double x = x_lo + (x_hi - x_lo) * k / (n - 1);
      double w = upper(x) - lower(x);
      if (!(w > 0.0)) throw MeshFailure("walls cross");
      wmax = std::max(wmax, w);
    }
  }
  const int nx = even_count(x_hi - x_lo, h);
  const int ny = even_count(wmax, h);

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int i = 0; i <= nx; ++i) {
    double x1 = x_lo * (static_cast<double>(nx - i) / nx) + x_hi * (static_cast<double>(i) / nx);
    double lo = lower(x1), hi = upper(x1);
    for (int j = 0; j <= ny; ++j) {
      double x2 = j == ny ? hi : lo + (hi - lo) * (static_cast<double>(j) / ny);
      vertices.emplace_back(x1, x2);
    }
  }
  auto id = [ny](int i, int j) { return i * (ny + 1) + j; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
      }
    }
  auto classify = [ny, nx](int v0, int v1) {
    int i0 = v0 / (ny + 1), i1 = v1 / (ny + 1);
    if (i0 == i1 && (i0 == 0 || i0 == nx)) return BoundaryTag::cut;
    return BoundaryTag::wall;
  };
  return assemble_mesh(std::move(vertices), std::move(tris), classify, h);
}

Mesh mesh(const TruncatedDomain& region, double h) {
  const OutletDomain& d = region.domain();
  if (!(h > 0.0) || !(h < 0.25 * d.l1())) throw MeshFailure("mesh size must satisfy 0 < h < l1/4");
  return mesh_strip(-region.t(), region.t(), d.lower(), d.upper(), h);
}

Mesh mesh_box(double x_lo, double x_hi, double y_lo, double y_hi, double h) {
  if (!(y_hi > y_lo)) throw MeshFailure("empty box");
  Mesh m = mesh_strip(x_lo, x_hi, Curve::constant(y_lo), Curve::constant(y_hi), h);
  for (auto& b : m.boundary) b.tag = BoundaryTag::wall;
  return m;
}

std::array<double, 3> barycentric(const Mesh& m, int t, const Vec2& x) {
  const auto& tri = m.triangles[t];
  const Vec2& p0 = m.vertices[tri[0]];
  const Vec2 e1 = m.vertices[tri[1]] - p0, e2 = m.vertices[tri[2]] - p0, r = x - p0;
  double det = e1[0] * e2[1] - e1[1] * e2[0];
  double l1 = (r[0] * e2[1] - r[1] * e2[0]) / det;
  double l2 = (e1[0] * r[1] - e1[1] * r[0]) / det;
  return {1.0 - l1 - l2, l1, l2};
}

MeshLocator::MeshLocator(const Mesh& m) : mesh_(&m) {
  double xmin = m.vertices[0][0], xmax = xmin, ymin = m.vertices[0][1], ymax = ymin;
  for (const auto& v : m.vertices) {
    xmin = std::min(xmin, v[0]);
    xmax = std::max(xmax, v[0]);
    ymin = std::min(ymin, v[1]);
    ymax = std::max(ymax, v[1]);
  }
  cell_ = std::max({m.h, (xmax - xmin) / 2000.0, (ymax - ymin) / 2000.0, 1e-12});
  x0_ = xmin - cell_;
  y0_ = ymin - cell_;
  nx_ = static_cast<int>(std::ceil((xmax - x0_) / cell_)) + 2;
  ny_ = static_cast<int>(std::ceil((ymax - y0_) / cell_)) + 2;
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (int t = 0; t < m.num_triangles(); ++t) {
    double bx0 = 1e300, bx1 = -1e300, by0 = 1e300, by1 = -1e300;
    for (int v : m.triangles[t]) {
      bx0 = std::min(bx0, m.vertices[v][0]);
      bx1 = std::max(bx1, m.vertices[v][0]);
      by0 = std::min(by0, m.vertices[v][1]);
      by1 = std::max(by1, m.vertices[v][1]);
    }
    int i0 = static_cast<int>((bx0 - x0_) / cell_), i1 = static_cast<int>((bx1 - x0_) / cell_);
    int j0 = static_cast<int>((by0 - y0_) / cell_), j1 = static_cast<int>((by1 - y0_) / cell_);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(i) * ny_ + j].push_back(t);
  }
}

std::optional<MeshLocator::Hit> MeshLocator::locate(const Vec2& x, double tolerance) const {
  int i = static_cast<int>(std::floor((x[0] - x0_) / cell_));
  int j = static_cast<int>(std::floor((x[1] - y0_) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return std::nullopt;
  std::optional<Hit> best;
  double best_min = -1e300;
  for (int t : buckets_[static_cast<std::size_t>(i) * ny_ + j]) {
    auto b = barycentric(*mesh_, t, x);
    double mn = std::min({b[0], b[1], b[2]});
    if (mn >= -tolerance && mn > best_min) {
      best_min = mn;
      best = Hit{t, b};
    }
  }
  return best;
}

}  // namespace thickflow
