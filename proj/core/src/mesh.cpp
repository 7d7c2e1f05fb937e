#include "speclab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace speclab {

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Vec2& a = vertices[tri[0]];
  const Vec2& b = vertices[tri[1]];
  const Vec2& c = vertices[tri[2]];
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

Vec2 Mesh::triangle_point(int t, const std::array<double, 3>& bary) const {
  const auto& tri = triangles[t];
  return bary[0] * vertices[tri[0]] + bary[1] * vertices[tri[1]] +
         bary[2] * vertices[tri[2]];
}

Vec2 Mesh::interior_sample() const {
  // Area-weighted centroid of the triangulation.
  Vec2 c = Vec2::Zero();
  double total = 0;
  for (int t = 0; t < triangle_count(); ++t) {
    const double a = triangle_area(t);
    c += a * triangle_point(t, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    total += a;
  }
  return c / total;
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct EdgeInfo {
  int count = 0;
  int tri = -1;
  int a = -1, b = -1;  // orientation in the first owning triangle
};

std::map<EdgeKey, EdgeInfo> edge_adjacency(const Mesh& mesh) {
  std::map<EdgeKey, EdgeInfo> edges;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      auto& info = edges[key(a, b)];
      if (info.count == 0) {
        info.tri = t;
        info.a = a;
        info.b = b;
      }
      ++info.count;
    }
  }
  return edges;
}

Vec2 outward_normal(const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  return Vec2(e.y(), -e.x()).normalized();  // right of a CCW-oriented edge
}

}  // namespace

void rebuild_boundary(Mesh& mesh) {
  mesh.boundary_edges.clear();
  mesh.vertex_markers.assign(mesh.vertices.size(), VertexMarker::Interior);
  for (const auto& [k, info] : edge_adjacency(mesh)) {
    if (info.count > 2) {
      throw MeshError("non-conforming connectivity: edge (" + std::to_string(k.first) +
                      "," + std::to_string(k.second) + ") has " +
                      std::to_string(info.count) + " incident triangles");
    }
    if (info.count == 1) {
      BoundaryEdge e;
      e.a = info.a;
      e.b = info.b;
      e.normal = outward_normal(mesh.vertices[e.a], mesh.vertices[e.b]);
      mesh.boundary_edges.push_back(e);
      mesh.vertex_markers[e.a] = VertexMarker::Boundary;
      mesh.vertex_markers[e.b] = VertexMarker::Boundary;
    }
  }
}

MeshQuality check_mesh(const Mesh& mesh) {
  MeshQuality q;
  q.min_area = std::numeric_limits<double>::infinity();
  q.min_angle_deg = 180.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    q.min_area = std::min(q.min_area, mesh.triangle_area(t));
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const Vec2 u = mesh.vertices[tri[(k + 1) % 3]] - mesh.vertices[tri[k]];
      const Vec2 v = mesh.vertices[tri[(k + 2) % 3]] - mesh.vertices[tri[k]];
      const double ang = std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
      q.min_angle_deg = std::min(q.min_angle_deg, ang * 180.0 / M_PI);
    }
  }

  const auto edges = edge_adjacency(mesh);
  q.conforming = true;
  int boundary_count = 0;
  for (const auto& [k, info] : edges) {
    (void)k;
    if (info.count > 2) q.conforming = false;
    if (info.count == 1) ++boundary_count;
  }
  q.conforming = q.conforming &&
                 boundary_count == static_cast<int>(mesh.boundary_edges.size());

  // Every boundary vertex must have exactly two incident boundary edges.
  std::map<int, int> degree;
  for (const auto& e : mesh.boundary_edges) {
    ++degree[e.a];
    ++degree[e.b];
  }
  q.boundary_closed = !degree.empty();
  for (const auto& [v, d] : degree) {
    (void)v;
    if (d != 2) q.boundary_closed = false;
  }

  // Outwardness relative to the owning triangle's opposite vertex.
  q.normals_outward = true;
  for (const auto& e : mesh.boundary_edges) {
    const auto it = edges.find(key(e.a, e.b));
    if (it == edges.end() || it->second.count != 1) {
      q.normals_outward = false;
      continue;
    }
    const auto& tri = mesh.triangles[it->second.tri];
    int opp = -1;
    for (int v : tri) {
      if (v != e.a && v != e.b) opp = v;
    }
    const Vec2 mid = 0.5 * (mesh.vertices[e.a] + mesh.vertices[e.b]);
    if (e.normal.dot(mid - mesh.vertices[opp]) <= 0) q.normals_outward = false;
  }

  q.euler_characteristic = mesh.vertex_count() - static_cast<int>(edges.size()) +
                           mesh.triangle_count();
  return q;
}

Mesh mesh_rectangle(double width, double height, int nx, int ny) {
  if (width <= 0 || height <= 0) throw ConfigError("mesh_rectangle: non-positive dimensions");
  if (nx < 1 || ny < 1) throw ConfigError("mesh_rectangle: nx, ny must be >= 1");
  Mesh m;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.vertices.emplace_back(width * i / nx, height * j / ny);
    }
  }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }
  }
  rebuild_boundary(m);
  // Side tags 0..3 (bottom, right, top, left) for curve projection.
  for (auto& e : m.boundary_edges) {
    if (e.normal.y() < -0.5) e.curve_tag = 0;
    else if (e.normal.x() > 0.5) e.curve_tag = 1;
    else if (e.normal.y() > 0.5) e.curve_tag = 2;
    else e.curve_tag = 3;
  }
  return m;
}

namespace {

Mesh fan_mesh(const Vec2& center, const std::vector<Vec2>& ring) {
  Mesh m;
  m.vertices.push_back(center);
  m.vertices.insert(m.vertices.end(), ring.begin(), ring.end());
  const int n = static_cast<int>(ring.size());
  for (int i = 0; i < n; ++i) {
    m.triangles.push_back({0, 1 + i, 1 + (i + 1) % n});
  }
  rebuild_boundary(m);
  for (auto& e : m.boundary_edges) e.curve_tag = 0;
  return m;
}

// Ear clipping for simple polygons (used for non-convex presets). Points on
// an ear's boundary block it, so chords never pass through other vertices.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& poly) {
  std::vector<int> idx(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) idx[i] = static_cast<int>(i);
  double scale2 = 0;
  for (const auto& v : poly) scale2 = std::max(scale2, v.squaredNorm());
  const double eps = 1e-12 * std::max(scale2, 1.0);
  std::vector<std::array<int, 3>> tris;
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  while (idx.size() > 3) {
    bool clipped = false;
    const int n = static_cast<int>(idx.size());
    for (int i = 0; i < n; ++i) {
      const int ia = idx[(i + n - 1) % n], ib = idx[i], ic = idx[(i + 1) % n];
      if (cross(poly[ia], poly[ib], poly[ic]) <= eps) continue;  // reflex or flat
      bool ear = true;
      for (int j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        const bool outside = cross(poly[ia], poly[ib], poly[j]) < -eps ||
                             cross(poly[ib], poly[ic], poly[j]) < -eps ||
                             cross(poly[ic], poly[ia], poly[j]) < -eps;
        if (!outside) {
          ear = false;
          break;
        }
      }
      if (ear) {
        tris.push_back({ia, ib, ic});
        idx.erase(idx.begin() + i);
        clipped = true;
        break;
      }
    }
    if (!clipped) throw MeshError("ear clipping failed: polygon not simple?");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

void tag_polygon_boundary(Mesh& m, const std::vector<Vec2>& poly) {
  const int n = static_cast<int>(poly.size());
  for (auto& e : m.boundary_edges) {
    const Vec2 mid = 0.5 * (m.vertices[e.a] + m.vertices[e.b]);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const Vec2& a = poly[i];
      const Vec2& b = poly[(i + 1) % n];
      const Vec2 ab = b - a;
      const double t = std::clamp((mid - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      const double dist = (mid - (a + t * ab)).norm();
      if (dist < best) {
        best = dist;
        e.curve_tag = i;
      }
    }
  }
}

Mesh refine_impl(const Mesh& mesh, const BoundaryShape* shape) {
  Mesh out;
  out.vertices = mesh.vertices;
  out.vertex_markers = mesh.vertex_markers;
  out.vertex_markers.resize(mesh.vertices.size(), VertexMarker::Interior);

  std::map<EdgeKey, int> boundary_edge_of;
  for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
    const auto& e = mesh.boundary_edges[i];
    boundary_edge_of[key(e.a, e.b)] = static_cast<int>(i);
  }

  std::map<EdgeKey, int> midpoint;
  auto mid_of = [&](int a, int b) {
    const EdgeKey k = key(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    const auto be = boundary_edge_of.find(k);
    const bool on_boundary = be != boundary_edge_of.end();
    if (on_boundary && shape != nullptr &&
        mesh.boundary_edges[be->second].curve_tag >= 0) {
      p = shape->project(p);
    }
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    out.vertex_markers.push_back(on_boundary ? VertexMarker::Boundary
                                             : VertexMarker::Interior);
    midpoint[k] = id;
    return id;
  };

  for (const auto& tri : mesh.triangles) {
    const int i = tri[0], j = tri[1], k = tri[2];
    const int mij = mid_of(i, j), mjk = mid_of(j, k), mki = mid_of(k, i);
    out.triangles.push_back({i, mij, mki});
    out.triangles.push_back({mij, j, mjk});
    out.triangles.push_back({mki, mjk, k});
    out.triangles.push_back({mij, mjk, mki});
  }

  for (const auto& e : mesh.boundary_edges) {
    const int m = midpoint.at(key(e.a, e.b));
    for (const auto& [a, b] : {std::pair{e.a, m}, std::pair{m, e.b}}) {
      BoundaryEdge child;
      child.a = a;
      child.b = b;
      child.curve_tag = e.curve_tag;
      child.normal = outward_normal(out.vertices[a], out.vertices[b]);
      out.boundary_edges.push_back(child);
    }
  }
  return out;
}

}  // namespace

Mesh mesh_disk(double radius, int level, const Vec2& center) {
  if (radius <= 0) throw ConfigError("mesh_disk: radius must be positive");
  if (level < 0) throw ConfigError("mesh_disk: refinement level must be >= 0");
  std::vector<Vec2> ring;
  for (int i = 0; i < 6; ++i) {
    const double th = M_PI * i / 3.0;
    ring.push_back(center + radius * Vec2(std::cos(th), std::sin(th)));
  }
  Mesh m = fan_mesh(center, ring);
  const BoundaryShape circle = BoundaryShape::circle(center, radius);
  for (int l = 0; l < level; ++l) m = refine_impl(m, &circle);
  return m;
}

Mesh initial_mesh(const Domain& domain) {
  const auto& b = domain.boundary;
  switch (b.kind) {
    case BoundaryShape::Kind::Circle:
      return mesh_disk(b.radius, 0, b.center);
    case BoundaryShape::Kind::Ellipse: {
      std::vector<Vec2> ring;
      for (int i = 0; i < 6; ++i) {
        const double th = M_PI * i / 3.0;
        ring.push_back(b.center + Vec2(b.semi_a * std::cos(th), b.semi_b * std::sin(th)));
      }
      return fan_mesh(b.center, ring);
    }
    case BoundaryShape::Kind::Polygon: {
      // Fan from the base point when it sees every vertex; ear clip otherwise.
      const auto& poly = b.vertices;
      bool fan_ok = true;
      const int n = static_cast<int>(poly.size());
      for (int i = 0; i < n && fan_ok; ++i) {
        const Vec2& u = poly[i];
        const Vec2& v = poly[(i + 1) % n];
        const double cr = (u - domain.base_point).x() * (v - domain.base_point).y() -
                          (u - domain.base_point).y() * (v - domain.base_point).x();
        if (cr <= 1e-12) fan_ok = false;
      }
      Mesh m;
      if (fan_ok) {
        m = fan_mesh(domain.base_point, poly);
      } else {
        m.vertices = poly;
        m.triangles = ear_clip(poly);
        rebuild_boundary(m);
      }
      tag_polygon_boundary(m, poly);
      return m;
    }
  }
  throw MeshError("unreachable");
}

Mesh refine(const Mesh& mesh, const Domain& domain) {
  return refine_impl(mesh, &domain.boundary);
}

Mesh refine(const Mesh& mesh) { return refine_impl(mesh, nullptr); }

}  // namespace speclab
