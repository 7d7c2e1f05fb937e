#include "speclab/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "speclab/mesh.hpp"
#include "speclab/quadrature.hpp"

namespace speclab {

BoundaryShape BoundaryShape::polygon(std::vector<Vec2> verts) {
  if (verts.size() < 3) throw ConfigError("polygon needs at least 3 vertices");
  BoundaryShape s;
  s.kind = Kind::Polygon;
  s.vertices = std::move(verts);
  return s;
}

BoundaryShape BoundaryShape::circle(const Vec2& center, double radius) {
  if (radius <= 0) throw ConfigError("circle radius must be positive");
  BoundaryShape s;
  s.kind = Kind::Circle;
  s.center = center;
  s.radius = radius;
  return s;
}

BoundaryShape BoundaryShape::ellipse(const Vec2& center, double a, double b) {
  if (a <= 0 || b <= 0) throw ConfigError("ellipse semi-axes must be positive");
  BoundaryShape s;
  s.kind = Kind::Ellipse;
  s.center = center;
  s.semi_a = a;
  s.semi_b = b;
  return s;
}

Vec2 BoundaryShape::project(const Vec2& x) const {
  switch (kind) {
    case Kind::Polygon:
      return x;  // refinement midpoints already lie on the segment
    case Kind::Circle: {
      const Vec2 u = x - center;
      const double n = u.norm();
      if (n == 0) throw MeshError("circle projection: point at center");
      return center + (radius / n) * u;
    }
    case Kind::Ellipse: {
      // Nearest point via Newton on the parameter; radial initial guess.
      const Vec2 m = x - center;
      double th = std::atan2(m.y() / semi_b, m.x() / semi_a);
      for (int it = 0; it < 50; ++it) {
        const Vec2 e(semi_a * std::cos(th), semi_b * std::sin(th));
        const Vec2 de(-semi_a * std::sin(th), semi_b * std::cos(th));
        const Vec2 d2e(-semi_a * std::cos(th), -semi_b * std::sin(th));
        const double f = -(m - e).dot(de);
        const double fp = de.dot(de) - (m - e).dot(d2e);
        const double step = f / fp;
        th -= step;
        if (std::abs(step) < 1e-15) {
          return center + Vec2(semi_a * std::cos(th), semi_b * std::sin(th));
        }
      }
      throw MeshError("ellipse projection did not converge");
    }
  }
  throw MeshError("unreachable");
}

Vec2 BoundaryShape::normal_at(const Vec2& s) const {
  switch (kind) {
    case Kind::Circle: {
      const Vec2 u = s - center;
      const double n = u.norm();
      if (n == 0) throw Error("normal_at: point at circle center");
      return u / n;
    }
    case Kind::Ellipse: {
      const Vec2 u = s - center;
      Vec2 g(u.x() / (semi_a * semi_a), u.y() / (semi_b * semi_b));
      return g.normalized();
    }
    case Kind::Polygon: {
      const int n = static_cast<int>(vertices.size());
      double scale = 0;
      for (const auto& v : vertices) scale = std::max(scale, v.norm());
      const double tol = 1e-10 * std::max(1.0, scale);
      for (int i = 0; i < n; ++i) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[(i + 1) % n];
        const Vec2 e = b - a;
        const double len = e.norm();
        const double t = (s - a).dot(e) / (len * len);
        const double off = std::abs((s - a).x() * e.y() - (s - a).y() * e.x()) / len;
        if (off < tol && t > -tol && t < 1 + tol) {
          if (t < tol || t > 1 - tol) throw Error("corner-point: normal undefined");
          return Vec2(e.y(), -e.x()) / len;  // outward for CCW polygons
        }
      }
      throw Error("normal_at: point not on polygon boundary");
    }
  }
  throw Error("unreachable");
}

std::string Domain::fingerprint() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s|kappa=%.12g|p=(%.12g,%.12g)", name.c_str(),
                metric.curvature(), base_point.x(), base_point.y());
  return buf;
}

Domain make_disk(double radius, const Vec2& center, const Vec2& base_point) {
  Domain d;
  d.boundary = BoundaryShape::circle(center, radius);
  d.base_point = base_point;
  d.name = "disk(r=" + std::to_string(radius) + ")";
  return d;
}

Domain make_rectangle(double width, double height) {
  if (width <= 0 || height <= 0) throw ConfigError("rectangle dimensions must be positive");
  const double hw = width / 2, hh = height / 2;
  Domain d;
  d.boundary = BoundaryShape::polygon(
      {Vec2(-hw, -hh), Vec2(hw, -hh), Vec2(hw, hh), Vec2(-hw, hh)});
  d.name = "rectangle(" + std::to_string(width) + "x" + std::to_string(height) + ")";
  return d;
}

Domain make_ellipse(double a, double b) {
  Domain d;
  d.boundary = BoundaryShape::ellipse(Vec2::Zero(), a, b);
  d.name = "ellipse(" + std::to_string(a) + "," + std::to_string(b) + ")";
  return d;
}

Domain make_polygon(std::vector<Vec2> vertices, const Vec2& base_point) {
  Domain d;
  d.boundary = BoundaryShape::polygon(std::move(vertices));
  d.base_point = base_point;
  d.name = "polygon";
  return d;
}

namespace {

Vec2 polygon_centroid(const std::vector<Vec2>& v) {
  double area2 = 0;
  Vec2 c = Vec2::Zero();
  const int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    const double cr = a.x() * b.y() - b.x() * a.y();
    area2 += cr;
    c += cr * (a + b);
  }
  return c / (3.0 * area2);
}

}  // namespace

Domain make_blob() {
  // Fixed irregular convex 9-gon, recentred so the centroid is the origin.
  const double radii[9] = {1.05, 1.22, 0.95, 1.12, 1.30, 1.02, 1.18, 0.92, 1.08};
  std::vector<Vec2> v;
  for (int i = 0; i < 9; ++i) {
    const double th = 2.0 * M_PI * i / 9.0;
    v.push_back(radii[i] * Vec2(std::cos(th), std::sin(th)));
  }
  const Vec2 c = polygon_centroid(v);
  for (auto& p : v) p -= c;
  Domain d;
  d.boundary = BoundaryShape::polygon(std::move(v));
  d.name = "blob";
  return d;
}

Domain make_lshape(const Vec2& base_point) {
  // [0,2]x[0,1] union [0,1]x[1,2].
  Domain d;
  d.boundary = BoundaryShape::polygon({Vec2(0, 0), Vec2(2, 0), Vec2(2, 1), Vec2(1, 1),
                                       Vec2(1, 2), Vec2(0, 2)});
  d.base_point = base_point;
  d.name = "lshape";
  return d;
}

Domain make_hyperbolic_disk(double geodesic_radius, double kappa) {
  if (kappa >= 0) throw ConfigError("hyperbolic disk requires kappa < 0");
  if (geodesic_radius <= 0) throw ConfigError("geodesic radius must be positive");
  const double a = std::sqrt(-kappa);
  const double chart_r = std::tanh(a * geodesic_radius / 2.0) / a;
  Domain d;
  d.metric = MetricModel::constant_curvature(kappa);
  d.boundary = BoundaryShape::circle(Vec2::Zero(), chart_r);
  d.name = "hyperbolic-disk(r=" + std::to_string(geodesic_radius) + ")";
  return d;
}

Domain make_spherical_cap(double geodesic_radius, double kappa) {
  if (kappa <= 0) throw ConfigError("spherical cap requires kappa > 0");
  const double a = std::sqrt(kappa);
  if (geodesic_radius <= 0 || geodesic_radius >= M_PI / (2.0 * a)) {
    throw ConfigError("spherical cap must lie strictly inside a hemisphere");
  }
  const double chart_r = std::tan(a * geodesic_radius / 2.0) / a;
  Domain d;
  d.metric = MetricModel::constant_curvature(kappa);
  d.boundary = BoundaryShape::circle(Vec2::Zero(), chart_r);
  d.name = "spherical-cap(r=" + std::to_string(geodesic_radius) + ")";
  return d;
}

double geodesic_distance(const Domain& domain, const Vec2& x) {
  return domain.metric.distance(domain.base_point, x);
}

double support_function(const Domain& domain, const Vec2& s, const Vec2& chart_normal) {
  const double d = domain.metric.distance(domain.base_point, s);
  if (d == 0) return 0;
  const Vec2 gd = domain.metric.distance_grad_chart(domain.base_point, s);
  const double c = domain.metric.conformal_factor(s);
  // <grad rho, nu>_g = d * (chart grad d . chart normal) / c
  return d * gd.dot(chart_normal) / c;
}

double support_function(const Domain& domain, const Vec2& s) {
  return support_function(domain, s, domain.boundary.normal_at(s));
}

GeometricQuantities geometric_quantities(const Domain& domain, const Mesh& mesh,
                                         int quad_degree) {
  GeometricQuantities q;
  const auto& trule = tri_rule(std::max(quad_degree, 4));
  const auto& erule = edge_rule(std::max(quad_degree, 4));
  const MetricModel& g = domain.metric;

  double volume = 0, inertia2 = 0;
  Vec2 first_moment = Vec2::Zero();
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.triangle_area(t);
    if (area <= 0) throw MeshError("geometric_quantities: degenerate triangle");
    for (std::size_t k = 0; k < trule.points.size(); ++k) {
      const Vec2 x = mesh.triangle_point(t, trule.points[k]);
      const double w = trule.weights[k] * area * g.area_weight(x);
      volume += w;
      const double d = g.distance(domain.base_point, x);
      inertia2 += w * d * d;
      first_moment += w * x;
    }
  }
  q.volume = volume;
  q.inertia2 = inertia2;
  q.centroid_residual = g.kind() == CurvatureKind::Euclidean ? first_moment.norm() : 0.0;

  double r_max = 0, h_min = std::numeric_limits<double>::infinity(), h_max = -h_min;
  double blen = 0;
  for (const auto& e : mesh.boundary_edges) {
    const Vec2& a = mesh.vertices[e.a];
    const Vec2& b = mesh.vertices[e.b];
    const double len = (b - a).norm();
    // Edge quadrature points plus the endpoints, each sampled with this
    // edge's normal (corner normals never used).
    std::vector<Vec2> samples;
    for (double tq : erule.points) samples.push_back(a + tq * (b - a));
    samples.push_back(a);
    samples.push_back(b);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const Vec2& s = samples[k];
      r_max = std::max(r_max, g.distance(domain.base_point, s));
      const double h = support_function(domain, s, e.normal);
      h_min = std::min(h_min, h);
      h_max = std::max(h_max, h);
      if (k < erule.points.size()) {
        blen += erule.weights[k] * len * g.length_weight(s);
      }
    }
  }
  q.r_max = r_max;
  q.h_min = h_min;
  q.h_max = h_max;
  q.boundary_length = blen;
  q.star_shaped = h_min > 0;
  return q;
}

}  // namespace speclab
