#pragma once

#include <string>
#include <vector>

#include "speclab/metric.hpp"
#include "speclab/types.hpp"

namespace speclab {

struct Mesh;  // mesh.hpp

/// Piecewise-smooth simple closed boundary curve in chart coordinates.
/// Curved shapes are meshed as polygons whose boundary vertices are projected
/// back onto the exact curve at every refinement.
struct BoundaryShape {
  enum class Kind { Polygon, Circle, Ellipse };

  Kind kind = Kind::Polygon;
  std::vector<Vec2> vertices;  // Polygon only, counterclockwise
  Vec2 center = Vec2::Zero();  // Circle / Ellipse
  double radius = 1.0;         // Circle
  double semi_a = 1.0, semi_b = 1.0;  // Ellipse

  static BoundaryShape polygon(std::vector<Vec2> verts);
  static BoundaryShape circle(const Vec2& center, double radius);
  static BoundaryShape ellipse(const Vec2& center, double a, double b);

  bool is_polygonal() const { return kind == Kind::Polygon; }

  /// Projects a nearby point onto the exact curve (identity for polygons).
  /// Throws MeshError if the nearest-point iteration fails to converge.
  Vec2 project(const Vec2& x) const;

  /// Outward unit chart normal at a boundary point. For polygons the point
  /// must lie on an edge interior; corners throw Error("corner-point").
  Vec2 normal_at(const Vec2& s) const;
};

struct Domain {
  MetricModel metric = MetricModel::euclidean();
  BoundaryShape boundary;
  Vec2 base_point = Vec2::Zero();
  std::string name = "domain";

  std::string fingerprint() const;
};

/// All geometric quantities entering the eigenvalue inequalities. Extrema are
/// sampled over boundary quadrature points and vertices (corner normals
/// excluded); integrals use metric-weighted quadrature.
struct GeometricQuantities {
  double r_max = 0;             // max_{x in bdry} d_p(x)
  double h_min = 0, h_max = 0;  // extrema of <grad rho_p, nu>_g over bdry
  double volume = 0;            // area under dv_g
  double boundary_length = 0;   // length under ds_g
  double inertia2 = 0;          // int d_p^2 dv_g
  double centroid_residual = 0; // |int x dv_g| (Euclidean charts only)
  bool star_shaped = false;     // h_min > 0
};

// Domain presets. Euclidean presets place the centroid at the origin unless a
// base point is given explicitly.
Domain make_disk(double radius, const Vec2& center = Vec2::Zero(),
                 const Vec2& base_point = Vec2::Zero());
Domain make_rectangle(double width, double height);
Domain make_ellipse(double a, double b);
Domain make_polygon(std::vector<Vec2> vertices, const Vec2& base_point);
/// Irregular convex 9-gon with centroid at the origin.
Domain make_blob();
/// L-shaped (non-convex) test domain; not star-shaped for base points inside
/// one leg.
Domain make_lshape(const Vec2& base_point);
Domain make_hyperbolic_disk(double geodesic_radius, double kappa = -1.0);
Domain make_spherical_cap(double geodesic_radius, double kappa = 1.0);

/// d_p(x); throws ConfigError for points outside the chart.
double geodesic_distance(const Domain& domain, const Vec2& x);

/// <grad rho_p, nu>_g = d_p(s) <grad d_p, nu>_g at a boundary point s, with
/// the outward normal supplied by the boundary shape (corners rejected).
double support_function(const Domain& domain, const Vec2& s);
/// Same, with the outward unit chart normal given by the caller.
double support_function(const Domain& domain, const Vec2& s, const Vec2& chart_normal);

GeometricQuantities geometric_quantities(const Domain& domain, const Mesh& mesh,
                                         int quad_degree = 4);

}  // namespace speclab
