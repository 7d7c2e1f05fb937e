#pragma once

#include <array>
#include <string>
#include <vector>

#include "speclab/geometry.hpp"
#include "speclab/types.hpp"

namespace speclab {

enum class VertexMarker : unsigned char { Interior = 0, Boundary = 1 };

struct BoundaryEdge {
  int a = -1, b = -1;        // vertex indices, oriented as in the owning triangle
  Vec2 normal = Vec2::Zero();  // outward unit chart normal
  int curve_tag = -1;        // parent-curve piece; -1 = no exact curve attached
};

/// Conforming triangulation in chart coordinates. Immutable after
/// construction; refinement produces a new mesh.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<VertexMarker> vertex_markers;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int t) const;
  Vec2 triangle_point(int t, const std::array<double, 3>& bary) const;
  /// Interior sample near the mesh "center of mass" (used for orientation checks).
  Vec2 interior_sample() const;
};

struct MeshQuality {
  double min_area = 0;
  double min_angle_deg = 0;
  bool conforming = false;
  bool boundary_closed = false;
  bool normals_outward = false;
  int euler_characteristic = 0;  // V - E + T, 1 for a disk-like mesh
  bool ok() const {
    return min_area > 0 && conforming && boundary_closed && normals_outward &&
           euler_characteristic == 1;
  }
};

/// Validates conformity, orientation, boundary loops and the Euler relation.
MeshQuality check_mesh(const Mesh& mesh);

/// Structured mesh of [0,w] x [0,h] with 2*nx*ny triangles.
Mesh mesh_rectangle(double width, double height, int nx, int ny);

/// Hexagonal fan around the center, quadrisected `level` times with boundary
/// vertices projected to the exact circle. 6*4^level triangles.
Mesh mesh_disk(double radius, int level, const Vec2& center = Vec2::Zero());

/// Coarse starting mesh for a domain preset (fan for curved shapes, fan
/// triangulation from the base point or ear-clip for polygons).
Mesh initial_mesh(const Domain& domain);

/// Uniform quadrisection; new boundary vertices are projected onto the
/// domain's exact boundary curve.
Mesh refine(const Mesh& mesh, const Domain& domain);
/// Quadrisection without curve projection (polygonal / imported meshes).
Mesh refine(const Mesh& mesh);

/// Rebuilds boundary edges (with outward normals) from triangle adjacency:
/// edges with exactly one incident triangle.
void rebuild_boundary(Mesh& mesh);

// Interchange: JSON schema of record ("vertices", "triangles",
// "boundary_edges"; 0-based indices, 17 significant digits) plus Gmsh MSH 2.2
// ASCII import (2-node lines and 3-node triangles only).
Mesh import_mesh(const std::string& path);
void export_mesh(const Mesh& mesh, const std::string& path);
Mesh mesh_from_json_string(const std::string& text);
std::string mesh_to_json_string(const Mesh& mesh);
Mesh mesh_from_msh_string(const std::string& text);

}  // namespace speclab
