#pragma once

#include <functional>
#include <vector>

#include "speclab/mesh.hpp"
#include "speclab/metric.hpp"
#include "speclab/quadrature.hpp"
#include "speclab/types.hpp"

namespace speclab {

/// Lagrange finite element space of order 1 or 2 on a triangulation.
/// P1 dofs are the vertices; P2 adds one dof per edge (at the chord midpoint).
struct FeSpace {
  const Mesh* mesh = nullptr;
  int order = 2;
  int dof_count = 0;
  std::vector<Vec2> dof_coords;
  std::vector<std::array<int, 6>> cell_dofs;  // P1 uses the first 3 entries
  std::vector<bool> dof_on_boundary;
  std::vector<int> boundary_dofs;  // ascending
  std::vector<int> interior_dofs;  // ascending
  std::vector<int> bedge_triangle;  // owning triangle of each boundary edge

  int dofs_per_cell() const { return order == 1 ? 3 : 6; }
};

FeSpace make_space(const Mesh& mesh, int order);

/// Symmetric sparse matrix; symmetry is exact by construction (the assembler
/// emits mirrored entry pairs computed once).
struct SymSparseMatrix {
  SpMat mat;
  bool is_positive_semidefinite = false;

  Eigen::Index rows() const { return mat.rows(); }
  double quadratic_form(const Eigen::VectorXd& x) const { return x.dot(mat * x); }
};

/// Affine map from the reference triangle to chart triangle t.
struct ElementMap {
  Vec2 v0;
  Mat2 jac;       // columns v1-v0, v2-v0
  Mat2 jac_inv_t; // maps reference gradients to chart gradients
  double area;
};
ElementMap element_map(const Mesh& mesh, int t);

/// Reference shape functions at a barycentric point (3 for P1, 6 for P2).
void shape_values(int order, const std::array<double, 3>& bary, double* values);
void shape_ref_grads(int order, const std::array<double, 3>& bary, Vec2* grads);

/// K[i,j] = int <grad phi_i, grad phi_j>_g dv_g. In a 2D conformal metric this
/// equals the Euclidean Dirichlet integral (the c^2 factors cancel), so the
/// assembled matrix is independent of the metric model.
SymSparseMatrix assemble_stiffness(const FeSpace& space, const MetricModel& metric,
                                   int quad_degree = 4);

/// M[i,j] = int phi_i phi_j c(x)^2 dx; positive definite.
SymSparseMatrix assemble_mass(const FeSpace& space, const MetricModel& metric,
                              int quad_degree = 4);

/// Pointwise boundary weight, given chart point and outward chart normal.
using BoundaryWeight = std::function<double(const Vec2&, const Vec2&)>;

/// B[i,j] = int_bdry phi_i phi_j w ds_g (w = 1 if absent). Throws
/// NumericalError when the weight is non-positive at a quadrature point.
SymSparseMatrix assemble_boundary_mass(const FeSpace& space, const MetricModel& metric,
                                       BoundaryWeight weight = {}, int edge_degree = 4);

/// Outward normal derivative sampled at boundary-edge quadrature points, taken
/// from the interior-element gradient trace: row r of `samples` applied to a
/// dof vector gives d_nu u at point r; `weights` carry the ds_g measure.
struct NormalTraceOp {
  SpMat samples;
  std::vector<double> weights;
  std::vector<Vec2> points;
  std::vector<int> edge_index;

  /// Gram matrix N[i,j] = int_bdry (d_nu phi_i)(d_nu phi_j) ds_g.
  SymSparseMatrix gram() const;
  int row_count() const { return static_cast<int>(weights.size()); }
};

NormalTraceOp normal_trace(const FeSpace& space, const MetricModel& metric,
                           int edge_degree = 4);

/// d_nu u samples for a dof vector (= normal_trace(...).samples * u).
Eigen::VectorXd normal_derivative(const FeSpace& space, const MetricModel& metric,
                                  const Eigen::VectorXd& u, int edge_degree = 4);

// Pointwise evaluation of a FE function on a given triangle.
double fem_value(const FeSpace& space, const Eigen::VectorXd& u, int tri,
                 const std::array<double, 3>& bary);
Vec2 fem_grad_chart(const FeSpace& space, const Eigen::VectorXd& u, int tri,
                    const std::array<double, 3>& bary);

/// Submatrix A[rows, cols] for ascending index sets.
SpMat restrict_matrix(const SpMat& a, const std::vector<int>& rows,
                      const std::vector<int>& cols);

}  // namespace speclab
