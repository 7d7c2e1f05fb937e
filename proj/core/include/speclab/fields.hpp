#pragma once

#include <array>
#include <functional>
#include <string>

#include "speclab/fem.hpp"
#include "speclab/geometry.hpp"
#include "speclab/metric.hpp"
#include "speclab/types.hpp"

namespace speclab {

/// Lipschitz vector field on a chart domain. `value` returns chart components
/// of F; `covariant_deriv` the chart matrix M of the covariant derivative (a
/// (1,1)-tensor), so that DF(X,Y) = g(M Y, X) and div F = trace M. When the
/// analytic derivative is absent, a central finite-difference fallback with
/// Christoffel correction is used.
struct VectorFieldSpec {
  std::string name;
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> covariant_deriv;  // optional
  std::function<double(const Vec2&)> divergence;     // optional

  bool has_analytic_deriv() const { return static_cast<bool>(covariant_deriv); }
};

/// Chart matrix of the covariant derivative by central differences plus the
/// conformal Christoffel terms.
Mat2 covariant_deriv_fd(const MetricModel& metric,
                        const std::function<Vec2(const Vec2&)>& f, const Vec2& x,
                        double step);

/// Covariant derivative of a field, analytic when available.
Mat2 field_deriv(const VectorFieldSpec& field, const MetricModel& metric, const Vec2& x,
                 double fd_step = 1e-5);
double field_divergence(const VectorFieldSpec& field, const MetricModel& metric,
                        const Vec2& x, double fd_step = 1e-5);

/// Euclidean position field F(x) = x - origin (DF = id, div F = 2).
VectorFieldSpec position_field(const Vec2& origin = Vec2::Zero());

/// F = grad rho_p in the domain's metric; covariant derivative and divergence
/// from the constant-curvature closed forms (radial eigenvalue 1, tangential
/// d H_kappa(d), div = 1 + d H_kappa(d) in dimension 2).
VectorFieldSpec grad_rho_field(const Domain& domain);

/// Scalar field with the derivative evaluators the identity checks need.
/// `laplacian` and `bilaplacian` are metric quantities; gradients are chart
/// gradients (covectors).
struct ScalarFieldSpec {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> grad;
  std::function<double(const Vec2&)> laplacian;
  std::function<Vec2(const Vec2&)> grad_laplacian;  // optional
  std::function<double(const Vec2&)> bilaplacian;   // optional
};

/// Uniform evaluation interface for analytic and FEM fields on a mesh.
class FieldOnMesh {
 public:
  virtual ~FieldOnMesh() = default;
  virtual double value(int tri, const std::array<double, 3>& bary, const Vec2& x) const = 0;
  virtual Vec2 grad(int tri, const std::array<double, 3>& bary, const Vec2& x) const = 0;
  virtual double laplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const = 0;
  virtual Vec2 grad_laplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const;
  virtual double bilaplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const;
};

class AnalyticField : public FieldOnMesh {
 public:
  explicit AnalyticField(ScalarFieldSpec spec) : spec_(std::move(spec)) {}
  double value(int, const std::array<double, 3>&, const Vec2& x) const override;
  Vec2 grad(int, const std::array<double, 3>&, const Vec2& x) const override;
  double laplacian(int, const std::array<double, 3>&, const Vec2& x) const override;
  Vec2 grad_laplacian(int, const std::array<double, 3>&, const Vec2& x) const override;
  double bilaplacian(int, const std::array<double, 3>&, const Vec2& x) const override;

 private:
  ScalarFieldSpec spec_;
};

/// P2 FEM field. The Laplacian comes either from an explicit mixed-variable
/// dof vector (fourth-order eigenfunctions) or from the eigenvalue relation
/// Delta w = -lambda w (second-order eigenfunctions). For buckling modes the
/// bilaplacian uses Delta^2 w = -Lambda Delta w.
class FemField : public FieldOnMesh {
 public:
  FemField(const FeSpace& space, Eigen::VectorXd dofs);
  /// Laplacian via eigenvalue relation.
  static FemField eigenfunction(const FeSpace& space, Eigen::VectorXd dofs, double lambda);
  /// Laplacian from a mixed-variable dof vector; optional eigenvalue for the
  /// bilaplacian relation Delta^2 w = -lambda2 * Delta w.
  static FemField with_laplacian(const FeSpace& space, Eigen::VectorXd dofs,
                                 Eigen::VectorXd lap_dofs, double lambda2 = 0,
                                 bool has_lambda2 = false);

  double value(int tri, const std::array<double, 3>& bary, const Vec2& x) const override;
  Vec2 grad(int tri, const std::array<double, 3>& bary, const Vec2& x) const override;
  double laplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const override;
  Vec2 grad_laplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const override;
  double bilaplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const override;

 private:
  const FeSpace* space_;
  Eigen::VectorXd dofs_;
  Eigen::VectorXd lap_dofs_;
  bool has_lap_dofs_ = false;
  double lambda_ = 0;
  bool has_lambda_ = false;
};

}  // namespace speclab
