#include "speclab/fields.hpp"

#include <cmath>

#include "speclab/constants.hpp"

namespace speclab {

Mat2 covariant_deriv_fd(const MetricModel& metric,
                        const std::function<Vec2(const Vec2&)>& f, const Vec2& x,
                        double step) {
  Mat2 jac;
  for (int j = 0; j < 2; ++j) {
    Vec2 dx = Vec2::Zero();
    dx(j) = step;
    const Vec2 diff = (f(x + dx) - f(x - dx)) / (2.0 * step);
    jac.col(j) = diff;
  }
  // Gamma^i_{jk} = d_i d_k log c terms of a conformal metric.
  const Vec2 w = metric.grad_log_factor(x);
  const Vec2 fx = f(x);
  Mat2 gamma;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double s = (i == j ? w.dot(fx) : 0.0);
      s += w(j) * fx(i) - w(i) * fx(j);
      gamma(i, j) = s;
    }
  }
  return jac + gamma;
}

Mat2 field_deriv(const VectorFieldSpec& field, const MetricModel& metric, const Vec2& x,
                 double fd_step) {
  if (field.covariant_deriv) return field.covariant_deriv(x);
  return covariant_deriv_fd(metric, field.value, x, fd_step);
}

double field_divergence(const VectorFieldSpec& field, const MetricModel& metric,
                        const Vec2& x, double fd_step) {
  if (field.divergence) return field.divergence(x);
  return field_deriv(field, metric, x, fd_step).trace();
}

VectorFieldSpec position_field(const Vec2& origin) {
  VectorFieldSpec f;
  f.name = "position";
  f.value = [origin](const Vec2& x) { return Vec2(x - origin); };
  f.covariant_deriv = [](const Vec2&) { return Mat2(Mat2::Identity()); };
  f.divergence = [](const Vec2&) { return 2.0; };
  return f;
}

VectorFieldSpec grad_rho_field(const Domain& domain) {
  const MetricModel metric = domain.metric;
  const Vec2 p = domain.base_point;
  const double kappa = metric.curvature();

  VectorFieldSpec f;
  f.name = "grad_rho";
  f.value = [metric, p](const Vec2& x) {
    const double d = metric.distance(p, x);
    if (d == 0) return Vec2(Vec2::Zero());
    const double c = metric.conformal_factor(x);
    // metric gradient of rho = d * (chart grad d) / c^2
    return Vec2((d / (c * c)) * metric.distance_grad_chart(p, x));
  };
  f.covariant_deriv = [metric, p, kappa](const Vec2& x) {
    const double d = metric.distance(p, x);
    if (d < 1e-12) return Mat2(Mat2::Identity());
    const double c = metric.conformal_factor(x);
    const Vec2 rhat = metric.distance_grad_chart(p, x) / c;  // chart-unit radial
    const Vec2 that(-rhat.y(), rhat.x());
    const double tangential = r_h_kappa(2, kappa, d);  // d H_kappa(d), n = 2
    return Mat2(rhat * rhat.transpose() + tangential * (that * that.transpose()));
  };
  f.divergence = [metric, p, kappa](const Vec2& x) {
    const double d = metric.distance(p, x);
    return 1.0 + r_h_kappa(2, kappa, d);
  };
  return f;
}

Vec2 FieldOnMesh::grad_laplacian(int, const std::array<double, 3>&, const Vec2&) const {
  throw Error("field: grad_laplacian evaluator missing");
}
double FieldOnMesh::bilaplacian(int, const std::array<double, 3>&, const Vec2&) const {
  throw Error("field: bilaplacian evaluator missing");
}

double AnalyticField::value(int, const std::array<double, 3>&, const Vec2& x) const {
  return spec_.value(x);
}
Vec2 AnalyticField::grad(int, const std::array<double, 3>&, const Vec2& x) const {
  return spec_.grad(x);
}
double AnalyticField::laplacian(int, const std::array<double, 3>&, const Vec2& x) const {
  if (!spec_.laplacian) throw Error("field: laplacian evaluator missing");
  return spec_.laplacian(x);
}
Vec2 AnalyticField::grad_laplacian(int, const std::array<double, 3>&, const Vec2& x) const {
  if (!spec_.grad_laplacian) throw Error("field: grad_laplacian evaluator missing");
  return spec_.grad_laplacian(x);
}
double AnalyticField::bilaplacian(int, const std::array<double, 3>&, const Vec2& x) const {
  if (!spec_.bilaplacian) throw Error("field: bilaplacian evaluator missing");
  return spec_.bilaplacian(x);
}

FemField::FemField(const FeSpace& space, Eigen::VectorXd dofs)
    : space_(&space), dofs_(std::move(dofs)) {}

FemField FemField::eigenfunction(const FeSpace& space, Eigen::VectorXd dofs, double lambda) {
  FemField f(space, std::move(dofs));
  f.lambda_ = lambda;
  f.has_lambda_ = true;
  return f;
}

FemField FemField::with_laplacian(const FeSpace& space, Eigen::VectorXd dofs,
                                  Eigen::VectorXd lap_dofs, double lambda2,
                                  bool has_lambda2) {
  FemField f(space, std::move(dofs));
  f.lap_dofs_ = std::move(lap_dofs);
  f.has_lap_dofs_ = true;
  f.lambda_ = lambda2;
  f.has_lambda_ = has_lambda2;
  return f;
}

double FemField::value(int tri, const std::array<double, 3>& bary, const Vec2&) const {
  return fem_value(*space_, dofs_, tri, bary);
}
Vec2 FemField::grad(int tri, const std::array<double, 3>& bary, const Vec2&) const {
  return fem_grad_chart(*space_, dofs_, tri, bary);
}
double FemField::laplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const {
  if (has_lap_dofs_) return fem_value(*space_, lap_dofs_, tri, bary);
  if (has_lambda_) return -lambda_ * value(tri, bary, x);
  throw Error("FEM field: no Laplacian available");
}
Vec2 FemField::grad_laplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const {
  if (has_lap_dofs_) return fem_grad_chart(*space_, lap_dofs_, tri, bary);
  if (has_lambda_) return Vec2(-lambda_ * grad(tri, bary, x));
  throw Error("FEM field: no Laplacian available");
}
double FemField::bilaplacian(int tri, const std::array<double, 3>& bary, const Vec2& x) const {
  if (has_lap_dofs_ && has_lambda_) return -lambda_ * laplacian(tri, bary, x);
  throw Error("FEM field: no bilaplacian available");
}

}  // namespace speclab
