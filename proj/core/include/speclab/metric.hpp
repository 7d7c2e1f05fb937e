#pragma once

#include "speclab/types.hpp"

namespace speclab {

enum class CurvatureKind { Euclidean, Hyperbolic, Spherical };

/// Constant-curvature 2D metric in a conformal chart, g = c(x)^2 (dx^2 + dy^2).
///
/// Charts: identity for kappa = 0, Poincare disk for kappa < 0 (chart radius
/// 1/sqrt(-kappa)), stereographic for kappa > 0. For kappa != 0 the conformal
/// factor is c(x) = 2 / (1 + kappa |x|^2); for kappa = 0 it is 1.
class MetricModel {
 public:
  static MetricModel euclidean() { return MetricModel(0.0); }
  static MetricModel constant_curvature(double kappa) { return MetricModel(kappa); }

  double curvature() const { return kappa_; }
  CurvatureKind kind() const {
    if (kappa_ > 0.0) return CurvatureKind::Spherical;
    if (kappa_ < 0.0) return CurvatureKind::Hyperbolic;
    return CurvatureKind::Euclidean;
  }

  /// Chart radius beyond which points are invalid: the full Poincare disk for
  /// kappa < 0, the image of the open hemisphere for kappa > 0.
  double chart_radius_limit() const;
  bool in_chart(const Vec2& x) const;

  double conformal_factor(const Vec2& x) const;
  /// Gradient of log c(x); Christoffel symbols of a conformal metric are
  /// built from these derivatives.
  Vec2 grad_log_factor(const Vec2& x) const;

  /// Geodesic distance between chart points. Throws ConfigError if either
  /// point is outside the chart.
  double distance(const Vec2& p, const Vec2& x) const;

  /// Euclidean-chart gradient of x -> distance(p, x). The metric gradient is
  /// this divided by c^2, and satisfies |grad d|_g = 1.
  Vec2 distance_grad_chart(const Vec2& p, const Vec2& x) const;

  /// Weight of dv_g relative to dx dy (= c^2) and of ds_g relative to
  /// Euclidean arclength (= c).
  double area_weight(const Vec2& x) const { double c = conformal_factor(x); return c * c; }
  double length_weight(const Vec2& x) const { return conformal_factor(x); }

 private:
  explicit MetricModel(double kappa) : kappa_(kappa) {}
  double kappa_;
};

}  // namespace speclab
