#include "speclab/metric.hpp"

#include <cmath>
#include <limits>

namespace speclab {

double MetricModel::chart_radius_limit() const {
  if (kappa_ == 0.0) return std::numeric_limits<double>::infinity();
  // kappa < 0: Poincare disk radius. kappa > 0: hemisphere image under
  // stereographic projection, tan(pi/4 * ...) -> chart radius 1/sqrt(kappa).
  return 1.0 / std::sqrt(std::abs(kappa_));
}

bool MetricModel::in_chart(const Vec2& x) const {
  if (kappa_ == 0.0) return true;
  return x.norm() < chart_radius_limit();
}

double MetricModel::conformal_factor(const Vec2& x) const {
  if (kappa_ == 0.0) return 1.0;
  return 2.0 / (1.0 + kappa_ * x.squaredNorm());
}

Vec2 MetricModel::grad_log_factor(const Vec2& x) const {
  if (kappa_ == 0.0) return Vec2::Zero();
  return (-2.0 * kappa_ / (1.0 + kappa_ * x.squaredNorm())) * x;
}

namespace {

// |1 + kappa conj(z) w|^2 with z, w as complex chart points.
double mobius_denom_sq(double kappa, const Vec2& z, const Vec2& w) {
  const double dot = z.dot(w);
  const double cross = z.x() * w.y() - z.y() * w.x();
  const double re = 1.0 + kappa * dot;
  const double im = kappa * cross;
  return re * re + im * im;
}

}  // namespace

double MetricModel::distance(const Vec2& p, const Vec2& x) const {
  if (!in_chart(p) || !in_chart(x)) {
    throw ConfigError("metric distance: point outside chart");
  }
  if (kappa_ == 0.0) return (x - p).norm();
  const double a = std::sqrt(std::abs(kappa_));
  const double q = (x - p).norm() / std::sqrt(mobius_denom_sq(kappa_, p, x));
  if (kappa_ < 0.0) return (2.0 / a) * std::atanh(a * q);
  return (2.0 / a) * std::atan(a * q);
}

Vec2 MetricModel::distance_grad_chart(const Vec2& p, const Vec2& x) const {
  if (!in_chart(p) || !in_chart(x)) {
    throw ConfigError("metric distance gradient: point outside chart");
  }
  const Vec2 u = x - p;
  const double s = u.norm();
  if (s == 0.0) return Vec2::Zero();
  if (kappa_ == 0.0) return u / s;

  const double n2 = mobius_denom_sq(kappa_, p, x);
  const double n = std::sqrt(n2);
  const double q = s / n;
  // grad of |1 + kappa conj(p) x|^2 in x.
  const double re = 1.0 + kappa_ * p.dot(x);
  const double im = kappa_ * (p.x() * x.y() - p.y() * x.x());
  const Vec2 grad_n2 = 2.0 * re * kappa_ * p + 2.0 * im * kappa_ * Vec2(-p.y(), p.x());
  const Vec2 grad_q = (u / s) / n - (q / (2.0 * n2)) * grad_n2;
  // d = (2/a) * atanh(a q) or atan(a q); both have d'(q) = 2 / (1 + kappa q^2).
  return (2.0 / (1.0 + kappa_ * q * q)) * grad_q;
}

}  // namespace speclab
