#include "speclab/constants.hpp"

#include <cmath>

namespace speclab {

void CurvatureData::validate() const {
  if (n < 2) throw ConfigError("curvature data: dimension must be >= 2");
  if (kappa1 > kappa2) throw ConfigError("curvature data: kappa1 must be <= kappa2");
  if (r_max <= 0) throw ConfigError("curvature data: r_max must be positive");
  if (kappa2 > 0 && r_max >= M_PI / (2.0 * std::sqrt(kappa2))) {
    throw ConfigError("curvature data: r_max must stay below pi/(2 sqrt(kappa2))");
  }
}

double h_kappa(int n, double kappa, double r) {
  if (r <= 0) throw ConfigError("h_kappa: r must be positive");
  if (kappa > 0) {
    const double s = std::sqrt(kappa);
    if (r >= M_PI / s) throw ConfigError("h_kappa: r beyond pi/sqrt(kappa)");
    return (n - 1) * s / std::tan(s * r);
  }
  if (kappa == 0) return (n - 1) / r;
  const double s = std::sqrt(-kappa);
  return (n - 1) * s / std::tanh(s * r);
}

double r_h_kappa(int n, double kappa, double r) {
  if (r == 0) return n - 1;
  return r * h_kappa(n, kappa, r);
}

namespace {

// Extrema of r H_kappa(r) over [0, r_max] from the sign-wise monotonicity.
double min_rh(int n, double kappa, double r_max) {
  return kappa > 0 ? r_h_kappa(n, kappa, r_max) : static_cast<double>(n - 1);
}
double max_rh(int n, double kappa, double r_max) {
  return kappa < 0 ? r_h_kappa(n, kappa, r_max) : static_cast<double>(n - 1);
}

}  // namespace

double c0_constant(int n, double kappa, double r_max) {
  if (r_max < 0) throw ConfigError("c0: r_max must be >= 0");
  return 1.0 + max_rh(n, kappa, r_max);
}

double c1_constant(int n, double kappa1, double kappa2, double r_max) {
  return (1.0 + 2.0 / (n - 1)) * min_rh(n, kappa2, r_max) - max_rh(n, kappa1, r_max);
}

double c2_constant(int n, double kappa1, double kappa2, double r_max) {
  return 1.0 + min_rh(n, kappa2, r_max) - 2.0 * max_rh(n, kappa1, r_max) / (n - 1);
}

double c3_constant(int n, double kappa1, double r_max) {
  return n + 1 - r_h_kappa(n, kappa1, r_max);
}

PositivityRadius positivity_radius(ComparisonConstant which, int n, double kappa1,
                                   double kappa2) {
  auto value = [&](double r) {
    switch (which) {
      case ComparisonConstant::C1: return c1_constant(n, kappa1, kappa2, r);
      case ComparisonConstant::C2: return c2_constant(n, kappa1, kappa2, r);
      case ComparisonConstant::C3: return c3_constant(n, kappa1, r);
    }
    return 0.0;
  };
  const double window = kappa2 > 0 ? M_PI / (2.0 * std::sqrt(kappa2))
                                   : std::numeric_limits<double>::infinity();

  PositivityRadius out;
  const double at_zero = value(0.0);
  const double probe = value(std::min(1e-6, window * 1e-7));
  if (at_zero < 0 || (at_zero <= 0 && probe <= at_zero)) {
    out.never_positive = true;
    out.r0 = 0;
    return out;
  }
  if (at_zero == 0 && probe <= 0) {
    out.never_positive = true;
    out.r0 = 0;
    return out;
  }

  // Geometric scan for a sign change, then bisection.
  double lo = std::min(1e-6, window * 1e-7);
  double hi = lo;
  const double cap = std::isfinite(window) ? window * (1.0 - 1e-12) : 1e6;
  bool found = false;
  while (hi < cap) {
    hi = std::min(hi * 2.0, cap);
    if (value(hi) <= 0) {
      found = true;
      break;
    }
    lo = hi;
    if (hi >= cap) break;
  }
  if (!found) {
    out.always_positive = true;
    out.r0 = std::isfinite(window) ? window : kInfinity;
    return out;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid) > 0 ? lo : hi) = mid;
  }
  out.r0 = 0.5 * (lo + hi);
  return out;
}

ConstantsBundle evaluate_constants(const CurvatureData& data) {
  data.validate();
  ConstantsBundle b;
  // Ricci lower bound in constant curvature kappa is (n-1) kappa; C0 takes the
  // lower sectional bound as its kappa.
  b.c0 = c0_constant(data.n, data.kappa1, data.r_max);
  b.c1 = c1_constant(data.n, data.kappa1, data.kappa2, data.r_max);
  b.c2 = c2_constant(data.n, data.kappa1, data.kappa2, data.r_max);
  b.c3 = c3_constant(data.n, data.kappa1, data.r_max);
  return b;
}

}  // namespace speclab
