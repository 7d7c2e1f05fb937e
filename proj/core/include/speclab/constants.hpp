#pragma once

#include <limits>

#include "speclab/types.hpp"

namespace speclab {

/// Curvature data entering the comparison constants: dimension n >= 2,
/// sectional curvature bounds kappa1 <= kappa2, and the outer radius r_max.
/// For kappa2 > 0 the comparison window requires r_max < pi / (2 sqrt(kappa2)).
struct CurvatureData {
  int n = 2;
  double kappa1 = 0;
  double kappa2 = 0;
  double r_max = 1;

  void validate() const;
};

/// Riccati comparison function: H' + H^2 + kappa = 0 with r H / (n-1) -> 1,
/// i.e. (n-1) sqrt(kappa) cot(sqrt(kappa) r) / (n-1)/r / (n-1) sqrt(|kappa|)
/// coth(sqrt(|kappa|) r) by curvature sign.
double h_kappa(int n, double kappa, double r);

/// r * H_kappa(r) extended by its limit n-1 at r = 0. Monotone in r:
/// increasing for kappa < 0, constant for kappa = 0, decreasing for kappa > 0.
double r_h_kappa(int n, double kappa, double r);

/// C0 = 1 + sup_{r in (0, r_max]} r H_kappa(r)  (Ricci lower-bound constant of
/// the Steklov-Neumann inequality; equals 2 for n = 2, kappa = 0).
double c0_constant(int n, double kappa, double r_max);

/// C1 = (1 + 2/(n-1)) min_{[0,r_max]} r H_{kappa2} - max_{[0,r_max]} r H_{kappa1}.
double c1_constant(int n, double kappa1, double kappa2, double r_max);

/// C2 = 1 + min_{[0,r_max]} r H_{kappa2} - 2 max_{[0,r_max]} r H_{kappa1}/(n-1).
double c2_constant(int n, double kappa1, double kappa2, double r_max);

/// C3 = n + 1 - r_max H_{kappa1}(r_max).
double c3_constant(int n, double kappa1, double r_max);

enum class ComparisonConstant { C1, C2, C3 };

struct PositivityRadius {
  double r0 = 0;  // sup of radii with positive constant (inf when unbounded)
  bool always_positive = false;
  bool never_positive = false;
};

/// Largest r_max below which the chosen constant stays positive, found by
/// bisection over the admissible radius window.
PositivityRadius positivity_radius(ComparisonConstant which, int n, double kappa1,
                                   double kappa2);

struct ConstantsBundle {
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0;
};
ConstantsBundle evaluate_constants(const CurvatureData& data);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace speclab
