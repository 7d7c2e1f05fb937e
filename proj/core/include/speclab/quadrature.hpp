#pragma once

#include <array>
#include <vector>

namespace speclab {

/// Symmetric quadrature rule on the reference triangle, points in barycentric
/// coordinates, weights normalized to sum to 1 (integral = area * sum w_i f_i).
struct TriQuadRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Gauss rule on the reference edge [0,1]; weights sum to 1.
struct EdgeQuadRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

/// Shipped interior rules: degrees 2 (3 pts), 4 (6 pts, Dunavant) and
/// 7 (16 pts, conical product, all weights positive). Requests are rounded up
/// to the next shipped degree.
const TriQuadRule& tri_rule(int degree);

/// Shipped edge rules: Gauss-Legendre with degrees 2/4/9 -> 2/3/5 points.
const EdgeQuadRule& edge_rule(int degree);

}  // namespace speclab
