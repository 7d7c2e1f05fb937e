#include "speclab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "speclab/types.hpp"

namespace speclab {

namespace {

// Golub-Welsch nodes/weights for the Jacobi weight (1-x)^alpha (1+x)^beta
// on [-1,1]. Standard three-term recurrence coefficients.
void gauss_jacobi(int m, double alpha, double beta, std::vector<double>& x,
                  std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  const double ab = alpha + beta;
  for (int k = 0; k < m; ++k) {
    const double kk = k;
    double a;
    if (k == 0 && ab == -1.0) {
      a = (beta - alpha);
    } else {
      const double denom = (2.0 * kk + ab) * (2.0 * kk + ab + 2.0);
      a = denom == 0.0 ? 0.0 : (beta * beta - alpha * alpha) / denom;
    }
    J(k, k) = a;
    if (k >= 1) {
      const double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
      const double den = (2.0 * kk + ab) * (2.0 * kk + ab) *
                         (2.0 * kk + ab + 1.0) * (2.0 * kk + ab - 1.0);
      const double b = std::sqrt(num / den);
      J(k, k - 1) = b;
      J(k - 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = mu0 * v * v;
  }
}

TriQuadRule make_tri_rule_deg2() {
  // Edge-midpoint rule, exact through degree 2.
  TriQuadRule r;
  r.degree = 2;
  r.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return r;
}

TriQuadRule make_tri_rule_deg4() {
  // Dunavant degree-4 six-point rule, two symmetric orbits, all weights > 0.
  TriQuadRule r;
  r.degree = 4;
  const double a1 = 0.108103018168070, b1 = 0.445948490915965,
               w1 = 0.223381589678011;
  const double a2 = 0.816847572980459, b2 = 0.091576213509771,
               w2 = 0.109951743655322;
  auto add_orbit = [&r](double a, double b, double w) {
    r.points.push_back({a, b, b});
    r.points.push_back({b, a, b});
    r.points.push_back({b, b, a});
    r.weights.insert(r.weights.end(), 3, w);
  };
  add_orbit(a1, b1, w1);
  add_orbit(a2, b2, w2);
  return r;
}

TriQuadRule make_tri_rule_deg7() {
  // Conical-product rule: 4-pt Gauss-Jacobi(0,1) x 4-pt Gauss-Legendre through
  // the Duffy map x = u(1-v), y = uv. Exact for total degree <= 7, weights
  // positive by construction.
  std::vector<double> xu, wu, xv, wv;
  gauss_jacobi(4, 0.0, 1.0, xu, wu);  // weight (1+x) on [-1,1]
  gauss_jacobi(4, 0.0, 0.0, xv, wv);  // Legendre
  TriQuadRule r;
  r.degree = 7;
  for (int i = 0; i < 4; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    // int_0^1 f(u) u du = sum (wu/4) f(u); total measure 1/2.
    const double cu = wu[i] / 4.0;
    for (int j = 0; j < 4; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      const double cv = wv[j] / 2.0;
      const double x = u * (1.0 - v);
      const double y = u * v;
      r.points.push_back({1.0 - x - y, x, y});
      r.weights.push_back(cu * cv * 2.0);  // normalize: weights sum to 1
    }
  }
  return r;
}

EdgeQuadRule make_edge_rule(int npts, int degree) {
  std::vector<double> x, w;
  gauss_jacobi(npts, 0.0, 0.0, x, w);
  EdgeQuadRule r;
  r.degree = degree;
  for (int i = 0; i < npts; ++i) {
    r.points.push_back(0.5 * (x[i] + 1.0));
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

}  // namespace

const TriQuadRule& tri_rule(int degree) {
  static const TriQuadRule r2 = make_tri_rule_deg2();
  static const TriQuadRule r4 = make_tri_rule_deg4();
  static const TriQuadRule r7 = make_tri_rule_deg7();
  if (degree <= 2) return r2;
  if (degree <= 4) return r4;
  if (degree <= 7) return r7;
  throw ConfigError("tri_rule: no shipped rule of degree > 7");
}

const EdgeQuadRule& edge_rule(int degree) {
  static const EdgeQuadRule r2 = make_edge_rule(2, 3);
  static const EdgeQuadRule r4 = make_edge_rule(3, 5);
  static const EdgeQuadRule r9 = make_edge_rule(5, 9);
  if (degree <= 3) return r2;
  if (degree <= 5) return r4;
  if (degree <= 9) return r9;
  throw ConfigError("edge_rule: no shipped rule of degree > 9");
}

}  // namespace speclab
