#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "speclab/fem.hpp"

using namespace speclab;

namespace {

Eigen::VectorXd interpolate(const FeSpace& s, double (*f)(const Vec2&)) {
  Eigen::VectorXd u(s.dof_count);
  for (int i = 0; i < s.dof_count; ++i) u[i] = f(s.dof_coords[i]);
  return u;
}

}  // namespace

TEST_CASE("stiffness annihilates constants and matches the P1 reference element") {
  Mesh m;
  m.vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  m.triangles = {{0, 1, 2}};
  rebuild_boundary(m);
  const FeSpace s = make_space(m, 1);
  const auto k = assemble_stiffness(s, MetricModel::euclidean());
  Eigen::MatrixXd kd(k.mat);
  Eigen::MatrixXd expected(3, 3);
  expected << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  expected *= 0.5;
  CHECK((kd - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((kd * Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Dirichlet energy of x on the unit disk converges to pi") {
  // u = x interpolated exactly: u^T K u equals the inscribed polygon area,
  // which approaches pi at O(4^-level)
  const auto g = MetricModel::euclidean();
  double prev_err = 1e9;
  for (int level : {3, 4, 5}) {
    const Mesh m = mesh_disk(1.0, level);
    const FeSpace s = make_space(m, 1);
    const auto k = assemble_stiffness(s, g);
    const auto u = interpolate(s, [](const Vec2& p) { return p.x(); });
    const double err = std::abs(u.dot(k.mat * u) - M_PI);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 2e-3);
}

TEST_CASE("mass matrix integrates the volume") {
  const auto g = MetricModel::euclidean();
  const Mesh m = mesh_rectangle(1, 1, 2, 2);
  for (int order : {1, 2}) {
    const FeSpace s = make_space(m, order);
    const auto mm = assemble_mass(s, g);
    CHECK(Eigen::VectorXd::Ones(s.dof_count).dot(mm.mat * Eigen::VectorXd::Ones(s.dof_count)) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("hyperbolic mass converges to the hyperbolic area") {
  // chart disk of radius 0.5, kappa = -1: geodesic radius 2 atanh(1/2) = ln 3,
  // area 2 pi (cosh(ln 3) - 1) = 4 pi / 3
  const auto g = MetricModel::constant_curvature(-1.0);
  Mesh m = mesh_disk(0.5, 4);
  const FeSpace s = make_space(m, 2);
  const auto mm = assemble_mass(s, g);
  const double vol =
      Eigen::VectorXd::Ones(s.dof_count).dot(mm.mat * Eigen::VectorXd::Ones(s.dof_count));
  CHECK(vol == doctest::Approx(4.0 * M_PI / 3.0).epsilon(2e-3));
}

TEST_CASE("stiffness is metric-independent (2D conformal invariance)") {
  const Mesh m = mesh_disk(0.5, 2);
  const FeSpace s = make_space(m, 2);
  const auto k0 = assemble_stiffness(s, MetricModel::euclidean());
  const auto k1 = assemble_stiffness(s, MetricModel::constant_curvature(-1.0));
  CHECK(Eigen::MatrixXd(k0.mat) == Eigen::MatrixXd(k1.mat));  // entrywise identical
}

TEST_CASE("assembled matrices are exactly symmetric and mass is PD") {
  const Mesh m = mesh_disk(1.0, 2);
  const auto g = MetricModel::euclidean();
  const FeSpace s = make_space(m, 2);
  for (const auto& a : {assemble_stiffness(s, g), assemble_mass(s, g),
                        assemble_boundary_mass(s, g)}) {
    const Eigen::MatrixXd ad(a.mat);
    CHECK((ad - ad.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  const Eigen::MatrixXd md(assemble_mass(s, g).mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(md);
  CHECK(es.eigenvalues().minCoeff() > 0);
  const Eigen::MatrixXd kd(assemble_stiffness(s, g).mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ek(kd);
  CHECK(ek.eigenvalues().minCoeff() > -1e-10 * kd.norm());
}

TEST_CASE("boundary mass integrates the perimeter") {
  const auto g = MetricModel::euclidean();
  {
    const Mesh m = mesh_rectangle(1, 1, 2, 2);
    const FeSpace s = make_space(m, 2);
    const auto b = assemble_boundary_mass(s, g);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.dof_count);
    CHECK(ones.dot(b.mat * ones) == doctest::Approx(4.0).epsilon(1e-13));
  }
  {
    const Mesh m = mesh_disk(1.0, 4);
    const FeSpace s = make_space(m, 2);
    const auto b = assemble_boundary_mass(s, g);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.dof_count);
    CHECK(ones.dot(b.mat * ones) == doctest::Approx(2 * M_PI).epsilon(1e-3));
  }
}

TEST_CASE("weighted boundary mass with unit weight on the unit circle") {
  const Mesh m = mesh_disk(1.0, 4);
  const auto g = MetricModel::euclidean();
  const FeSpace s = make_space(m, 2);
  const auto plain = assemble_boundary_mass(s, g, {}, 9);
  // weight <grad rho, nu> = <x, n> on the unit circle: 1 at exact boundary
  // points; with the polygonal boundary it equals x.n pointwise
  const auto weighted = assemble_boundary_mass(
      s, g, [](const Vec2& x, const Vec2& n) { return x.dot(n); }, 9);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.dof_count);
  CHECK(ones.dot(weighted.mat * ones) ==
        doctest::Approx(ones.dot(plain.mat * ones)).epsilon(1e-3));

  CHECK_THROWS_WITH_AS(
      assemble_boundary_mass(s, g, [](const Vec2&, const Vec2&) { return -1.0; }, 9),
      doctest::Contains("star-shaped"), NumericalError);
}

TEST_CASE("normal derivative samples") {
  const auto g = MetricModel::euclidean();
  const Mesh m = mesh_rectangle(1, 1, 4, 4);
  const FeSpace s = make_space(m, 2);
  SUBCASE("constants have zero normal derivative") {
    const auto d = normal_derivative(s, g, Eigen::VectorXd::Ones(s.dof_count));
    CHECK(d.cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("u = x has +-1 / 0 on the four sides") {
    const auto op = normal_trace(s, g, 4);
    const auto u = interpolate(s, [](const Vec2& p) { return p.x(); });
    const Eigen::VectorXd d = op.samples * u;
    for (int r = 0; r < d.size(); ++r) {
      const Vec2& n = m.boundary_edges[op.edge_index[r]].normal;
      CHECK(d[r] == doctest::Approx(n.x()).epsilon(1e-12));
    }
  }
}

TEST_CASE("normal derivative of r^2 tends to 2 on the unit circle") {
  const auto g = MetricModel::euclidean();
  double prev_err = 1e9;
  for (int level : {2, 3, 4}) {
    const Mesh m = mesh_disk(1.0, level);
    const FeSpace s = make_space(m, 2);
    const auto u = interpolate(s, [](const Vec2& p) { return p.squaredNorm(); });
    const Eigen::VectorXd d = normal_derivative(s, g, u);
    const double err = (d.array() - 2.0).abs().maxCoeff();
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 2e-2);
}

TEST_CASE("discrete Green identity holds up to quadrature and trace error") {
  // smooth u, v: |v^T K u - (-int v lap u + oint v d_nu u)| -> 0
  const auto g = MetricModel::euclidean();
  auto uf = [](const Vec2& p) { return std::sin(p.x()) * std::exp(0.5 * p.y()); };
  double prev = 1e9;
  for (int level : {1, 2, 3}) {
    const Mesh m = mesh_rectangle(1, 1, 4 << level, 4 << level);
    const FeSpace s = make_space(m, 2);
    const auto k = assemble_stiffness(s, g);
    Eigen::VectorXd u(s.dof_count), v(s.dof_count);
    for (int i = 0; i < s.dof_count; ++i) {
      u[i] = uf(s.dof_coords[i]);
      v[i] = s.dof_coords[i].x() + 2.0 * s.dof_coords[i].y();
    }
    // analytic: lap u = (-1 + 0.25) sin(x) e^{y/2}
    const auto& rule = tri_rule(7);
    double vol_term = 0;
    for (int t = 0; t < m.triangle_count(); ++t) {
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 x = m.triangle_point(t, rule.points[q]);
        const double lap = -0.75 * std::sin(x.x()) * std::exp(0.5 * x.y());
        vol_term += rule.weights[q] * m.triangle_area(t) *
                    (x.x() + 2.0 * x.y()) * lap;
      }
    }
    const auto op = normal_trace(s, g, 9);
    const Eigen::VectorXd dn = op.samples * u;
    double bdry_term = 0;
    for (int r = 0; r < dn.size(); ++r) {
      const Vec2& x = op.points[r];
      bdry_term += op.weights[r] * (x.x() + 2.0 * x.y()) * dn[r];
    }
    const double defect = std::abs(v.dot(k.mat * u) - (-vol_term + bdry_term));
    CHECK(defect < prev);
    prev = defect;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("normal-trace Gram matrix matches a direct quadrature sum") {
  const auto g = MetricModel::euclidean();
  const Mesh m = mesh_disk(1.0, 2);
  const FeSpace s = make_space(m, 2);
  const auto op = normal_trace(s, g, 9);
  const auto gram = op.gram();
  Eigen::VectorXd u(s.dof_count);
  for (int i = 0; i < s.dof_count; ++i) u[i] = std::cos(1.7 * s.dof_coords[i].x());
  const Eigen::VectorXd d = op.samples * u;
  double direct = 0;
  for (int r = 0; r < d.size(); ++r) direct += op.weights[r] * d[r] * d[r];
  CHECK(u.dot(gram.mat * u) == doctest::Approx(direct).epsilon(1e-12));
}
