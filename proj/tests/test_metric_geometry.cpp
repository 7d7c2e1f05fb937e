#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "speclab/geometry.hpp"
#include "speclab/mesh.hpp"

using namespace speclab;

TEST_CASE("euclidean distance is the chart norm") {
  const auto g = MetricModel::euclidean();
  CHECK(g.distance(Vec2(0, 0), Vec2(3, 4)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(g.distance(Vec2(1, 2), Vec2(1, 2)) == 0.0);
}

TEST_CASE("hyperbolic distance from the origin matches the closed form") {
  const auto g = MetricModel::constant_curvature(-1.0);
  CHECK(g.distance(Vec2::Zero(), Vec2(0.5, 0)) ==
        doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-14));
  // numerical geodesic integration along the radial chart ray
  const int n = 20000;
  double len = 0;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * 0.5 / n;
    len += g.conformal_factor(Vec2(r, 0)) * 0.5 / n;
  }
  CHECK(g.distance(Vec2::Zero(), Vec2(0.5, 0)) == doctest::Approx(len).epsilon(1e-8));
}

TEST_CASE("spherical distance from the origin matches the closed form") {
  const auto g = MetricModel::constant_curvature(1.0);
  CHECK(g.distance(Vec2::Zero(), Vec2(0.2, 0)) ==
        doctest::Approx(2.0 * std::atan(0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(g.distance(Vec2::Zero(), Vec2(1.5, 0)), ConfigError);
}

TEST_CASE("distance is symmetric, positive, triangle on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-0.3, 0.3);
  for (double kappa : {-1.0, -0.25, 1.0}) {
    const auto g = MetricModel::constant_curvature(kappa);
    for (int it = 0; it < 200; ++it) {
      const Vec2 a(unif(rng), unif(rng)), b(unif(rng), unif(rng)), c(unif(rng), unif(rng));
      const double dab = g.distance(a, b);
      CHECK(dab == doctest::Approx(g.distance(b, a)).epsilon(1e-13));
      CHECK(dab >= 0.0);
      CHECK(dab <= g.distance(a, c) + g.distance(c, b) + 1e-13);
    }
  }
}

TEST_CASE("metric gradient of the distance is a unit vector") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-0.3, 0.3);
  for (double kappa : {0.0, -1.0, 0.7}) {
    const auto g = kappa == 0.0 ? MetricModel::euclidean()
                                : MetricModel::constant_curvature(kappa);
    for (int it = 0; it < 100; ++it) {
      const Vec2 p(unif(rng), unif(rng)), x(unif(rng), unif(rng));
      if ((x - p).norm() < 0.05) continue;
      const Vec2 grad = g.distance_grad_chart(p, x);
      // |grad d|_g = |chart grad| / c = 1
      CHECK(grad.norm() / g.conformal_factor(x) == doctest::Approx(1.0).epsilon(1e-10));
      // finite-difference cross-check of the chart gradient
      const double h = 1e-6;
      const Vec2 fd((g.distance(p, x + Vec2(h, 0)) - g.distance(p, x - Vec2(h, 0))) / (2 * h),
                    (g.distance(p, x + Vec2(0, h)) - g.distance(p, x - Vec2(0, h))) / (2 * h));
      CHECK((grad - fd).norm() < 1e-8);
    }
  }
}

TEST_CASE("support function on the canonical shapes") {
  SUBCASE("unit disk centered at the base point") {
    const Domain d = make_disk(1.0);
    for (double th : {0.1, 1.2, 3.0, 5.5}) {
      CHECK(support_function(d, Vec2(std::cos(th), std::sin(th))) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  SUBCASE("unit square, base point at the centroid") {
    const Domain d = make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)},
                                  Vec2(0.5, 0.5));
    CHECK(support_function(d, Vec2(0.5, 0)) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(support_function(d, Vec2(1, 0.5)) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(support_function(d, Vec2(0.25, 1)) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_WITH_AS(support_function(d, Vec2(0, 0)), doctest::Contains("corner"), Error);
  }
  SUBCASE("ellipse semi-axes (2, 1) at the apex") {
    const Domain d = make_ellipse(2.0, 1.0);
    CHECK(support_function(d, Vec2(2, 0)) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(support_function(d, Vec2(0, 1)) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("support function never exceeds the distance") {
  for (const Domain& d : {make_ellipse(2.0, 1.0), make_blob(), make_hyperbolic_disk(1.0)}) {
    Mesh mesh = initial_mesh(d);
    mesh = refine(mesh, d);
    mesh = refine(mesh, d);
    for (const auto& e : mesh.boundary_edges) {
      const Vec2 s = 0.5 * (mesh.vertices[e.a] + mesh.vertices[e.b]);
      CHECK(support_function(d, s, e.normal) <= geodesic_distance(d, s) + 1e-12);
    }
  }
}

TEST_CASE("geometric quantities on the unit disk") {
  const Domain d = make_disk(1.0);
  Mesh mesh = mesh_disk(1.0, 4);
  const auto q = geometric_quantities(d, mesh);
  CHECK(q.r_max == doctest::Approx(1.0).epsilon(1e-14));  // boundary vertices exact
  CHECK(q.h_min == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(q.h_max <= 1.0 + 1e-12);
  CHECK(q.volume == doctest::Approx(M_PI).epsilon(1e-3));
  CHECK(q.inertia2 == doctest::Approx(M_PI / 2).epsilon(2e-3));
  CHECK(q.boundary_length == doctest::Approx(2 * M_PI).epsilon(1e-3));
  CHECK(q.centroid_residual < 1e-12);
  CHECK(q.star_shaped);

  // O(h^2) geometric convergence of h_min toward the radius
  const auto q5 = geometric_quantities(d, refine(mesh, d));
  CHECK((1.0 - q5.h_min) < 0.3 * (1.0 - q.h_min));
}

TEST_CASE("geometric quantities on the unit square") {
  const Domain d = make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)},
                                Vec2(0.5, 0.5));
  Mesh mesh = initial_mesh(d);
  mesh = refine(mesh, d);
  mesh = refine(mesh, d);
  const auto q = geometric_quantities(d, mesh);
  CHECK(q.r_max == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  CHECK(q.h_min == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(q.h_max == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(q.volume == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(q.star_shaped);
}

TEST_CASE("L-shape with base point in one leg is not star-shaped") {
  const Domain d = make_lshape(Vec2(1.5, 0.5));
  const Mesh mesh = refine(initial_mesh(d), d);
  const auto q = geometric_quantities(d, mesh);
  CHECK_FALSE(q.star_shaped);
  CHECK(q.h_min < 0);
  // explicit boundary point with <x - p, nu> < 0: inner vertical edge
  CHECK(support_function(d, Vec2(1.0, 1.5)) < 0);
}

TEST_CASE("star-shapedness is invariant under rigid chart motions") {
  const double angle = 0.73;
  const Eigen::Rotation2D<double> rot(angle);
  std::vector<Vec2> verts = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  for (auto& v : verts) v = rot * v + Vec2(0.3, -0.2);
  const Domain d = make_polygon(verts, rot * Vec2(0.5, 0.5) + Vec2(0.3, -0.2));
  const Mesh mesh = refine(initial_mesh(d), d);
  const auto q = geometric_quantities(d, mesh);
  CHECK(q.star_shaped);
  CHECK(q.h_min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q.r_max == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("hyperbolic disk geometry") {
  // geodesic radius 1, kappa = -1: r_max = h = 1, area = 2 pi (cosh 1 - 1)
  const Domain d = make_hyperbolic_disk(1.0, -1.0);
  Mesh mesh = initial_mesh(d);
  for (int i = 0; i < 4; ++i) mesh = refine(mesh, d);
  const auto q = geometric_quantities(d, mesh);
  CHECK(q.r_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.h_min == doctest::Approx(1.0).epsilon(3e-3));
  CHECK(q.h_max <= 1.0 + 1e-10);
  CHECK(q.volume == doctest::Approx(2 * M_PI * (std::cosh(1.0) - 1.0)).epsilon(2e-3));
}

TEST_CASE("spherical cap stays inside the hemisphere chart") {
  CHECK_THROWS_AS(make_spherical_cap(2.0, 1.0), ConfigError);
  const Domain d = make_spherical_cap(0.5, 1.0);
  Mesh mesh = initial_mesh(d);
  for (int i = 0; i < 3; ++i) mesh = refine(mesh, d);
  const auto q = geometric_quantities(d, mesh);
  CHECK(q.r_max == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q.volume == doctest::Approx(2 * M_PI * (1.0 - std::cos(0.5))).epsilon(3e-3));
}

TEST_CASE("refinement drives volume and inertia toward their limits") {
  const Domain d = make_disk(1.0);
  Mesh mesh = mesh_disk(1.0, 1);
  double prev_vol_err = 1e9, prev_i2_err = 1e9;
  for (int level = 1; level <= 4; ++level) {
    const auto q = geometric_quantities(d, mesh);
    const double vol_err = std::abs(q.volume - M_PI);
    const double i2_err = std::abs(q.inertia2 - M_PI / 2);
    CHECK(vol_err < prev_vol_err);
    CHECK(i2_err < prev_i2_err);
    prev_vol_err = vol_err;
    prev_i2_err = i2_err;
    mesh = refine(mesh, d);
  }
}
