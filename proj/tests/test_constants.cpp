#include <doctest.h>

#include <cmath>

#include "speclab/constants.hpp"

using namespace speclab;

TEST_CASE("Riccati comparison function closed forms") {
  CHECK(h_kappa(2, 0.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(h_kappa(2, -1.0, 1.0) == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-15));
  CHECK(h_kappa(3, 1.0, 0.5) == doctest::Approx(2.0 / std::tan(0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(h_kappa(2, 0.0, -1.0), ConfigError);
  CHECK_THROWS_AS(h_kappa(2, 1.0, 3.5), ConfigError);

  // continuity in kappa across zero at fixed r
  for (int n : {2, 3, 5}) {
    const double above = h_kappa(n, 1e-9, 0.7);
    const double below = h_kappa(n, -1e-9, 0.7);
    const double flat = h_kappa(n, 0.0, 0.7);
    CHECK(std::abs(above - flat) < 1e-6);
    CHECK(std::abs(below - flat) < 1e-6);
  }
}

TEST_CASE("H_kappa satisfies its Riccati equation pointwise") {
  for (int n : {2, 3}) {
    for (double kappa : {-2.0, -1.0, 0.0, 0.5, 1.0}) {
      const double r_hi = kappa > 0 ? 0.9 * M_PI / std::sqrt(kappa) : 3.0;
      for (int i = 1; i <= 100; ++i) {
        const double r = r_hi * i / 101.0;
        const double h = 1e-6;
        const double hp = (h_kappa(n, kappa, r + h) - h_kappa(n, kappa, r - h)) / (2 * h);
        const double hv = h_kappa(n, kappa, r);
        // H' + H^2 + kappa = 0 holds for the n-normalized H up to (n-1) scaling:
        // H_(n) = (n-1) H_(2), and H_(2) solves the Riccati equation exactly.
        const double h2 = hv / (n - 1);
        const double h2p = hp / (n - 1);
        CHECK(std::abs(h2p + h2 * h2 + kappa) < 1e-6 * std::max(1.0, h2 * h2));
      }
    }
  }
}

TEST_CASE("r H_kappa(r) is monotone with limit n-1 at zero") {
  for (int n : {2, 4}) {
    CHECK(r_h_kappa(n, -1.0, 0.0) == n - 1);
    double prev_neg = r_h_kappa(n, -1.0, 1e-6);
    double prev_pos = r_h_kappa(n, 1.0, 1e-6);
    for (double r = 0.1; r < 1.5; r += 0.1) {
      const double neg = r_h_kappa(n, -1.0, r);
      const double pos = r_h_kappa(n, 1.0, r);
      CHECK(neg > prev_neg);
      CHECK(pos < prev_pos);
      CHECK(r_h_kappa(n, 0.0, r) == doctest::Approx(n - 1.0).epsilon(1e-15));
      prev_neg = neg;
      prev_pos = pos;
    }
  }
}

TEST_CASE("C0 values") {
  CHECK(c0_constant(2, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c0_constant(2, -1.0, 1.0) ==
        doctest::Approx(1.0 + 1.0 / std::tanh(1.0)).epsilon(1e-15));
  CHECK(c0_constant(3, 1.0, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("C1 case analysis") {
  // flat: C1 = 2 for every n
  for (int n : {2, 3, 7}) CHECK(c1_constant(n, 0, 0, 2.5) == doctest::Approx(2.0));
  // both negative: n + 1 - r_max H_{kappa1}(r_max)
  CHECK(c1_constant(2, -1, -1, 1) ==
        doctest::Approx(3.0 - 1.0 / std::tanh(1.0)).epsilon(1e-14));
  // mixed signs: (1 + 2/(n-1)) r H_{k2}(r) - r H_{k1}(r)
  const double r = 0.3;
  const double expect = 3.0 * (r / std::tan(r)) - r / std::tanh(r);
  CHECK(c1_constant(2, -1, 1, r) == doctest::Approx(expect).epsilon(1e-14));
  // both positive: (1 + 2/(n-1)) r H_{k2}(r) - (n - 1)
  CHECK(c1_constant(2, 0.5, 1.0, 0.4) ==
        doctest::Approx(3.0 * 0.4 * std::sqrt(1.0) / std::tan(0.4) - 1.0).epsilon(1e-14));
}

TEST_CASE("C2 case analysis") {
  CHECK(c2_constant(2, 0, 0, 1) == doctest::Approx(0.0));
  CHECK(c2_constant(3, 0, 0, 1) == doctest::Approx(1.0));
  CHECK(c2_constant(2, -1, -1, 1) ==
        doctest::Approx(2.0 - 2.0 / std::tanh(1.0)).epsilon(1e-14));
  CHECK(c2_constant(3, 1, 1, 0.5) ==
        doctest::Approx(0.5 * 2.0 / std::tan(0.5) - 1.0).epsilon(1e-14));
}

TEST_CASE("C3 case analysis") {
  CHECK(c3_constant(2, 0, 1) == doctest::Approx(2.0));
  CHECK(c3_constant(3, 0, 7.0) == doctest::Approx(2.0));
  CHECK(c3_constant(2, -1, 1) == doctest::Approx(3.0 - 1.0 / std::tanh(1.0)).epsilon(1e-14));
}

TEST_CASE("constants agree with direct grid sampling of their definitions") {
  // guards against case-analysis transcription: min/max over a dense radius
  // grid including both endpoints
  const struct {
    int n;
    double k1, k2, rmax;
  } tuples[] = {
      {2, 0, 0, 1},     {3, 0, 0, 1},      {2, -1, -1, 1},   {3, -2, -1, 1.5},
      {2, -1, 0, 1},    {4, -1, -1, 2},    {2, 1, 1, 0.5},   {3, 0.5, 1, 0.8},
      {2, 0, 1, 0.7},   {2, -1, 1, 0.3},   {3, -2, 0.5, 0.9}, {5, -0.7, 0.3, 1.2},
  };
  const int grid = 10000;
  for (const auto& t : tuples) {
    double min_rh2 = 1e300, max_rh1 = -1e300, max_rh_c0 = -1e300;
    for (int i = 0; i <= grid; ++i) {
      const double r = t.rmax * i / grid;
      min_rh2 = std::min(min_rh2, r_h_kappa(t.n, t.k2, r));
      max_rh1 = std::max(max_rh1, r_h_kappa(t.n, t.k1, r));
      max_rh_c0 = std::max(max_rh_c0, r_h_kappa(t.n, t.k1, r));
    }
    const double c0_direct = 1.0 + max_rh_c0;
    const double c1_direct = (1.0 + 2.0 / (t.n - 1)) * min_rh2 - max_rh1;
    const double c2_direct = 1.0 + min_rh2 - 2.0 * max_rh1 / (t.n - 1);
    const double c3_direct = t.n + 1 - r_h_kappa(t.n, t.k1, t.rmax);
    CHECK(std::abs(c0_constant(t.n, t.k1, t.rmax) - c0_direct) < 1e-9);
    CHECK(std::abs(c1_constant(t.n, t.k1, t.k2, t.rmax) - c1_direct) < 1e-9);
    CHECK(std::abs(c2_constant(t.n, t.k1, t.k2, t.rmax) - c2_direct) < 1e-9);
    CHECK(std::abs(c3_constant(t.n, t.k1, t.rmax) - c3_direct) < 1e-9);
  }
}

TEST_CASE("positivity radii") {
  SUBCASE("C1 is identically 2 in the flat case") {
    const auto pr = positivity_radius(ComparisonConstant::C1, 2, 0, 0);
    CHECK(pr.always_positive);
    CHECK(std::isinf(pr.r0));
  }
  SUBCASE("C2 is never positive for n = 2 with nonpositive curvature") {
    const auto pr = positivity_radius(ComparisonConstant::C2, 2, -1, -1);
    CHECK(pr.never_positive);
    CHECK(pr.r0 == 0);
  }
  SUBCASE("C3 for n = 2, kappa1 = -1: root of r coth r = 3") {
    const auto pr = positivity_radius(ComparisonConstant::C3, 2, -1, -1);
    CHECK_FALSE(pr.never_positive);
    CHECK_FALSE(pr.always_positive);
    CHECK(pr.r0 == doctest::Approx(2.984704585357887).epsilon(1e-10));
    CHECK(pr.r0 / std::tanh(pr.r0) == doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("C2 for n = 3 flat is positive everywhere") {
    const auto pr = positivity_radius(ComparisonConstant::C2, 3, 0, 0);
    CHECK(pr.always_positive);
  }
}

TEST_CASE("curvature data validation") {
  CHECK_THROWS_AS(evaluate_constants({1, 0, 0, 1}), ConfigError);
  CHECK_THROWS_AS(evaluate_constants({2, 1, 0, 1}), ConfigError);
  CHECK_THROWS_AS(evaluate_constants({2, 0, 0, -1}), ConfigError);
  CHECK_THROWS_AS(evaluate_constants({2, 0, 1, 2.0}), ConfigError);  // window
  const auto b = evaluate_constants({2, 0, 0, 1});
  CHECK(b.c0 == 2.0);
  CHECK(b.c1 == 2.0);
  CHECK(b.c2 == 0.0);
  CHECK(b.c3 == 2.0);
}
