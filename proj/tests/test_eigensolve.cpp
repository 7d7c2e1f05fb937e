#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "speclab/eigensolve.hpp"
#include "speclab/fem.hpp"
#include "speclab/geometry.hpp"
#include "speclab/mesh.hpp"

using namespace speclab;

namespace {

SpMat sparse_diag(const std::vector<double>& d) {
  SpMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
  m.makeCompressed();
  return m;
}

SpMat identity(int n) {
  SpMat m(n, n);
  m.setIdentity();
  return m;
}

struct DiskPencils {
  FeSpace space;
  SpectralPencil laplace_dirichlet;  // on interior dofs
  SpectralPencil steklov;            // singular B
};

DiskPencils disk_pencils(const Mesh& mesh) {
  DiskPencils p;
  p.space = make_space(mesh, 2);
  const auto g = MetricModel::euclidean();
  const auto k = assemble_stiffness(p.space, g);
  const auto m = assemble_mass(p.space, g);
  const auto b = assemble_boundary_mass(p.space, g);
  p.laplace_dirichlet.A = restrict_matrix(k.mat, p.space.interior_dofs, p.space.interior_dofs);
  p.laplace_dirichlet.B = restrict_matrix(m.mat, p.space.interior_dofs, p.space.interior_dofs);
  p.steklov.A = k.mat;
  p.steklov.B = b.mat;
  return p;
}

}  // namespace

TEST_CASE("diagonal pencil returns the smallest eigenvalues") {
  SpectralPencil p;
  p.A = sparse_diag({3, 1, 2});
  p.B = identity(3);
  SolverOptions opts;
  opts.k = 2;
  const auto res = solve_smallest(p, opts);
  REQUIRE(res.values.size() == 2);
  CHECK(res.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.values[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sparse Lanczos path agrees with the dense reference") {
  const Mesh mesh = mesh_disk(1.0, 3);  // ~700 P2 dofs
  const DiskPencils p = disk_pencils(mesh);

  SolverOptions dense, sparse;
  dense.k = sparse.k = 6;
  dense.path = SolverOptions::Path::Dense;
  sparse.path = SolverOptions::Path::Sparse;

  SUBCASE("Dirichlet Laplacian (B positive definite)") {
    const auto rd = solve_smallest(p.laplace_dirichlet, dense);
    const auto rs = solve_smallest(p.laplace_dirichlet, sparse);
    REQUIRE(rd.values.size() == 6);
    REQUIRE(rs.values.size() == 6);
    for (int i = 0; i < 6; ++i) {
      CHECK(rs.values[i] == doctest::Approx(rd.values[i]).epsilon(1e-8));
    }
  }
  SUBCASE("Steklov pencil (B singular: finite quotients only)") {
    const auto rd = solve_smallest(p.steklov, dense);
    const auto rs = solve_smallest(p.steklov, sparse);
    REQUIRE(rd.values.size() == 6);
    REQUIRE(rs.values.size() == 6);
    for (int i = 0; i < 6; ++i) {
      CHECK(rs.values[i] == doctest::Approx(rd.values[i]).epsilon(1e-8));
    }
    CHECK(rd.infinite_directions ==
          p.space.dof_count - static_cast<int>(p.space.boundary_dofs.size()));
  }
  SUBCASE("product-form pencil with constraints") {
    // smallest quotient of (K M^-1 K, B_bdry) over {d_nu u = 0}: bsteklov2-like
    const auto g = MetricModel::euclidean();
    SpectralPencil q;
    q.product = true;
    q.G = assemble_stiffness(p.space, g).mat;
    q.Mz = assemble_mass(p.space, g).mat;
    q.B = assemble_boundary_mass(p.space, g).mat;
    q.C = normal_trace(p.space, g, 2).samples;
    SolverOptions d2 = dense, s2 = sparse;
    d2.k = s2.k = 3;
    const auto rd = solve_smallest(q, d2);
    const auto rs = solve_smallest(q, s2);
    REQUIRE(rd.values.size() == 3);
    REQUIRE(rs.values.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(rs.values[i] == doctest::Approx(rd.values[i]).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("results are independent of dof ordering") {
  const Mesh mesh = mesh_disk(1.0, 2);
  const DiskPencils p = disk_pencils(mesh);
  const int n = static_cast<int>(p.laplace_dirichlet.A.rows());

  std::mt19937_64 rng(123);
  Eigen::VectorXi perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.data(), perm.data() + n, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> pm(perm);

  SpectralPencil permuted;
  permuted.A = SpMat(pm.transpose() * p.laplace_dirichlet.A * pm);
  permuted.B = SpMat(pm.transpose() * p.laplace_dirichlet.B * pm);

  for (auto path : {SolverOptions::Path::Dense, SolverOptions::Path::Sparse}) {
    SolverOptions opts;
    opts.k = 5;
    opts.path = path;
    const auto r1 = solve_smallest(p.laplace_dirichlet, opts);
    const auto r2 = solve_smallest(permuted, opts);
    for (int i = 0; i < 5; ++i) {
      CHECK(r2.values[i] ==
            doctest::Approx(r1.values[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("eigenvectors are B-orthonormal and residuals small") {
  const Mesh mesh = mesh_disk(1.0, 3);
  const DiskPencils p = disk_pencils(mesh);
  SolverOptions opts;
  opts.k = 5;
  opts.path = SolverOptions::Path::Sparse;
  const auto r = solve_smallest(p.laplace_dirichlet, opts);
  const Eigen::MatrixXd gram =
      r.vectors.transpose() * p.laplace_dirichlet.B * r.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
  for (double res : r.residual_norms) CHECK(res < opts.tol * 10);
}

TEST_CASE("clustering follows the relative-gap rule") {
  SUBCASE("disk-like pair") {
    const auto c = cluster_values({5.78, 14.68, 14.69}, 1e-2);
    REQUIRE(c.size() == 2);
    CHECK(c[0].count == 1);
    CHECK(c[1].count == 2);
    CHECK(multiplicity_at(c, 2) == 2);
    CHECK(multiplicity_at(c, 3) == 2);
  }
  SUBCASE("zero tolerance keeps singletons") {
    const auto c = cluster_values({1.0, 1.5, 2.0}, 0.0);
    CHECK(c.size() == 3);
  }
  SUBCASE("exact zeros form one cluster") {
    const auto c = cluster_values({0.0, 0.0, 0.0}, 1e-3);
    REQUIRE(c.size() == 1);
    CHECK(c[0].count == 3);
  }
}

TEST_CASE("constraints restrict the admissible space") {
  // A = diag(1,2,3), B = I, constraint x0 = 0 removes the eigenvalue 1
  SpectralPencil p;
  p.A = sparse_diag({1, 2, 3});
  p.B = identity(3);
  SpMat c(1, 3);
  c.insert(0, 0) = 1.0;
  c.makeCompressed();
  p.C = c;
  SolverOptions opts;
  opts.k = 2;
  const auto r = solve_smallest(p, opts);
  REQUIRE(r.values.size() == 2);
  CHECK(r.values[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.values[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("redundant constraint rows are reduced, not fatal") {
  SpectralPencil p;
  p.A = sparse_diag({1, 2, 3, 4});
  p.B = identity(4);
  SpMat c(3, 4);
  c.insert(0, 0) = 1.0;
  c.insert(1, 0) = 2.0;  // duplicate direction
  c.insert(2, 1) = 1.0;
  c.makeCompressed();
  p.C = c;
  SolverOptions opts;
  opts.k = 2;
  for (auto path : {SolverOptions::Path::Dense, SolverOptions::Path::Sparse}) {
    opts.path = path;
    const auto r = solve_smallest(p, opts);
    REQUIRE(r.values.size() == 2);
    CHECK(r.values[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.values[1] == doctest::Approx(4.0).epsilon(1e-10));
  }
}
