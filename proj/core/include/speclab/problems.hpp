#pragma once

#include <string>

#include "speclab/eigensolve.hpp"
#include "speclab/fem.hpp"
#include "speclab/geometry.hpp"
#include "speclab/mesh.hpp"

namespace speclab {

enum class Problem {
  Dirichlet,
  Neumann,
  Steklov,
  BiSteklov1,  // Delta^2 u = 0, u = Delta u - eta d_nu u = 0
  BiSteklov2,  // Delta^2 u = 0, d_nu u = d_nu Delta u + xi u = 0
  Buckling,
  Clamped,
};

const char* problem_name(Problem p);
Problem problem_from_name(const std::string& name);

/// Discrete realization of the fourth-order quotients (numerator through the
/// mixed variable z with Mz z = K u):
///  - ConstrainedSampled: normal-derivative trace pinned to zero at two Gauss
///    points per boundary edge (exact for P2 traces), z tested on all dofs.
///  - WeakFullTest: no trace constraint; testing z against boundary dofs
///    penalizes nonzero d_nu u at rate 1/h (classical mixed realization).
enum class BiharmonicMode { ConstrainedSampled, WeakFullTest };

struct ProblemOptions {
  int order = 2;
  int quad_degree = 4;
  int edge_degree = 9;  // boundary Gram / weighted boundary integrals
  BiharmonicMode clamped_mode = BiharmonicMode::WeakFullTest;
  SolverOptions solver;
};

/// Shared assembled operators for one (domain, mesh, order) triple; immutable
/// after construction, safe for concurrent solves.
struct ProblemWorkspace {
  const Domain* domain = nullptr;
  const Mesh* mesh = nullptr;
  ProblemOptions options;
  FeSpace space;
  SymSparseMatrix stiffness;       // metric-independent (conformal invariance)
  SymSparseMatrix mass;            // dv_g weighted
  SymSparseMatrix boundary_mass;   // ds_g weighted
  NormalTraceOp ntrace;            // edge_degree quadrature
  SpMat normal_constraint;         // 2 Gauss points per edge; d_nu u = 0 rows
};

ProblemWorkspace make_workspace(const Domain& domain, const Mesh& mesh,
                                const ProblemOptions& options = {});

struct SpectralResult {
  Problem problem = Problem::Dirichlet;
  EigenResult eigen;
  Eigen::MatrixXd full_vectors;  // dof-space eigenvectors (zeros on eliminated dofs)
  Eigen::MatrixXd lap_vectors;   // mixed variable z per eigenvector (4th-order problems)
  std::string domain_fingerprint;
  int mesh_level = -1;

  int count() const { return static_cast<int>(eigen.values.size()); }
  /// 1-based eigenvalue accessor matching the usual spectral indexing.
  double value(int k) const;
  int multiplicity(int k) const { return multiplicity_at(eigen.clusters, k); }
};

SpectralResult solve_problem(Problem problem, const ProblemWorkspace& ws, int k);

/// Convenience one-shot wrappers.
SpectralResult dirichlet_spectrum(const Domain& d, const Mesh& m, int k,
                                  const ProblemOptions& o = {});
SpectralResult neumann_spectrum(const Domain& d, const Mesh& m, int k,
                                const ProblemOptions& o = {});
SpectralResult steklov_spectrum(const Domain& d, const Mesh& m, int k,
                                const ProblemOptions& o = {});
SpectralResult bsteklov1_spectrum(const Domain& d, const Mesh& m, int k,
                                  const ProblemOptions& o = {});
SpectralResult bsteklov2_spectrum(const Domain& d, const Mesh& m, int k,
                                  const ProblemOptions& o = {});
SpectralResult buckling_spectrum(const Domain& d, const Mesh& m, int k,
                                 const ProblemOptions& o = {});
SpectralResult clamped_spectrum(const Domain& d, const Mesh& m, int k,
                                const ProblemOptions& o = {});

}  // namespace speclab
