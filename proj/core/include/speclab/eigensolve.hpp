#pragma once

#include <vector>

#include "speclab/types.hpp"

namespace speclab {

/// Generalized symmetric eigenvalue problem A x = theta B x, A and B positive
/// semidefinite, optionally restricted to the null space of a constraint
/// matrix C. A is either an explicit sparse matrix or the product form
/// G^T Mz^{-1} G produced by the mixed discrete Laplacian (then A is applied
/// through solves with Mz and shift-invert uses an expanded sparse system).
struct SpectralPencil {
  SpMat A;
  bool product = false;
  SpMat G, Mz;  // A = G^T Mz^{-1} G when product == true
  SpMat B;
  SpMat C;  // zero rows when unconstrained

  int dim() const { return product ? static_cast<int>(G.cols()) : static_cast<int>(A.rows()); }
};

struct SolverOptions {
  int k = 6;
  double tol = 1e-9;          // relative residual tolerance per eigenpair
  double cluster_tol = 5e-3;  // relative gap for multiplicity clustering
  int dense_threshold = 2000;
  double sigma_rel = 1e-8;    // shift magnitude relative to the pencil scale
  int max_subspace = 420;
  unsigned long long seed = 0x5eed1ab5ULL;  // deterministic starting vectors
  enum class Path { Auto, Dense, Sparse };
  Path path = Path::Auto;
};

struct Cluster {
  int first = 0;      // 0-based index of the first member
  int count = 1;      // multiplicity
  double value = 0;   // representative (mean) value
};

struct EigenResult {
  std::vector<double> values;  // ascending, finite quotients only
  Eigen::MatrixXd vectors;     // B-orthonormal columns matching values
  std::vector<double> residual_norms;  // relative residuals per pair
  std::vector<Cluster> clusters;
  int infinite_directions = 0;  // directions with infinite Rayleigh quotient
};

/// Smallest finite eigenpairs of the pencil restricted to ker C. Throws
/// NumericalError on breakdown or non-convergence.
EigenResult solve_smallest(const SpectralPencil& pencil, const SolverOptions& opts = {});

/// Greedy clustering of ascending values: a value joins the open cluster while
/// the gap to its predecessor is at most cluster_tol * max(1, |value|).
std::vector<Cluster> cluster_values(const std::vector<double>& values, double cluster_tol);

/// Multiplicity of the cluster containing the 1-based index k.
int multiplicity_at(const std::vector<Cluster>& clusters, int k_one_based);

}  // namespace speclab
