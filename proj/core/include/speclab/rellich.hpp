#pragma once

#include <string>
#include <utility>
#include <vector>

#include "speclab/fields.hpp"
#include "speclab/problems.hpp"

namespace speclab {

/// One evaluated integral identity: lhs, the named right-hand-side summands,
/// and the defect |lhs - sum(rhs)| in absolute and relative form.
struct IdentityResidual {
  double lhs = 0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double residual = 0;
  double relative_residual = 0;

  double rhs_sum() const;
};

/// int (Dw + lambda w)<F, grad w> against its boundary/divergence expansion
/// (6 right-hand-side terms). Analytic fields need value/grad/laplacian;
/// FEM fields use their discrete derivatives.
IdentityResidual rellich_residual(const Domain& domain, const Mesh& mesh,
                                  const FieldOnMesh& w, const VectorFieldSpec& f,
                                  double lambda, int quad_degree = 7, int edge_degree = 9);

/// Polarized (bilinear) identity in (w, v) with 4 right-hand-side terms.
IdentityResidual polarized_residual(const Domain& domain, const Mesh& mesh,
                                    const FieldOnMesh& w, const FieldOnMesh& v,
                                    const VectorFieldSpec& f, int quad_degree = 7,
                                    int edge_degree = 9);

/// Higher-order identity for int (D^2 w + lambda D w)<F, grad w>; needs
/// grad_laplacian and bilaplacian evaluators (10 right-hand-side terms).
IdentityResidual rellich2_residual(const Domain& domain, const Mesh& mesh,
                                   const FieldOnMesh& w, const VectorFieldSpec& f,
                                   double lambda, int quad_degree = 7, int edge_degree = 9);

/// Sampled bounds on div F, the covariant-derivative quadratic form, and
/// <F, nu> over interior and boundary quadrature points.
struct FieldConditionReport {
  double c1_div = 0;        // min div F
  double c2_div = 0;        // max div F
  double alpha = 0;         // min eigenvalue of sym(DF) relative to g
  double boundary_min = 0;  // min <F, nu>_g over boundary samples
};

FieldConditionReport field_conditions(const Domain& domain, const Mesh& mesh,
                                      const VectorFieldSpec& f, int quad_degree = 7,
                                      int edge_degree = 9);

/// Eigenvalue recovered from the boundary integral
/// oint (d^2_nunu w)^2 d_nu(r^2) ds / (4 int |grad w|^2)   (buckling)
/// oint (d^2_nunu w)^2 d_nu(r^2) ds / (8 int w^2)          (clamped quotient)
/// with d^2_nunu w evaluated as the boundary trace of the mixed variable.
/// Euclidean metric only; the chart origin must lie inside the domain.
struct BoundaryFormulaEntry {
  int index = 0;            // 1-based eigenvalue index
  double from_formula = 0;
  double from_solver = 0;
  double ratio = 0;         // formula / solver
};

std::vector<BoundaryFormulaEntry> boundary_formula_buckling(const ProblemWorkspace& ws,
                                                            const SpectralResult& buckling);
std::vector<BoundaryFormulaEntry> boundary_formula_clamped(const ProblemWorkspace& ws,
                                                           const SpectralResult& clamped);

/// Boundary-integral eigenvalue bounds under field conditions A-C:
/// (i)  lambda <= oint (d_nu w)^2 <F,nu> ds / ((2a + c1 - c2) int w^2)
/// (ii) Lambda >= oint (Dw)^2 <F,nu> ds / (2a int |grad w|^2), needs c1 = c2.
struct EigenBoundEntry {
  int index = 0;
  double eigenvalue = 0;
  double bound = 0;
  double slack = 0;  // signed, >= 0 when the bound holds
};

struct BoundaryBoundReport {
  FieldConditionReport conditions;
  bool dirichlet_applicable = false;
  bool buckling_applicable = false;
  std::string skip_reason_dirichlet, skip_reason_buckling;
  std::vector<EigenBoundEntry> dirichlet_upper;  // lambda_k <= bound
  std::vector<EigenBoundEntry> buckling_lower;   // Lambda_k >= bound
};

BoundaryBoundReport boundary_eigenvalue_bounds(const ProblemWorkspace& ws,
                                               const VectorFieldSpec& f,
                                               const SpectralResult* dirichlet,
                                               const SpectralResult* buckling);

}  // namespace speclab
