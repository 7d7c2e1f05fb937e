#include "speclab/problems.hpp"

#include <Eigen/SparseCholesky>

namespace speclab {

const char* problem_name(Problem p) {
  switch (p) {
    case Problem::Dirichlet: return "dirichlet";
    case Problem::Neumann: return "neumann";
    case Problem::Steklov: return "steklov";
    case Problem::BiSteklov1: return "bsteklov1";
    case Problem::BiSteklov2: return "bsteklov2";
    case Problem::Buckling: return "buckling";
    case Problem::Clamped: return "clamped";
  }
  return "?";
}

Problem problem_from_name(const std::string& name) {
  for (Problem p : {Problem::Dirichlet, Problem::Neumann, Problem::Steklov,
                    Problem::BiSteklov1, Problem::BiSteklov2, Problem::Buckling,
                    Problem::Clamped}) {
    if (name == problem_name(p)) return p;
  }
  throw ConfigError("unknown problem name: " + name);
}

ProblemWorkspace make_workspace(const Domain& domain, const Mesh& mesh,
                                const ProblemOptions& options) {
  ProblemWorkspace ws;
  ws.domain = &domain;
  ws.mesh = &mesh;
  ws.options = options;
  ws.space = make_space(mesh, options.order);
  ws.stiffness = assemble_stiffness(ws.space, domain.metric, options.quad_degree);
  ws.mass = assemble_mass(ws.space, domain.metric, options.quad_degree);
  ws.boundary_mass = assemble_boundary_mass(ws.space, domain.metric, {}, options.edge_degree);
  ws.ntrace = normal_trace(ws.space, domain.metric, options.edge_degree);
  // Two Gauss points pin the (per-edge linear) P2 normal trace exactly.
  ws.normal_constraint = normal_trace(ws.space, domain.metric, 2).samples;
  return ws;
}

double SpectralResult::value(int k) const {
  if (k < 1 || k > count()) {
    throw NumericalError(std::string(problem_name(problem)) + " spectrum: eigenvalue index " +
                         std::to_string(k) + " out of range (have " + std::to_string(count()) +
                         ")");
  }
  return eigen.values[k - 1];
}

namespace {

Eigen::MatrixXd scatter_rows(const Eigen::MatrixXd& reduced, const std::vector<int>& rows,
                             int full_dim) {
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(full_dim, reduced.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) full.row(rows[i]) = reduced.row(i);
  return full;
}

}  // namespace

SpectralResult solve_problem(Problem problem, const ProblemWorkspace& ws, int k) {
  const FeSpace& space = ws.space;
  const std::vector<int>& interior = space.interior_dofs;
  std::vector<int> all(space.dof_count);
  for (int i = 0; i < space.dof_count; ++i) all[i] = i;

  SpectralPencil pencil;
  const std::vector<int>* u_dofs = &all;  // dof set carrying the eigenvector
  bool mixed = false;                     // fourth-order quotient via z = Mz^{-1} K u
  int infinite_override = -1;

  switch (problem) {
    case Problem::Dirichlet:
      pencil.A = restrict_matrix(ws.stiffness.mat, interior, interior);
      pencil.B = restrict_matrix(ws.mass.mat, interior, interior);
      u_dofs = &interior;
      break;
    case Problem::Neumann:
      pencil.A = ws.stiffness.mat;
      pencil.B = ws.mass.mat;
      break;
    case Problem::Steklov:
      pencil.A = ws.stiffness.mat;
      pencil.B = ws.boundary_mass.mat;
      infinite_override = space.dof_count - static_cast<int>(space.boundary_dofs.size());
      break;
    case Problem::BiSteklov1: {
      // quotient int (Delta u)^2 / int_bdry (d_nu u)^2 on the zero-trace
      // subspace; the mixed variable is tested against interior functions
      // (d_nu u stays free, so boundary test functions would pick up the
      // normal-trace surface term).
      mixed = true;
      pencil.product = true;
      pencil.G = restrict_matrix(ws.stiffness.mat, interior, interior);
      pencil.Mz = restrict_matrix(ws.mass.mat, interior, interior);
      pencil.B = restrict_matrix(ws.ntrace.gram().mat, interior, interior);
      u_dofs = &interior;
      const int rank_bound = 2 * static_cast<int>(ws.mesh->boundary_edges.size());
      infinite_override = std::max(0, static_cast<int>(interior.size()) - rank_bound);
      break;
    }
    case Problem::BiSteklov2:
      // quotient int (Delta u)^2 / int_bdry u^2 over {d_nu u = 0}.
      mixed = true;
      pencil.product = true;
      pencil.G = ws.stiffness.mat;
      pencil.Mz = ws.mass.mat;
      pencil.B = ws.boundary_mass.mat;
      if (ws.options.clamped_mode == BiharmonicMode::ConstrainedSampled) {
        pencil.C = ws.normal_constraint;
      }
      break;
    case Problem::Buckling:
    case Problem::Clamped: {
      mixed = true;
      pencil.product = true;
      pencil.G = restrict_matrix(ws.stiffness.mat, all, interior);
      pencil.Mz = ws.mass.mat;
      if (problem == Problem::Buckling) {
        pencil.B = restrict_matrix(ws.stiffness.mat, interior, interior);
      } else {
        pencil.B = restrict_matrix(ws.mass.mat, interior, interior);
      }
      if (ws.options.clamped_mode == BiharmonicMode::ConstrainedSampled) {
        pencil.C = restrict_matrix(ws.normal_constraint, [&] {
          std::vector<int> rows(ws.normal_constraint.rows());
          for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
          return rows;
        }(), interior);
      }
      u_dofs = &interior;
      break;
    }
  }

  SolverOptions sopts = ws.options.solver;
  sopts.k = k;
  SpectralResult res;
  res.problem = problem;
  res.eigen = solve_smallest(pencil, sopts);
  if (infinite_override >= 0) res.eigen.infinite_directions = infinite_override;
  res.domain_fingerprint = ws.domain->fingerprint();
  res.full_vectors = (u_dofs == &all)
                         ? res.eigen.vectors
                         : scatter_rows(res.eigen.vectors, *u_dofs, space.dof_count);
  if (mixed) {
    // Recover the discrete Laplacian of each mode: the mixed variable solves
    // Mz z = K u, i.e. z = -Delta_h u, so negate to store Delta_h u.
    Eigen::SimplicialLDLT<SpMat> mz(pencil.Mz);
    if (mz.info() != Eigen::Success) throw NumericalError("mixed mass factorization failed");
    Eigen::MatrixXd z = -mz.solve(Eigen::MatrixXd(SpMat(pencil.G) * res.eigen.vectors));
    if (problem == Problem::BiSteklov1) {
      res.lap_vectors = scatter_rows(z, interior, space.dof_count);
    } else {
      res.lap_vectors = z;  // z lives on the full dof set
    }
  }
  return res;
}

namespace {

SpectralResult one_shot(Problem p, const Domain& d, const Mesh& m, int k,
                        const ProblemOptions& o) {
  const ProblemWorkspace ws = make_workspace(d, m, o);
  return solve_problem(p, ws, k);
}

}  // namespace

SpectralResult dirichlet_spectrum(const Domain& d, const Mesh& m, int k,
                                  const ProblemOptions& o) {
  return one_shot(Problem::Dirichlet, d, m, k, o);
}
SpectralResult neumann_spectrum(const Domain& d, const Mesh& m, int k,
                                const ProblemOptions& o) {
  return one_shot(Problem::Neumann, d, m, k, o);
}
SpectralResult steklov_spectrum(const Domain& d, const Mesh& m, int k,
                                const ProblemOptions& o) {
  return one_shot(Problem::Steklov, d, m, k, o);
}
SpectralResult bsteklov1_spectrum(const Domain& d, const Mesh& m, int k,
                                  const ProblemOptions& o) {
  return one_shot(Problem::BiSteklov1, d, m, k, o);
}
SpectralResult bsteklov2_spectrum(const Domain& d, const Mesh& m, int k,
                                  const ProblemOptions& o) {
  return one_shot(Problem::BiSteklov2, d, m, k, o);
}
SpectralResult buckling_spectrum(const Domain& d, const Mesh& m, int k,
                                 const ProblemOptions& o) {
  return one_shot(Problem::Buckling, d, m, k, o);
}
SpectralResult clamped_spectrum(const Domain& d, const Mesh& m, int k,
                                const ProblemOptions& o) {
  return one_shot(Problem::Clamped, d, m, k, o);
}

}  // namespace speclab
