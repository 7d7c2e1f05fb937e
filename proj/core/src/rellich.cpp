#include "speclab/rellich.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>

#include "parallel.hpp"
#include "speclab/quadrature.hpp"

namespace speclab {

namespace {

// Conformal-chart evaluation of the identity ingredients: with g = c^2 delta,
// <F, grad w>_g = F . chart_grad w, |grad w|^2_g = |chart_grad w|^2 / c^2,
// d_nu w = (chart_grad w . n) / c, <F, nu>_g = c (F . n), dv_g = c^2 dx,
// ds_g = c dl, DF(grad w, grad v) = (chart_grad w)^T M (chart_grad v) / c^2.
// Most c factors cancel between measure and metric in two dimensions.
struct TermAccumulator {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cell_vals;  // [term][element or edge slot]

  TermAccumulator(std::vector<std::string> term_names, int slots)
      : names(std::move(term_names)) {
    cell_vals.assign(names.size(), std::vector<double>(slots, 0.0));
  }
  std::vector<std::pair<std::string, double>> totals() const {
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
      out.emplace_back(names[i], detail::pairwise_sum(cell_vals[i]));
    }
    return out;
  }
};

IdentityResidual finish(double lhs, const TermAccumulator& acc) {
  IdentityResidual r;
  r.lhs = lhs;
  r.rhs_terms = acc.totals();
  double sum = 0, scale = std::abs(lhs);
  for (const auto& [name, v] : r.rhs_terms) {
    (void)name;
    sum += v;
    scale += std::abs(v);
  }
  r.residual = std::abs(lhs - sum);
  r.relative_residual = scale > 0 ? r.residual / scale : 0.0;
  return r;
}

std::vector<int> bedge_owners(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> tri_of;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) tri_of[{tri[k], tri[(k + 1) % 3]}] = t;
  }
  std::vector<int> owners;
  for (const auto& be : mesh.boundary_edges) {
    auto it = tri_of.find({be.a, be.b});
    if (it == tri_of.end()) throw MeshError("boundary edge without owning triangle");
    owners.push_back(it->second);
  }
  return owners;
}

std::array<double, 3> bary_in(const ElementMap& em, const Vec2& x) {
  const Vec2 r = x - em.v0;
  const double det = 2.0 * em.area;
  const double xi = (em.jac(1, 1) * r.x() - em.jac(0, 1) * r.y()) / det;
  const double eta = (-em.jac(1, 0) * r.x() + em.jac(0, 0) * r.y()) / det;
  return {1.0 - xi - eta, xi, eta};
}

}  // namespace

double IdentityResidual::rhs_sum() const {
  double s = 0;
  for (const auto& [name, v] : rhs_terms) {
    (void)name;
    s += v;
  }
  return s;
}

IdentityResidual rellich_residual(const Domain& domain, const Mesh& mesh,
                                  const FieldOnMesh& w, const VectorFieldSpec& f,
                                  double lambda, int quad_degree, int edge_degree) {
  const auto& trule = tri_rule(quad_degree);
  const auto& erule = edge_rule(edge_degree);
  const MetricModel& g = domain.metric;
  const int nt = mesh.triangle_count();
  const int ne = static_cast<int>(mesh.boundary_edges.size());

  TermAccumulator acc({"bdry_dnw_F_gradw", "bdry_gradw2_Fnu", "bdry_lambda_w2_Fnu",
                       "vol_divF_gradw2", "vol_DF_gradw_gradw", "vol_lambda_w2_divF"},
                      nt + ne);
  std::vector<double> lhs_vals(nt + ne, 0.0);

  detail::for_chunks(nt, 256, [&](int, int begin, int end) {
    for (int t = begin; t < end; ++t) {
      const double area = mesh.triangle_area(t);
      double lhs = 0, t4 = 0, t5 = 0, t6 = 0;
      for (std::size_t q = 0; q < trule.points.size(); ++q) {
        const auto& bary = trule.points[q];
        const Vec2 x = mesh.triangle_point(t, bary);
        const double wq = trule.weights[q] * area;
        const double c2 = g.area_weight(x);
        const double wv = w.value(t, bary, x);
        const Vec2 gw = w.grad(t, bary, x);
        const double lap = w.laplacian(t, bary, x);
        const Vec2 fx = f.value(x);
        const double div = field_divergence(f, g, x);
        const Mat2 df = field_deriv(f, g, x);
        lhs += wq * (lap + lambda * wv) * fx.dot(gw) * c2;
        t4 += wq * 0.5 * div * gw.squaredNorm();
        t5 -= wq * gw.dot(df * gw);
        t6 -= wq * 0.5 * lambda * wv * wv * div * c2;
      }
      lhs_vals[t] = lhs;
      acc.cell_vals[3][t] = t4;
      acc.cell_vals[4][t] = t5;
      acc.cell_vals[5][t] = t6;
    }
  });

  const std::vector<int> owners = bedge_owners(mesh);
  for (int e = 0; e < ne; ++e) {
    const auto& be = mesh.boundary_edges[e];
    const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
    const double len = (pb - pa).norm();
    const int t = owners[e];
    const ElementMap em = element_map(mesh, t);
    double t1 = 0, t2 = 0, t3 = 0;
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const Vec2 x = pa + erule.points[q] * (pb - pa);
      const double wq = erule.weights[q] * len;
      const auto bary = bary_in(em, x);
      const double c = g.conformal_factor(x);
      const double wv = w.value(t, bary, x);
      const Vec2 gw = w.grad(t, bary, x);
      const Vec2 fx = f.value(x);
      t1 += wq * gw.dot(be.normal) * fx.dot(gw);
      t2 -= wq * 0.5 * gw.squaredNorm() * fx.dot(be.normal);
      t3 += wq * 0.5 * lambda * wv * wv * fx.dot(be.normal) * c * c;
    }
    acc.cell_vals[0][nt + e] = t1;
    acc.cell_vals[1][nt + e] = t2;
    acc.cell_vals[2][nt + e] = t3;
  }

  return finish(detail::pairwise_sum(lhs_vals), acc);
}

IdentityResidual polarized_residual(const Domain& domain, const Mesh& mesh,
                                    const FieldOnMesh& w, const FieldOnMesh& v,
                                    const VectorFieldSpec& f, int quad_degree,
                                    int edge_degree) {
  const auto& trule = tri_rule(quad_degree);
  const auto& erule = edge_rule(edge_degree);
  const MetricModel& g = domain.metric;
  const int nt = mesh.triangle_count();
  const int ne = static_cast<int>(mesh.boundary_edges.size());

  TermAccumulator acc({"bdry_cross_dn_F", "bdry_gradw_gradv_Fnu", "vol_divF_gradw_gradv",
                       "vol_DF_gradw_gradv"},
                      nt + ne);
  std::vector<double> lhs_vals(nt + ne, 0.0);

  detail::for_chunks(nt, 256, [&](int, int begin, int end) {
    for (int t = begin; t < end; ++t) {
      const double area = mesh.triangle_area(t);
      double lhs = 0, t3 = 0, t4 = 0;
      for (std::size_t q = 0; q < trule.points.size(); ++q) {
        const auto& bary = trule.points[q];
        const Vec2 x = mesh.triangle_point(t, bary);
        const double wq = trule.weights[q] * area;
        const double c2 = g.area_weight(x);
        const Vec2 gw = w.grad(t, bary, x);
        const Vec2 gv = v.grad(t, bary, x);
        const Vec2 fx = f.value(x);
        const double div = field_divergence(f, g, x);
        const Mat2 df = field_deriv(f, g, x);
        const Mat2 dfs = 0.5 * (df + df.transpose());
        lhs += wq * (w.laplacian(t, bary, x) * fx.dot(gv) +
                     v.laplacian(t, bary, x) * fx.dot(gw)) * c2;
        t3 += wq * div * gw.dot(gv);
        t4 -= wq * 2.0 * gw.dot(dfs * gv);
      }
      lhs_vals[t] = lhs;
      acc.cell_vals[2][t] = t3;
      acc.cell_vals[3][t] = t4;
    }
  });

  const std::vector<int> owners = bedge_owners(mesh);
  for (int e = 0; e < ne; ++e) {
    const auto& be = mesh.boundary_edges[e];
    const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
    const double len = (pb - pa).norm();
    const int t = owners[e];
    const ElementMap em = element_map(mesh, t);
    double t1 = 0, t2 = 0;
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const Vec2 x = pa + erule.points[q] * (pb - pa);
      const double wq = erule.weights[q] * len;
      const auto bary = bary_in(em, x);
      const Vec2 gw = w.grad(t, bary, x);
      const Vec2 gv = v.grad(t, bary, x);
      const Vec2 fx = f.value(x);
      t1 += wq * (gw.dot(be.normal) * fx.dot(gv) + gv.dot(be.normal) * fx.dot(gw));
      t2 -= wq * gw.dot(gv) * fx.dot(be.normal);
    }
    acc.cell_vals[0][nt + e] = t1;
    acc.cell_vals[1][nt + e] = t2;
  }

  return finish(detail::pairwise_sum(lhs_vals), acc);
}

IdentityResidual rellich2_residual(const Domain& domain, const Mesh& mesh,
                                   const FieldOnMesh& w, const VectorFieldSpec& f,
                                   double lambda, int quad_degree, int edge_degree) {
  const auto& trule = tri_rule(quad_degree);
  const auto& erule = edge_rule(edge_degree);
  const MetricModel& g = domain.metric;
  const int nt = mesh.triangle_count();
  const int ne = static_cast<int>(mesh.boundary_edges.size());

  TermAccumulator acc(
      {"vol_divF_lapw2", "bdry_lapw2_Fnu", "bdry_cross_dn_F", "bdry_gradw_gradlap_Fnu",
       "vol_divF_gradw_gradlap", "vol_DF_gradw_gradlap", "bdry_lambda_dnw_F_gradw",
       "bdry_lambda_gradw2_Fnu", "vol_lambda_divF_gradw2", "vol_lambda_DF_gradw_gradw"},
      nt + ne);
  std::vector<double> lhs_vals(nt + ne, 0.0);

  detail::for_chunks(nt, 256, [&](int, int begin, int end) {
    for (int t = begin; t < end; ++t) {
      const double area = mesh.triangle_area(t);
      double lhs = 0, r1 = 0, r5 = 0, r6 = 0, r9 = 0, r10 = 0;
      for (std::size_t q = 0; q < trule.points.size(); ++q) {
        const auto& bary = trule.points[q];
        const Vec2 x = mesh.triangle_point(t, bary);
        const double wq = trule.weights[q] * area;
        const double c2 = g.area_weight(x);
        const Vec2 gw = w.grad(t, bary, x);
        const double lap = w.laplacian(t, bary, x);
        const Vec2 glap = w.grad_laplacian(t, bary, x);
        const double bilap = w.bilaplacian(t, bary, x);
        const Vec2 fx = f.value(x);
        const double div = field_divergence(f, g, x);
        const Mat2 df = field_deriv(f, g, x);
        const Mat2 dfs = 0.5 * (df + df.transpose());
        lhs += wq * (bilap + lambda * lap) * fx.dot(gw) * c2;
        r1 += wq * 0.5 * div * lap * lap * c2;
        r5 += wq * div * gw.dot(glap);
        r6 -= wq * 2.0 * gw.dot(dfs * glap);
        r9 += wq * 0.5 * lambda * div * gw.squaredNorm();
        r10 -= wq * lambda * gw.dot(df * gw);
      }
      lhs_vals[t] = lhs;
      acc.cell_vals[0][t] = r1;
      acc.cell_vals[4][t] = r5;
      acc.cell_vals[5][t] = r6;
      acc.cell_vals[8][t] = r9;
      acc.cell_vals[9][t] = r10;
    }
  });

  const std::vector<int> owners = bedge_owners(mesh);
  for (int e = 0; e < ne; ++e) {
    const auto& be = mesh.boundary_edges[e];
    const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
    const double len = (pb - pa).norm();
    const int t = owners[e];
    const ElementMap em = element_map(mesh, t);
    double r2 = 0, r3 = 0, r4 = 0, r7 = 0, r8 = 0;
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const Vec2 x = pa + erule.points[q] * (pb - pa);
      const double wq = erule.weights[q] * len;
      const auto bary = bary_in(em, x);
      const double c = g.conformal_factor(x);
      const Vec2 gw = w.grad(t, bary, x);
      const double lap = w.laplacian(t, bary, x);
      const Vec2 glap = w.grad_laplacian(t, bary, x);
      const Vec2 fx = f.value(x);
      r2 -= wq * 0.5 * lap * lap * fx.dot(be.normal) * c * c;
      r3 += wq * (gw.dot(be.normal) * fx.dot(glap) + glap.dot(be.normal) * fx.dot(gw));
      r4 -= wq * gw.dot(glap) * fx.dot(be.normal);
      r7 += wq * lambda * gw.dot(be.normal) * fx.dot(gw);
      r8 -= wq * 0.5 * lambda * gw.squaredNorm() * fx.dot(be.normal);
    }
    acc.cell_vals[1][nt + e] = r2;
    acc.cell_vals[2][nt + e] = r3;
    acc.cell_vals[3][nt + e] = r4;
    acc.cell_vals[6][nt + e] = r7;
    acc.cell_vals[7][nt + e] = r8;
  }

  return finish(detail::pairwise_sum(lhs_vals), acc);
}

FieldConditionReport field_conditions(const Domain& domain, const Mesh& mesh,
                                      const VectorFieldSpec& f, int quad_degree,
                                      int edge_degree) {
  const auto& trule = tri_rule(quad_degree);
  const auto& erule = edge_rule(edge_degree);
  const MetricModel& g = domain.metric;
  FieldConditionReport rep;
  rep.c1_div = std::numeric_limits<double>::infinity();
  rep.c2_div = -rep.c1_div;
  rep.alpha = rep.c1_div;
  rep.boundary_min = rep.c1_div;

  auto probe = [&](const Vec2& x) {
    const double div = field_divergence(f, g, x);
    rep.c1_div = std::min(rep.c1_div, div);
    rep.c2_div = std::max(rep.c2_div, div);
    const Mat2 df = field_deriv(f, g, x);
    const Mat2 s = 0.5 * (df + df.transpose());
    // cancellation-free eigenvalues of a symmetric 2x2
    const double mid = 0.5 * (s(0, 0) + s(1, 1));
    const double disc = std::hypot(0.5 * (s(0, 0) - s(1, 1)), s(0, 1));
    rep.alpha = std::min(rep.alpha, mid - disc);
  };

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    for (const auto& bary : trule.points) probe(mesh.triangle_point(t, bary));
  }
  for (const auto& be : mesh.boundary_edges) {
    const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
    for (double tq : erule.points) {
      const Vec2 x = pa + tq * (pb - pa);
      probe(x);
      const double fn = g.conformal_factor(x) * f.value(x).dot(be.normal);
      rep.boundary_min = std::min(rep.boundary_min, fn);
    }
  }
  return rep;
}

namespace {

bool mesh_contains(const Mesh& mesh, const Vec2& p) {
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementMap em = element_map(mesh, t);
    const auto b = bary_in(em, p);
    if (b[0] >= -1e-12 && b[1] >= -1e-12 && b[2] >= -1e-12) return true;
  }
  return false;
}

// oint (mixed trace)^2 d_nu(r^2) ds over the polygonal boundary (Euclidean).
double boundary_moment_integral(const ProblemWorkspace& ws, const Eigen::VectorXd& lap_dofs) {
  const Mesh& mesh = *ws.mesh;
  const auto& erule = edge_rule(ws.options.edge_degree);
  std::vector<double> vals(mesh.boundary_edges.size(), 0.0);
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    const int t = ws.space.bedge_triangle[e];
    const ElementMap em = element_map(mesh, t);
    const Vec2 pa = mesh.vertices[be.a], pb = mesh.vertices[be.b];
    const double len = (pb - pa).norm();
    double s = 0;
    for (std::size_t q = 0; q < erule.points.size(); ++q) {
      const Vec2 x = pa + erule.points[q] * (pb - pa);
      const double z = fem_value(ws.space, lap_dofs, t, bary_in(em, x));
      s += erule.weights[q] * len * z * z * 2.0 * x.dot(be.normal);  // d_nu(r^2) = 2 x.n
    }
    vals[e] = s;
  }
  return detail::pairwise_sum(vals);
}

std::vector<BoundaryFormulaEntry> boundary_formula_impl(const ProblemWorkspace& ws,
                                                        const SpectralResult& result,
                                                        bool buckling) {
  if (ws.domain->metric.kind() != CurvatureKind::Euclidean) {
    throw ConfigError("boundary eigenvalue formula: Euclidean metric required");
  }
  if (!mesh_contains(*ws.mesh, Vec2::Zero())) {
    throw ConfigError("boundary eigenvalue formula: chart origin must lie inside the domain");
  }
  if (result.lap_vectors.cols() != static_cast<Eigen::Index>(result.count())) {
    throw ConfigError("boundary eigenvalue formula: result carries no mixed variable");
  }
  std::vector<BoundaryFormulaEntry> out;
  for (int j = 0; j < result.count(); ++j) {
    const Eigen::VectorXd u = result.full_vectors.col(j);
    const double num = boundary_moment_integral(ws, result.lap_vectors.col(j));
    const double denom = buckling ? 4.0 * u.dot(ws.stiffness.mat * u)
                                  : 8.0 * u.dot(ws.mass.mat * u);
    BoundaryFormulaEntry entry;
    entry.index = j + 1;
    entry.from_formula = num / denom;
    entry.from_solver = result.eigen.values[j];
    entry.ratio = entry.from_formula / entry.from_solver;
    out.push_back(entry);
  }
  return out;
}

}  // namespace

std::vector<BoundaryFormulaEntry> boundary_formula_buckling(const ProblemWorkspace& ws,
                                                            const SpectralResult& buckling) {
  return boundary_formula_impl(ws, buckling, true);
}

std::vector<BoundaryFormulaEntry> boundary_formula_clamped(const ProblemWorkspace& ws,
                                                           const SpectralResult& clamped) {
  return boundary_formula_impl(ws, clamped, false);
}

BoundaryBoundReport boundary_eigenvalue_bounds(const ProblemWorkspace& ws,
                                               const VectorFieldSpec& f,
                                               const SpectralResult* dirichlet,
                                               const SpectralResult* buckling) {
  BoundaryBoundReport rep;
  rep.conditions = field_conditions(*ws.domain, *ws.mesh, f);
  const auto& cond = rep.conditions;

  std::string violation;
  if (!(cond.c1_div > 0)) {
    violation = "div F has no positive lower bound";
  } else if (!(cond.alpha > 0)) {
    violation = "DF quadratic form has no positive lower bound";
  } else if (cond.boundary_min < -1e-12) {
    violation = "<F, nu> < 0 somewhere on the boundary";
  }
  const double denom_i = 2.0 * cond.alpha + cond.c1_div - cond.c2_div;

  if (!violation.empty()) {
    rep.skip_reason_dirichlet = rep.skip_reason_buckling = violation;
  } else if (denom_i <= 0) {
    rep.skip_reason_dirichlet = "2 alpha + c1 - c2 <= 0";
  }

  const MetricModel& g = ws.domain->metric;
  if (dirichlet != nullptr && violation.empty() && denom_i > 0) {
    rep.dirichlet_applicable = true;
    for (int j = 0; j < dirichlet->count(); ++j) {
      const Eigen::VectorXd u = dirichlet->full_vectors.col(j);
      const Eigen::VectorXd tr = ws.ntrace.samples * u;
      std::vector<double> vals(tr.size(), 0.0);
      for (int r = 0; r < tr.size(); ++r) {
        const Vec2& x = ws.ntrace.points[r];
        const Vec2& n = ws.mesh->boundary_edges[ws.ntrace.edge_index[r]].normal;
        const double fn = g.conformal_factor(x) * f.value(x).dot(n);
        vals[r] = ws.ntrace.weights[r] * tr[r] * tr[r] * fn;
      }
      const double num = detail::pairwise_sum(vals);
      const double mass = u.dot(ws.mass.mat * u);
      EigenBoundEntry e;
      e.index = j + 1;
      e.eigenvalue = dirichlet->eigen.values[j];
      e.bound = num / (denom_i * mass);
      e.slack = e.bound - e.eigenvalue;
      rep.dirichlet_upper.push_back(e);
    }
  }

  if (buckling != nullptr && violation.empty()) {
    const double scale = std::max(1.0, std::abs(cond.c2_div));
    if (std::abs(cond.c1_div - cond.c2_div) > 1e-8 * scale) {
      rep.skip_reason_buckling = "c1 != c2 (div F not constant)";
    } else {
      rep.buckling_applicable = true;
      const auto& erule = edge_rule(ws.options.edge_degree);
      for (int j = 0; j < buckling->count(); ++j) {
        const Eigen::VectorXd u = buckling->full_vectors.col(j);
        const Eigen::VectorXd z = buckling->lap_vectors.col(j);
        std::vector<double> vals(ws.mesh->boundary_edges.size(), 0.0);
        for (std::size_t e = 0; e < ws.mesh->boundary_edges.size(); ++e) {
          const auto& be = ws.mesh->boundary_edges[e];
          const int t = ws.space.bedge_triangle[e];
          const ElementMap em = element_map(*ws.mesh, t);
          const Vec2 pa = ws.mesh->vertices[be.a], pb = ws.mesh->vertices[be.b];
          const double len = (pb - pa).norm();
          double s = 0;
          for (std::size_t q = 0; q < erule.points.size(); ++q) {
            const Vec2 x = pa + erule.points[q] * (pb - pa);
            const double zz = fem_value(ws.space, z, t, bary_in(em, x));
            const double fn = g.conformal_factor(x) * f.value(x).dot(be.normal);
            s += erule.weights[q] * len * g.length_weight(x) * zz * zz * fn;
          }
          vals[e] = s;
        }
        const double num = detail::pairwise_sum(vals);
        const double denom = 2.0 * cond.alpha * u.dot(ws.stiffness.mat * u);
        EigenBoundEntry e;
        e.index = j + 1;
        e.eigenvalue = buckling->eigen.values[j];
        e.bound = num / denom;
        e.slack = e.eigenvalue - e.bound;
        rep.buckling_lower.push_back(e);
      }
    }
  }
  return rep;
}

}  // namespace speclab
