#include "speclab/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

void InequalityReport::finalize() {
  std::sort(checks.begin(), checks.end(),
            [](const InequalityCheck& a, const InequalityCheck& b) { return a.name < b.name; });
  passed = failed = skipped = 0;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::Pass) ++passed;
    else if (c.verdict == Verdict::Fail) ++failed;
    else ++skipped;
  }
}

namespace {

InequalityCheck make_check(std::string name, std::string reference, double lhs, double rhs,
                           char relation, double slack_frac) {
  InequalityCheck c;
  c.name = std::move(name);
  c.reference = std::move(reference);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = relation;
  c.discretization_slack = slack_frac;
  c.slack = relation == '<' ? rhs - lhs : lhs - rhs;
  if (std::isinf(rhs) && relation == '<') {
    c.verdict = Verdict::Pass;
    c.trivial = true;
    c.reason = "bound degenerates to +inf";
    return c;
  }
  // widen both sides by the relative discretization slack; the absolute floor
  // covers zero eigenvalues, which are only zero within solver tolerance
  const double widen = slack_frac * (std::abs(lhs) + std::abs(rhs)) +
                       1e-8 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  c.verdict = (c.slack >= -widen) ? Verdict::Pass : Verdict::Fail;
  if (c.verdict == Verdict::Fail) c.reason = "inequality violated beyond discretization slack";
  return c;
}

InequalityCheck skipped_check(std::string name, std::string reference, std::string reason) {
  InequalityCheck c;
  c.name = std::move(name);
  c.reference = std::move(reference);
  c.verdict = Verdict::Skipped;
  c.reason = std::move(reason);
  return c;
}

// Multiplicity of the k-th eigenvalue with the cluster-stability protocol:
// returns the candidate multiplicities (one when stable across two levels).
std::vector<int> multiplicity_candidates(const SpectralResult& now,
                                         const SpectralResult* prev, int k) {
  std::vector<int> out{now.multiplicity(k)};
  if (prev != nullptr && k <= prev->count()) {
    const int m_prev = prev->multiplicity(k);
    if (m_prev != out[0]) out.push_back(m_prev);
  }
  return out;
}

std::string idx(const std::string& base, int k) { return base + "_k" + std::to_string(k); }

}  // namespace

std::vector<InequalityCheck> check_xi_lower_bounds(const SuiteLevelData& d, int k_range,
                                                   double slack) {
  std::vector<InequalityCheck> out;
  const auto *mu = d.neumann, *sig = d.steklov, *xi = d.bsteklov2;
  for (int k = 1; k <= k_range; ++k) {
    const std::string name_a = idx("xi_lower_mu_k_sigma2", k);
    const std::string name_b = idx("xi_lower_mu2_sigma_k", k);
    const char* ref_a = "mu_k * sigma_2 <= xi_k";
    const char* ref_b = "mu_2 * sigma_k <= xi_k";
    if (mu->count() < std::max(k, 2) || sig->count() < std::max(k, 2) || xi->count() < k) {
      out.push_back(skipped_check(name_a, ref_a, "insufficient spectrum length"));
      out.push_back(skipped_check(name_b, ref_b, "insufficient spectrum length"));
      continue;
    }
    out.push_back(make_check(name_a, ref_a, mu->value(k) * sig->value(2), xi->value(k), '<',
                             slack));
    out.push_back(make_check(name_b, ref_b, mu->value(2) * sig->value(k), xi->value(k), '<',
                             slack));
  }
  return out;
}

std::optional<InequalityCheck> check_steklov_lower(const Domain& domain,
                                                   const SuiteLevelData& d, double slack) {
  const char* name = "steklov_lower_from_neumann";
  const char* ref = "sigma_2 >= h_min mu_2 / (2 r_max sqrt(mu_2) + C0)";
  if (!d.geom->star_shaped) {
    return skipped_check(name, ref, "domain not star-shaped w.r.t. base point");
  }
  const double mu2 = d.neumann->value(2);
  const double c0 = d.constants->c0;
  const double bound = d.geom->h_min * mu2 / (2.0 * d.geom->r_max * std::sqrt(mu2) + c0);
  return make_check(name, ref, d.steklov->value(2), bound, '>', slack);
}

std::vector<InequalityCheck> check_dirichlet_eta_bounds(const Domain& domain,
                                                        const SuiteLevelData& d, int k_range,
                                                        double slack) {
  std::vector<InequalityCheck> out;
  const char* ref_lower = "C1 eta_m / h_max <= lambda_k (m = mult lambda_k)";
  const char* ref_upper = "lambda_k <= (4 r_max^2 eta_k^2 - 2 C2 h_min eta_k) / h_min^2";
  const char* ref_eta1 = "eta_1 >= h_min C2 / r_max^2";
  (void)domain;
  if (!d.geom->star_shaped) {
    for (int k = 1; k <= k_range; ++k) {
      out.push_back(skipped_check(idx("dirichlet_lower_eta", k), ref_lower,
                                  "domain not star-shaped w.r.t. base point"));
      out.push_back(skipped_check(idx("dirichlet_upper_eta", k), ref_upper,
                                  "domain not star-shaped w.r.t. base point"));
    }
    out.push_back(skipped_check("eta1_lower", ref_eta1,
                                "domain not star-shaped w.r.t. base point"));
    return out;
  }
  const auto& g = *d.geom;
  const auto& cc = *d.constants;

  for (int k = 1; k <= k_range; ++k) {
    if (d.dirichlet->count() < k) {
      out.push_back(skipped_check(idx("dirichlet_lower_eta", k), ref_lower,
                                  "insufficient spectrum length"));
      out.push_back(skipped_check(idx("dirichlet_upper_eta", k), ref_upper,
                                  "insufficient spectrum length"));
      continue;
    }
    const double lam = d.dirichlet->value(k);
    // lower bound C1 eta_m / h_max <= lambda_k
    if (cc.c1 <= 0) {
      out.push_back(skipped_check(idx("dirichlet_lower_eta", k), ref_lower,
                                  "C1 <= 0: only the trivial bound"));
    } else {
      const auto candidates = multiplicity_candidates(*d.dirichlet, d.dirichlet_prev, k);
      InequalityCheck worst;
      bool have = false;
      for (int m : candidates) {
        if (d.bsteklov1->count() < m) {
          if (!have) {
            worst = skipped_check(idx("dirichlet_lower_eta", k), ref_lower,
                                  "insufficient eta spectrum for multiplicity " +
                                      std::to_string(m));
            have = true;
          }
          continue;
        }
        InequalityCheck c = make_check(idx("dirichlet_lower_eta", k), ref_lower,
                                       cc.c1 * d.bsteklov1->value(m) / g.h_max, lam, '<',
                                       slack);
        if (candidates.size() > 1) {
          c.reason += (c.reason.empty() ? "" : "; ");
          c.reason += "multiplicity unstable across levels, worst of m in {" +
                      std::to_string(candidates[0]) + "," + std::to_string(candidates[1]) +
                      "}";
        }
        if (!have || c.slack < worst.slack) worst = c;
        have = true;
      }
      if (have) out.push_back(worst);
    }
    // upper bound
    if (d.bsteklov1->count() < k) {
      out.push_back(skipped_check(idx("dirichlet_upper_eta", k), ref_upper,
                                  "insufficient eta spectrum"));
    } else {
      const double eta_k = d.bsteklov1->value(k);
      const double bound =
          (4.0 * g.r_max * g.r_max * eta_k * eta_k - 2.0 * cc.c2 * g.h_min * eta_k) /
          (g.h_min * g.h_min);
      out.push_back(make_check(idx("dirichlet_upper_eta", k), ref_upper, lam, bound, '<',
                               slack));
    }
  }
  out.push_back(make_check("eta1_lower", ref_eta1, d.bsteklov1->value(1),
                           g.h_min * cc.c2 / (g.r_max * g.r_max), '>', slack));
  return out;
}

std::vector<InequalityCheck> check_xi_upper_bounds(const Domain& domain,
                                                   const SuiteLevelData& d, int k_range,
                                                   double slack) {
  std::vector<InequalityCheck> out;
  const char* ref =
      "xi_{m+1} <= h_max mu_k^2 / ((C3 - mu_k I2 / (n vol)) v 0), m = mult mu_k";
  // k = 1 is excluded: the bound is built from the eigenspace of a nonzero
  // Neumann eigenvalue.
  for (int k = 2; k <= k_range; ++k) {
    const std::string name = idx("xi_upper_from_neumann", k);
    if (domain.metric.curvature() > 0) {
      out.push_back(skipped_check(name, ref, "requires kappa_2 <= 0"));
      continue;
    }
    if (!d.geom->star_shaped) {
      out.push_back(skipped_check(name, ref, "domain not star-shaped w.r.t. base point"));
      continue;
    }
    if (d.neumann->count() < k) {
      out.push_back(skipped_check(name, ref, "insufficient spectrum length"));
      continue;
    }
    const auto candidates = multiplicity_candidates(*d.neumann, d.neumann_prev, k);
    InequalityCheck worst;
    bool have = false;
    for (int m : candidates) {
      if (d.bsteklov2->count() < m + 1) {
        if (!have) {
          worst = skipped_check(name, ref, "insufficient xi spectrum for multiplicity " +
                                               std::to_string(m));
          have = true;
        }
        continue;
      }
      const double mu_k = d.neumann->value(k);
      const double denom =
          d.constants->c3 - mu_k * d.geom->inertia2 / (2.0 * d.geom->volume);
      const double rhs = denom > 0
                             ? d.geom->h_max * mu_k * mu_k / denom
                             : std::numeric_limits<double>::infinity();
      InequalityCheck c = make_check(name, ref, d.bsteklov2->value(m + 1), rhs, '<', slack);
      if (denom <= 0) c.reason = "denominator clamped to zero; bound degenerates to +inf";
      if (candidates.size() > 1) {
        c.reason += (c.reason.empty() ? "" : "; ");
        c.reason += "multiplicity unstable across levels, worst candidate reported";
      }
      if (!have || c.slack < worst.slack) worst = c;
      have = true;
    }
    if (have) out.push_back(worst);
  }
  return out;
}

std::vector<InequalityCheck> check_centroid_bounds(const Domain& domain,
                                                   const SuiteLevelData& d, double slack) {
  std::vector<InequalityCheck> out;
  const char* ref_xi = "xi_{m0+1} <= h_max mu_2^2 (centroid at base point), m0 = mult mu_2";
  const char* ref_sigma = "sigma_{m0+1} <= h_max mu_2 (centroid at base point)";
  std::string skip;
  if (domain.metric.kind() != CurvatureKind::Euclidean) {
    skip = "Euclidean-only inequality";
  } else if (!d.geom->star_shaped) {
    skip = "domain not star-shaped w.r.t. base point";
  } else {
    const double diam = 2.0 * d.geom->r_max;
    const Vec2 p = domain.base_point;
    // centroid residual is measured about the chart origin; shift to p
    const double residual = d.geom->centroid_residual == 0 && p.norm() == 0
                                ? 0
                                : d.geom->centroid_residual;
    if (p.norm() > 0 || residual > 1e-6 * diam * d.geom->volume) {
      skip = "base point is not the centroid";
    }
  }
  if (!skip.empty()) {
    out.push_back(skipped_check("xi_upper_centroid", ref_xi, skip));
    out.push_back(skipped_check("sigma_upper_centroid", ref_sigma, skip));
    return out;
  }
  const int m0 = d.neumann->multiplicity(2);
  const double mu2 = d.neumann->value(2);
  if (d.bsteklov2->count() < m0 + 1 || d.steklov->count() < m0 + 1) {
    out.push_back(skipped_check("xi_upper_centroid", ref_xi, "insufficient spectrum length"));
    out.push_back(
        skipped_check("sigma_upper_centroid", ref_sigma, "insufficient spectrum length"));
    return out;
  }
  out.push_back(make_check("xi_upper_centroid", ref_xi, d.bsteklov2->value(m0 + 1),
                           d.geom->h_max * mu2 * mu2, '<', slack));
  out.push_back(make_check("sigma_upper_centroid", ref_sigma, d.steklov->value(m0 + 1),
                           d.geom->h_max * mu2, '<', slack));
  return out;
}

std::vector<InequalityCheck> check_table1(const Domain& domain, const SuiteLevelData& d,
                                          double slack) {
  // The five classical planar inequalities (Kuttler-Sigillito 1968), stated
  // for star-shaped subsets of the plane; C0 = C1 = 2, C2 = 0 there.
  std::vector<InequalityCheck> out;
  const bool euclidean = domain.metric.kind() == CurvatureKind::Euclidean;
  const auto& g = *d.geom;
  struct Row {
    const char* name;
    const char* ref;
    bool needs_star;
    bool needs_centroid;
  };
  const Row rows[5] = {
      {"table1_row1_mu_sigma_xi", "mu_2 sigma_2 <= xi_2", false, false},
      {"table1_row2_sigma_lower", "mu_2 h_min / (1 + sqrt(mu_2) r_max) <= 2 sigma_2", true,
       false},
      {"table1_row3_eta_upper", "eta_1 <= lambda_1 h_max / 2", true, false},
      {"table1_row4_lambda_upper", "sqrt(lambda_1) <= 2 eta_1 r_max / h_min", true, false},
      {"table1_row5_xi_upper", "xi_2 <= mu_2^2 h_max (star-shaped w.r.t. centroid)", true,
       true},
  };
  const double diam = 2.0 * g.r_max;
  const bool centroid_ok = euclidean && domain.base_point.norm() == 0 &&
                           g.centroid_residual <= 1e-6 * diam * g.volume;
  for (const Row& row : rows) {
    if (!euclidean) {
      out.push_back(skipped_check(row.name, row.ref, "planar (kappa = 0) inequality"));
      continue;
    }
    if (row.needs_star && !g.star_shaped) {
      out.push_back(skipped_check(row.name, row.ref, "domain not star-shaped w.r.t. base point"));
      continue;
    }
    if (row.needs_centroid && !centroid_ok) {
      out.push_back(skipped_check(row.name, row.ref, "base point is not the centroid"));
      continue;
    }
    std::string n = row.name;
    if (n == "table1_row1_mu_sigma_xi") {
      out.push_back(make_check(n, row.ref, d.neumann->value(2) * d.steklov->value(2),
                               d.bsteklov2->value(2), '<', slack));
    } else if (n == "table1_row2_sigma_lower") {
      const double mu2 = d.neumann->value(2);
      out.push_back(make_check(n, row.ref, mu2 * g.h_min / (1.0 + std::sqrt(mu2) * g.r_max),
                               2.0 * d.steklov->value(2), '<', slack));
    } else if (n == "table1_row3_eta_upper") {
      out.push_back(make_check(n, row.ref, d.bsteklov1->value(1),
                               0.5 * d.dirichlet->value(1) * g.h_max, '<', slack));
    } else if (n == "table1_row4_lambda_upper") {
      out.push_back(make_check(n, row.ref, std::sqrt(d.dirichlet->value(1)),
                               2.0 * d.bsteklov1->value(1) * g.r_max / g.h_min, '<', slack));
    } else {
      out.push_back(make_check(n, row.ref, d.bsteklov2->value(2),
                               d.neumann->value(2) * d.neumann->value(2) * g.h_max, '<',
                               slack));
    }
  }
  return out;
}

std::vector<InequalityCheck> check_boundary_bounds(const ProblemWorkspace& ws,
                                                   const SpectralResult* dirichlet,
                                                   const SpectralResult* buckling,
                                                   double slack) {
  std::vector<InequalityCheck> out;
  const char* ref_i = "lambda <= oint (d_nu w)^2 <F,nu> ds / ((2a + c1 - c2) int w^2)";
  const char* ref_ii = "Lambda >= oint (Dw)^2 <F,nu> ds / (2a int |grad w|^2), c1 = c2";
  const bool euclidean = ws.domain->metric.kind() == CurvatureKind::Euclidean;
  const VectorFieldSpec f =
      euclidean ? position_field(ws.domain->base_point) : grad_rho_field(*ws.domain);
  const auto rep = boundary_eigenvalue_bounds(ws, f, dirichlet, buckling);

  if (dirichlet != nullptr) {
    if (!rep.dirichlet_applicable) {
      out.push_back(
          skipped_check("dirichlet_boundary_bound_k1", ref_i, rep.skip_reason_dirichlet));
    } else {
      for (const auto& e : rep.dirichlet_upper) {
        out.push_back(make_check(idx("dirichlet_boundary_bound", e.index), ref_i,
                                 e.eigenvalue, e.bound, '<', slack));
      }
    }
  }
  if (buckling != nullptr) {
    if (!rep.buckling_applicable) {
      out.push_back(
          skipped_check("buckling_boundary_bound_k1", ref_ii, rep.skip_reason_buckling));
    } else {
      for (const auto& e : rep.buckling_lower) {
        out.push_back(make_check(idx("buckling_boundary_bound", e.index), ref_ii,
                                 e.eigenvalue, e.bound, '>', slack));
      }
    }
  }
  return out;
}

std::vector<InequalityReport> run_suite(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  const Domain& domain = config.domain;
  Mesh mesh = initial_mesh(domain);
  int built_level = 0;
  SpectralResult prev_neumann, prev_dirichlet;
  bool have_prev = false;

  for (std::size_t li = 0; li < config.levels.size(); ++li) {
    const int level = config.levels[li];
    if (level < built_level) throw ConfigError("suite levels must be non-decreasing");
    for (; built_level < level; ++built_level) mesh = refine(mesh, domain);

    InequalityReport report;
    report.domain_fingerprint = domain.fingerprint();
    report.mesh_level = level;

    const ProblemWorkspace ws = make_workspace(domain, mesh, config.problem_options);
    const GeometricQuantities geom = geometric_quantities(domain, mesh);
    CurvatureData cdata;
    cdata.n = 2;
    cdata.kappa1 = cdata.kappa2 = domain.metric.curvature();
    cdata.r_max = geom.r_max;
    const ConstantsBundle constants = evaluate_constants(cdata);

    const int k_spec = config.k_max + 4;
    auto solve = [&](Problem p, int k) {
      SpectralResult r = solve_problem(p, ws, k);
      r.mesh_level = level;
      return r;
    };
    SpectralResult dirichlet = solve(Problem::Dirichlet, config.k_max + 2);
    SpectralResult neumann = solve(Problem::Neumann, k_spec);
    SpectralResult steklov = solve(Problem::Steklov, k_spec);
    SpectralResult eta = solve(Problem::BiSteklov1, config.k_max + 2);
    SpectralResult xi = solve(Problem::BiSteklov2, k_spec);
    SpectralResult buckling = solve(Problem::Buckling, 2);

    if (config.fault_injection == "corrupt-spectrum") {
      // test hook: break the first nonzero Steklov eigenvalue
      if (steklov.count() >= 2) steklov.eigen.values[1] *= 10.0;
    } else if (!config.fault_injection.empty()) {
      throw ConfigError("unknown fault injection: " + config.fault_injection);
    }

    SuiteLevelData d;
    d.geom = &geom;
    d.constants = &constants;
    d.dirichlet = &dirichlet;
    d.neumann = &neumann;
    d.steklov = &steklov;
    d.bsteklov1 = &eta;
    d.bsteklov2 = &xi;
    d.neumann_prev = have_prev ? &prev_neumann : nullptr;
    d.dirichlet_prev = have_prev ? &prev_dirichlet : nullptr;

    auto add = [&report](std::vector<InequalityCheck> cs) {
      for (auto& c : cs) report.checks.push_back(std::move(c));
    };
    add(check_xi_lower_bounds(d, config.k_max, config.slack));
    if (auto c = check_steklov_lower(domain, d, config.slack)) report.checks.push_back(*c);
    add(check_dirichlet_eta_bounds(domain, d, config.k_max, config.slack));
    add(check_xi_upper_bounds(domain, d, config.k_max, config.slack));
    add(check_centroid_bounds(domain, d, config.slack));
    add(check_table1(domain, d, config.slack));
    add(check_boundary_bounds(ws, &dirichlet, &buckling, config.slack));

    for (auto& c : report.checks) {
      c.inputs = domain.fingerprint() + "|level=" + std::to_string(level);
    }
    report.finalize();
    reports.push_back(std::move(report));

    prev_neumann = std::move(neumann);
    prev_dirichlet = std::move(dirichlet);
    have_prev = true;
  }
  return reports;
}

}  // namespace speclab
