// speclab: spectral laboratory for Laplace/Steklov/biharmonic eigenvalue
// problems on 2D constant-curvature domains. Computes spectra, geometric
// quantities and curvature-comparison constants, verifies Rellich-type
// integral identities, and machine-checks the classical eigenvalue
// inequalities that connect the spectra.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "speclab/config.hpp"
#include "speclab/constants.hpp"
#include "speclab/inequalities.hpp"
#include "speclab/report_io.hpp"
#include "speclab/rellich.hpp"

namespace fs = std::filesystem;
using namespace speclab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct OutputTracker {
  std::vector<fs::path> written;
  void write(const fs::path& p, const std::string& text) {
    if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
    write_text_file(p.string(), text);
    written.push_back(p);
  }
  void rollback() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    written.clear();
  }
};

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<int> levels;
  double slack = -1;

  RunConfig load() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!levels.empty()) cfg.levels = levels;
    if (slack >= 0) cfg.slack = slack;
    if (cfg.source_text.empty()) cfg.source_text = "<defaults>";
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "configuration file (flat sectioned key=value)");
  cmd->add_option("--out", args.out_dir, "output directory (overrides [output] dir)");
  cmd->add_option("--levels", args.levels, "mesh refinement levels (overrides [mesh] levels)");
  cmd->add_option("--slack", args.slack, "discretization slack fraction (overrides [checks])");
}

std::vector<Mesh> build_meshes(const Domain& domain, const std::vector<int>& levels) {
  std::vector<Mesh> out;
  Mesh mesh = initial_mesh(domain);
  int built = 0;
  for (int level : levels) {
    if (level < built) throw ConfigError("mesh levels must be non-decreasing");
    for (; built < level; ++built) mesh = refine(mesh, domain);
    out.push_back(mesh);
  }
  return out;
}

int cmd_spectra(const CommonArgs& common) {
  const RunConfig cfg = common.load();
  const Domain domain = cfg.make_domain();
  const auto meshes = build_meshes(domain, cfg.levels);
  OutputTracker out;
  try {
    nlohmann::ordered_json summary;
    summary["tool"] = "speclab";
    summary["version"] = kVersion;
    summary["config_fingerprint"] = cfg.fingerprint();
    summary["domain"] = domain.fingerprint();
    nlohmann::ordered_json problems_json;
    for (Problem p : {Problem::Dirichlet, Problem::Neumann, Problem::Steklov,
                      Problem::BiSteklov1, Problem::BiSteklov2, Problem::Buckling,
                      Problem::Clamped}) {
      std::vector<SpectralResult> per_level;
      for (std::size_t i = 0; i < meshes.size(); ++i) {
        const ProblemWorkspace ws = make_workspace(domain, meshes[i], cfg.problem_options());
        SpectralResult r = solve_problem(p, ws, cfg.k_max);
        r.mesh_level = cfg.levels[i];
        per_level.push_back(std::move(r));
      }
      const fs::path path =
          fs::path(cfg.out_dir) / (std::string("spectra_") + problem_name(p) + ".csv");
      out.write(path, spectra_to_csv(per_level, cfg.fingerprint()));
      nlohmann::ordered_json jp = nlohmann::ordered_json::array();
      for (const auto& r : per_level) {
        nlohmann::ordered_json jl;
        jl["level"] = r.mesh_level;
        jl["values"] = r.eigen.values;
        jl["infinite_directions"] = r.eigen.infinite_directions;
        jp.push_back(std::move(jl));
      }
      problems_json[problem_name(p)] = std::move(jp);
    }
    summary["problems"] = std::move(problems_json);
    out.write(fs::path(cfg.out_dir) / "spectra_summary.json", summary.dump(2) + "\n");
  } catch (...) {
    out.rollback();
    throw;
  }
  std::printf("wrote %zu files to %s\n", out.written.size(), cfg.out_dir.c_str());
  return kExitOk;
}

int cmd_check(const CommonArgs& common, const std::string& fault) {
  const RunConfig cfg = common.load();
  SuiteConfig sc = cfg.suite_config();
  sc.fault_injection = fault;
  const auto reports = run_suite(sc);
  OutputTracker out;
  try {
    out.write(fs::path(cfg.out_dir) / "inequalities.json",
              report_to_json(reports, cfg.fingerprint()).dump(2) + "\n");
    out.write(fs::path(cfg.out_dir) / "inequalities.csv",
              report_to_csv(reports, cfg.fingerprint()));
  } catch (...) {
    out.rollback();
    throw;
  }
  int failed = 0;
  for (const auto& rep : reports) {
    std::printf("level %d: %d passed, %d failed, %d skipped\n", rep.mesh_level, rep.passed,
                rep.failed, rep.skipped);
    for (const auto& c : rep.checks) {
      if (c.verdict == Verdict::Fail) {
        std::printf("  FAIL %s: lhs=%.12g rhs=%.12g (%s)\n", c.name.c_str(), c.lhs, c.rhs,
                    c.reference.c_str());
      }
    }
    failed += rep.failed;
  }
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_constants(int n, double kappa1, double kappa2, double r_max, bool as_json) {
  CurvatureData data{n, kappa1, kappa2, r_max};
  const ConstantsBundle b = evaluate_constants(data);
  auto radius_text = [&](ComparisonConstant which) -> std::string {
    const PositivityRadius pr = positivity_radius(which, n, kappa1, kappa2);
    if (pr.never_positive) return "never-positive";
    if (pr.always_positive && std::isinf(pr.r0)) return "inf";
    return format_sig17(pr.r0);
  };
  if (as_json) {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["kappa1"] = kappa1;
    j["kappa2"] = kappa2;
    j["r_max"] = r_max;
    j["C0"] = b.c0;
    j["C1"] = b.c1;
    j["C2"] = b.c2;
    j["C3"] = b.c3;
    j["r0_C1"] = radius_text(ComparisonConstant::C1);
    j["r0_C2"] = radius_text(ComparisonConstant::C2);
    j["r0_C3"] = radius_text(ComparisonConstant::C3);
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("n=%d kappa1=%g kappa2=%g r_max=%g\n", n, kappa1, kappa2, r_max);
    std::printf("C0 = %.12g\n", b.c0);
    auto describe = [&](ComparisonConstant which) {
      const std::string r0 = radius_text(which);
      if (r0 == "never-positive") return std::string("never positive");
      return "positive for r_max < " + r0;
    };
    std::printf("C1 = %.12g (%s)\n", b.c1, describe(ComparisonConstant::C1).c_str());
    std::printf("C2 = %.12g (%s)\n", b.c2, describe(ComparisonConstant::C2).c_str());
    std::printf("C3 = %.12g (%s)\n", b.c3, describe(ComparisonConstant::C3).c_str());
  }
  return kExitOk;
}

int cmd_geometry(const CommonArgs& common, const std::string& export_mesh_path) {
  const RunConfig cfg = common.load();
  const Domain domain = cfg.make_domain();
  const auto meshes = build_meshes(domain, cfg.levels);
  nlohmann::ordered_json j;
  j["tool"] = "speclab";
  j["version"] = kVersion;
  j["config_fingerprint"] = cfg.fingerprint();
  j["domain"] = domain.fingerprint();
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const auto q = geometric_quantities(domain, meshes[i]);
    const auto quality = check_mesh(meshes[i]);
    nlohmann::ordered_json jl;
    jl["level"] = cfg.levels[i];
    jl["triangles"] = meshes[i].triangle_count();
    jl["vertices"] = meshes[i].vertex_count();
    jl["min_angle_deg"] = quality.min_angle_deg;
    jl["r_max"] = q.r_max;
    jl["h_min"] = q.h_min;
    jl["h_max"] = q.h_max;
    jl["volume"] = q.volume;
    jl["boundary_length"] = q.boundary_length;
    jl["inertia2"] = q.inertia2;
    jl["centroid_residual"] = q.centroid_residual;
    jl["star_shaped"] = q.star_shaped;
    levels.push_back(std::move(jl));
  }
  j["levels"] = std::move(levels);
  std::cout << j.dump(2) << "\n";
  if (!export_mesh_path.empty()) export_mesh(meshes.back(), export_mesh_path);
  return kExitOk;
}

int cmd_convergence(const CommonArgs& common, const std::string& problem_name_arg) {
  const RunConfig cfg = common.load();
  const Domain domain = cfg.make_domain();
  const auto meshes = build_meshes(domain, cfg.levels);
  const Problem problem = problem_from_name(problem_name_arg);

  std::vector<SpectralResult> results;
  std::vector<double> hs;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    double h = 0;
    for (const auto& tri : meshes[i].triangles) {
      for (int k = 0; k < 3; ++k) {
        h = std::max(h, (meshes[i].vertices[tri[k]] -
                         meshes[i].vertices[tri[(k + 1) % 3]]).norm());
      }
    }
    hs.push_back(h);
    const ProblemWorkspace ws = make_workspace(domain, meshes[i], cfg.problem_options());
    SpectralResult r = solve_problem(problem, ws, cfg.k_max);
    r.mesh_level = cfg.levels[i];
    results.push_back(std::move(r));
  }

  CsvWriter csv({"level", "h", "index", "value", "richardson_order", "config_fingerprint",
                 "version"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (int k = 1; k <= results[i].count(); ++k) {
      std::string order;
      if (i + 2 < results.size() && results[i + 1].count() >= k &&
          results[i + 2].count() >= k) {
        const double d01 = results[i].value(k) - results[i + 1].value(k);
        const double d12 = results[i + 1].value(k) - results[i + 2].value(k);
        if (d01 * d12 > 0) {
          const double rate = std::log(std::abs(d01 / d12)) / std::log(hs[i] / hs[i + 1]);
          order = CsvWriter::number(rate);
        }
      }
      csv.add_row({std::to_string(results[i].mesh_level), CsvWriter::number(hs[i]),
                   std::to_string(k), CsvWriter::number(results[i].value(k)), order,
                   cfg.fingerprint(), kVersion});
    }
  }
  OutputTracker out;
  out.write(fs::path(cfg.out_dir) / (std::string("convergence_") + problem_name_arg + ".csv"),
            csv.str());
  std::printf("wrote %s\n", out.written.back().string().c_str());
  return kExitOk;
}

ScalarFieldSpec square_eigenfunction_field() {
  ScalarFieldSpec w;
  w.value = [](const Vec2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
  w.grad = [](const Vec2& x) {
    return Vec2(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
  };
  w.laplacian = [](const Vec2& x) {
    return -2.0 * M_PI * M_PI * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  return w;
}

ScalarFieldSpec harmonic_saddle_field() {
  ScalarFieldSpec w;
  w.value = [](const Vec2& x) { return x.x() * x.x() - x.y() * x.y(); };
  w.grad = [](const Vec2& x) { return Vec2(2 * x.x(), -2 * x.y()); };
  w.laplacian = [](const Vec2&) { return 0.0; };
  return w;
}

ScalarFieldSpec biharmonic_poly_field() {
  // x^4 - 3 x^2 y^2 is biharmonic with Delta w = 6(x^2 - y^2).
  ScalarFieldSpec w;
  w.value = [](const Vec2& p) {
    return std::pow(p.x(), 4) - 3.0 * p.x() * p.x() * p.y() * p.y();
  };
  w.grad = [](const Vec2& p) {
    return Vec2(4 * std::pow(p.x(), 3) - 6 * p.x() * p.y() * p.y(),
                -6 * p.x() * p.x() * p.y());
  };
  w.laplacian = [](const Vec2& p) { return 6 * p.x() * p.x() - 6 * p.y() * p.y(); };
  w.grad_laplacian = [](const Vec2& p) { return Vec2(12 * p.x(), -12 * p.y()); };
  w.bilaplacian = [](const Vec2&) { return 0.0; };
  return w;
}

Domain unit_square_cornered() {
  Domain d = make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}, Vec2(0.5, 0.5));
  d.name = "unit-square";
  return d;
}

int cmd_verify_rellich(const CommonArgs& common, const std::string& scenario) {
  const RunConfig cfg = common.load();
  nlohmann::ordered_json j;
  j["tool"] = "speclab";
  j["version"] = kVersion;
  j["scenario"] = scenario;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();

  auto record = [&](int level, const IdentityResidual& r) {
    nlohmann::ordered_json jl;
    jl["level"] = level;
    jl["lhs"] = r.lhs;
    nlohmann::ordered_json terms;
    for (const auto& [name, v] : r.rhs_terms) terms[name] = v;
    jl["rhs_terms"] = std::move(terms);
    jl["residual"] = r.residual;
    jl["relative_residual"] = r.relative_residual;
    levels.push_back(std::move(jl));
  };

  auto run_levels = [&](const Domain& d, auto&& body) {
    Mesh mesh = initial_mesh(d);
    int built = 0;
    for (int level : cfg.levels) {
      for (; built < level; ++built) mesh = refine(mesh, d);
      body(level, mesh);
    }
  };

  if (scenario == "square-eigen") {
    const Domain d = unit_square_cornered();
    const AnalyticField w(square_eigenfunction_field());
    const auto f = position_field(Vec2(0.5, 0.5));
    run_levels(d, [&](int level, const Mesh& mesh) {
      record(level, rellich_residual(d, mesh, w, f, 2.0 * M_PI * M_PI));
    });
  } else if (scenario == "disk-harmonic") {
    const Domain d = make_disk(1.0);
    const AnalyticField w(harmonic_saddle_field());
    const auto f = position_field();
    run_levels(d, [&](int level, const Mesh& mesh) {
      record(level, rellich_residual(d, mesh, w, f, 0.0));
    });
  } else if (scenario == "square-bipoly") {
    const Domain d = unit_square_cornered();
    const AnalyticField w(biharmonic_poly_field());
    const auto f = position_field(Vec2(0.5, 0.5));
    run_levels(d, [&](int level, const Mesh& mesh) {
      record(level, rellich2_residual(d, mesh, w, f, 0.0));
    });
  } else if (scenario == "polarized-square") {
    const Domain d = unit_square_cornered();
    ScalarFieldSpec ws_spec, vs_spec;
    ws_spec.value = [](const Vec2& p) { return p.x(); };
    ws_spec.grad = [](const Vec2&) { return Vec2(1, 0); };
    ws_spec.laplacian = [](const Vec2&) { return 0.0; };
    vs_spec.value = [](const Vec2& p) { return p.y(); };
    vs_spec.grad = [](const Vec2&) { return Vec2(0, 1); };
    vs_spec.laplacian = [](const Vec2&) { return 0.0; };
    const AnalyticField w(ws_spec), v(vs_spec);
    const auto f = position_field();
    run_levels(d, [&](int level, const Mesh& mesh) {
      record(level, polarized_residual(d, mesh, w, v, f));
    });
  } else if (scenario == "disk-buckling-fem") {
    const Domain d = make_disk(1.0);
    run_levels(d, [&](int level, const Mesh& mesh) {
      const ProblemWorkspace ws = make_workspace(d, mesh, cfg.problem_options());
      const SpectralResult buck = solve_problem(Problem::Buckling, ws, 1);
      const FemField w =
          FemField::with_laplacian(ws.space, buck.full_vectors.col(0),
                                   buck.lap_vectors.col(0), buck.eigen.values[0], true);
      record(level, rellich2_residual(d, mesh, w, position_field(), buck.eigen.values[0]));
    });
  } else if (scenario == "disk-dirichlet-grad-rho") {
    const Domain d = make_disk(1.0);
    run_levels(d, [&](int level, const Mesh& mesh) {
      const ProblemWorkspace ws = make_workspace(d, mesh, cfg.problem_options());
      const SpectralResult dir = solve_problem(Problem::Dirichlet, ws, 1);
      const FemField w =
          FemField::eigenfunction(ws.space, dir.full_vectors.col(0), dir.eigen.values[0]);
      record(level, rellich_residual(d, mesh, w, grad_rho_field(d), 0.0));
    });
  } else {
    throw ConfigError("unknown scenario '" + scenario +
                      "' (square-eigen, disk-harmonic, square-bipoly, polarized-square, "
                      "disk-buckling-fem, disk-dirichlet-grad-rho)");
  }
  j["levels"] = std::move(levels);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speclab: eigenvalue spectra, comparison constants, Rellich identity "
               "verification and spectral inequality checks on 2D domains"};
  app.require_subcommand(1);

  CommonArgs spectra_args, check_args, geometry_args, convergence_args, rellich_args;
  std::string fault, export_mesh_path, convergence_problem = "dirichlet";
  std::string scenario = "square-eigen";
  int cn = 2;
  double ck1 = 0, ck2 = 0, cr = 1.0;
  bool constants_json = false;

  auto* sp = app.add_subcommand("spectra", "solve the seven eigenvalue problems, write tables");
  add_common(sp, spectra_args);

  auto* ck = app.add_subcommand("check-inequalities", "run the full inequality suite");
  add_common(ck, check_args);
  ck->add_option("--fault-inject", fault, "test hook: inject a defect (corrupt-spectrum)")
      ->group("");

  auto* cs = app.add_subcommand("constants", "evaluate comparison constants C0..C3 and r0");
  cs->add_option("--n", cn, "dimension (>= 2)");
  cs->add_option("--kappa1", ck1, "lower sectional curvature bound");
  cs->add_option("--kappa2", ck2, "upper sectional curvature bound");
  cs->add_option("--rmax", cr, "outer radius r_max");
  cs->add_flag("--json", constants_json, "emit JSON");

  auto* ge = app.add_subcommand("geometry", "geometric quantities of a domain");
  add_common(ge, geometry_args);
  ge->add_option("--export-mesh", export_mesh_path, "also write the finest mesh (JSON schema)");

  auto* cv = app.add_subcommand("convergence", "eigenvalue-vs-h table with Richardson orders");
  add_common(cv, convergence_args);
  cv->add_option("--problem", convergence_problem,
                 "problem name (dirichlet, neumann, steklov, bsteklov1, bsteklov2, "
                 "buckling, clamped)");

  auto* vr = app.add_subcommand("verify-rellich", "evaluate identity residuals for a scenario");
  add_common(vr, rellich_args);
  vr->add_option("--scenario", scenario, "named built-in scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sp->parsed()) return cmd_spectra(spectra_args);
    if (ck->parsed()) return cmd_check(check_args, fault);
    if (cs->parsed()) return cmd_constants(cn, ck1, ck2, cr, constants_json);
    if (ge->parsed()) return cmd_geometry(geometry_args, export_mesh_path);
    if (cv->parsed()) return cmd_convergence(convergence_args, convergence_problem);
    if (vr->parsed()) return cmd_verify_rellich(rellich_args, scenario);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const MeshError& e) {
    std::fprintf(stderr, "mesh error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
