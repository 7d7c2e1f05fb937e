#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speclab/constants.hpp"
#include "speclab/problems.hpp"
#include "speclab/rellich.hpp"

namespace speclab {

enum class Verdict { Pass, Fail, Skipped };
const char* verdict_name(Verdict v);

/// One evaluated inequality: lhs REL rhs with REL in {<=, >=}. The signed
/// slack is nonnegative exactly when the relation holds; the verdict widens
/// both sides by the relative discretization slack first. rhs = +inf encodes
/// a degenerate (trivially true) bound and is flagged `trivial`.
struct InequalityCheck {
  std::string name;
  std::string reference;  // formula-style citation, emitted as "paper_ref"
  double lhs = 0;
  double rhs = 0;
  char relation = '<';  // '<' : lhs <= rhs, '>' : lhs >= rhs
  double slack = 0;
  Verdict verdict = Verdict::Skipped;
  std::string reason;
  std::string inputs;
  double discretization_slack = 0.02;
  bool trivial = false;
};

struct InequalityReport {
  std::string domain_fingerprint;
  int mesh_level = 0;
  std::vector<InequalityCheck> checks;
  int passed = 0, failed = 0, skipped = 0;

  void finalize();  // sorts checks by name and recounts verdicts
  bool all_passed() const { return failed == 0; }
};

/// Spectra needed by the checks at one mesh level, plus the level below for
/// the multiplicity-stability protocol.
struct SuiteLevelData {
  const GeometricQuantities* geom = nullptr;
  const ConstantsBundle* constants = nullptr;
  const SpectralResult* dirichlet = nullptr;
  const SpectralResult* neumann = nullptr;
  const SpectralResult* steklov = nullptr;
  const SpectralResult* bsteklov1 = nullptr;
  const SpectralResult* bsteklov2 = nullptr;
  const SpectralResult* neumann_prev = nullptr;    // coarser level (optional)
  const SpectralResult* dirichlet_prev = nullptr;  // coarser level (optional)
};

// Individual check families (usable directly in tests). k_range is the
// largest eigenvalue index examined.
std::vector<InequalityCheck> check_xi_lower_bounds(const SuiteLevelData& d, int k_range,
                                                   double slack);
std::optional<InequalityCheck> check_steklov_lower(const Domain& domain,
                                                   const SuiteLevelData& d, double slack);
std::vector<InequalityCheck> check_dirichlet_eta_bounds(const Domain& domain,
                                                        const SuiteLevelData& d, int k_range,
                                                        double slack);
std::vector<InequalityCheck> check_xi_upper_bounds(const Domain& domain,
                                                   const SuiteLevelData& d, int k_range,
                                                   double slack);
std::vector<InequalityCheck> check_centroid_bounds(const Domain& domain,
                                                   const SuiteLevelData& d, double slack);
std::vector<InequalityCheck> check_table1(const Domain& domain, const SuiteLevelData& d,
                                          double slack);
std::vector<InequalityCheck> check_boundary_bounds(const ProblemWorkspace& ws,
                                                   const SpectralResult* dirichlet,
                                                   const SpectralResult* buckling,
                                                   double slack);

struct SuiteConfig {
  Domain domain;
  std::vector<int> levels = {2, 3};  // refinement counts of initial_mesh
  int k_max = 4;
  double slack = 0.02;
  ProblemOptions problem_options;
  /// test hook: non-empty name injects a deliberate defect ("corrupt-spectrum")
  std::string fault_injection;
};

/// Runs every applicable check on each mesh level. Component failures mark
/// dependent checks skipped instead of aborting the suite.
std::vector<InequalityReport> run_suite(const SuiteConfig& config);

}  // namespace speclab
