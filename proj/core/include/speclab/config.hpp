#pragma once

#include <string>
#include <vector>

#include "speclab/geometry.hpp"
#include "speclab/inequalities.hpp"
#include "speclab/problems.hpp"

namespace speclab {

/// Parsed run configuration. The on-disk format is a flat sectioned key/value
/// document ([section] headers, key = value lines, '#' comments) with a strict
/// schema: unknown sections or keys are rejected.
struct RunConfig {
  // [domain]
  std::string preset = "disk";
  double radius = 1.0;
  double width = 1.0, height = 1.0;
  double semi_a = 2.0, semi_b = 1.0;
  double kappa = 0.0;
  double geodesic_radius = 1.0;
  std::vector<double> vertices;  // flat x0,y0,x1,y1,...
  Vec2 base_point = Vec2::Zero();
  bool base_point_set = false;

  // [mesh]
  std::vector<int> levels = {2, 3};
  int order = 2;

  // [solver]
  int k_max = 4;
  double tol = 1e-9;
  double cluster_tol = 5e-3;
  int dense_threshold = 2000;
  unsigned long long seed = 0x5eed1ab5ULL;
  double sigma_rel = 1e-8;

  // [checks]
  double slack = 0.02;

  // [output]
  std::string out_dir = "out";

  std::string source_text;   // raw document, hashed into the fingerprint
  std::string fingerprint() const;

  Domain make_domain() const;
  ProblemOptions problem_options() const;
  SuiteConfig suite_config() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace speclab
