#include "speclab/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "speclab/report_io.hpp"

namespace speclab {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
};

using Section = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const RawValue& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v.text, &pos);
    if (pos != v.text.size()) throw std::invalid_argument("trailing junk");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key +
                      "' expects a number, got '" + v.text + "'");
  }
}

std::vector<double> parse_list(const RawValue& v, const std::string& key) {
  std::string t = trim(v.text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw ConfigError("config line " + std::to_string(v.line) + ": key '" + key +
                      "' expects a [list]");
  }
  t = t.substr(1, t.size() - 2);
  std::vector<double> out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(v.line) + ": bad list entry '" +
                        item + "'");
    }
  }
  return out;
}

std::string parse_string(const RawValue& v) {
  std::string t = trim(v.text);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
  return t;
}

}  // namespace

std::string RunConfig::fingerprint() const { return fnv1a_hex(source_text); }

Domain RunConfig::make_domain() const {
  Domain d;
  if (preset == "disk") {
    d = make_disk(radius);
  } else if (preset == "rectangle") {
    d = make_rectangle(width, height);
  } else if (preset == "ellipse") {
    d = make_ellipse(semi_a, semi_b);
  } else if (preset == "polygon") {
    if (vertices.size() < 6 || vertices.size() % 2 != 0) {
      throw ConfigError("polygon preset needs vertices = [x0,y0,x1,y1,...] with >= 3 points");
    }
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i + 1 < vertices.size(); i += 2) {
      pts.emplace_back(vertices[i], vertices[i + 1]);
    }
    d = make_polygon(std::move(pts), base_point_set ? base_point : Vec2::Zero());
  } else if (preset == "blob") {
    d = make_blob();
  } else if (preset == "lshape") {
    d = make_lshape(base_point_set ? base_point : Vec2(1.5, 0.5));
  } else if (preset == "hyperbolic-disk") {
    d = make_hyperbolic_disk(geodesic_radius, kappa == 0.0 ? -1.0 : kappa);
  } else if (preset == "spherical-cap") {
    d = make_spherical_cap(geodesic_radius, kappa == 0.0 ? 1.0 : kappa);
  } else {
    throw ConfigError("unknown domain preset: '" + preset + "'");
  }
  if (base_point_set && preset != "polygon" && preset != "lshape") {
    if (d.metric.kind() != CurvatureKind::Euclidean && base_point.norm() != 0) {
      throw ConfigError("curved presets fix the base point at the chart origin");
    }
    d.base_point = base_point;
  }
  return d;
}

ProblemOptions RunConfig::problem_options() const {
  ProblemOptions opt;
  opt.order = order;
  opt.solver.tol = tol;
  opt.solver.cluster_tol = cluster_tol;
  opt.solver.dense_threshold = dense_threshold;
  opt.solver.seed = seed;
  opt.solver.sigma_rel = sigma_rel;
  return opt;
}

SuiteConfig RunConfig::suite_config() const {
  SuiteConfig sc;
  sc.domain = make_domain();
  sc.levels.assign(levels.begin(), levels.end());
  sc.k_max = k_max;
  sc.slack = slack;
  sc.problem_options = problem_options();
  return sc;
}

RunConfig parse_config_text(const std::string& text) {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"domain",
       {"preset", "radius", "width", "height", "a", "b", "kappa", "geodesic_radius",
        "vertices", "base_point"}},
      {"mesh", {"levels", "order"}},
      {"solver", {"k_max", "tol", "cluster_tol", "dense_threshold", "seed", "sigma_rel"}},
      {"checks", {"slack"}},
      {"output", {"dir"}},
  };
  static const std::map<std::string, std::set<std::string>> preset_keys = {
      {"disk", {"preset", "radius", "base_point"}},
      {"rectangle", {"preset", "width", "height", "base_point"}},
      {"ellipse", {"preset", "a", "b", "base_point"}},
      {"polygon", {"preset", "vertices", "base_point"}},
      {"blob", {"preset"}},
      {"lshape", {"preset", "base_point"}},
      {"hyperbolic-disk", {"preset", "kappa", "geodesic_radius"}},
      {"spherical-cap", {"preset", "kappa", "geodesic_radius"}},
  };

  std::map<std::string, Section> doc;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) +
                                                ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema.count(section)) {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!schema.at(section).count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    }
    if (doc[section].count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                        "'");
    }
    doc[section][key] = RawValue{value, lineno};
  }

  RunConfig cfg;
  cfg.source_text = text;
  if (doc.count("domain")) {
    const auto& s = doc["domain"];
    if (s.count("preset")) cfg.preset = parse_string(s.at("preset"));
    // reject keys that do not belong to the chosen preset
    const auto it = preset_keys.find(cfg.preset);
    if (it == preset_keys.end()) throw ConfigError("unknown domain preset: '" + cfg.preset + "'");
    for (const auto& [key, raw] : s) {
      if (!it->second.count(key)) {
        throw ConfigError("config line " + std::to_string(raw.line) + ": key '" + key +
                          "' does not apply to preset '" + cfg.preset + "'");
      }
    }
    if (s.count("radius")) cfg.radius = parse_number(s.at("radius"), "radius");
    if (s.count("width")) cfg.width = parse_number(s.at("width"), "width");
    if (s.count("height")) cfg.height = parse_number(s.at("height"), "height");
    if (s.count("a")) cfg.semi_a = parse_number(s.at("a"), "a");
    if (s.count("b")) cfg.semi_b = parse_number(s.at("b"), "b");
    if (s.count("kappa")) cfg.kappa = parse_number(s.at("kappa"), "kappa");
    if (s.count("geodesic_radius")) {
      cfg.geodesic_radius = parse_number(s.at("geodesic_radius"), "geodesic_radius");
    }
    if (s.count("vertices")) cfg.vertices = parse_list(s.at("vertices"), "vertices");
    if (s.count("base_point")) {
      const auto bp = parse_list(s.at("base_point"), "base_point");
      if (bp.size() != 2) throw ConfigError("base_point expects [x, y]");
      cfg.base_point = Vec2(bp[0], bp[1]);
      cfg.base_point_set = true;
    }
  }
  if (doc.count("mesh")) {
    const auto& s = doc["mesh"];
    if (s.count("levels")) {
      cfg.levels.clear();
      for (double v : parse_list(s.at("levels"), "levels")) {
        const int l = static_cast<int>(v);
        if (l < 0 || l != v) throw ConfigError("mesh levels must be non-negative integers");
        cfg.levels.push_back(l);
      }
      if (cfg.levels.empty()) throw ConfigError("mesh levels list is empty");
    }
    if (s.count("order")) {
      cfg.order = static_cast<int>(parse_number(s.at("order"), "order"));
      if (cfg.order != 1 && cfg.order != 2) throw ConfigError("mesh order must be 1 or 2");
    }
  }
  if (doc.count("solver")) {
    const auto& s = doc["solver"];
    if (s.count("k_max")) cfg.k_max = static_cast<int>(parse_number(s.at("k_max"), "k_max"));
    if (cfg.k_max < 1) throw ConfigError("k_max must be >= 1");
    if (s.count("tol")) cfg.tol = parse_number(s.at("tol"), "tol");
    if (s.count("cluster_tol")) cfg.cluster_tol = parse_number(s.at("cluster_tol"), "cluster_tol");
    if (s.count("dense_threshold")) {
      cfg.dense_threshold = static_cast<int>(parse_number(s.at("dense_threshold"), "dense_threshold"));
    }
    if (s.count("seed")) {
      cfg.seed = static_cast<unsigned long long>(parse_number(s.at("seed"), "seed"));
    }
    if (s.count("sigma_rel")) cfg.sigma_rel = parse_number(s.at("sigma_rel"), "sigma_rel");
  }
  if (doc.count("checks")) {
    const auto& s = doc["checks"];
    if (s.count("slack")) {
      cfg.slack = parse_number(s.at("slack"), "slack");
      if (cfg.slack < 0 || cfg.slack > 0.5) throw ConfigError("slack must lie in [0, 0.5]");
    }
  }
  if (doc.count("output")) {
    const auto& s = doc["output"];
    if (s.count("dir")) cfg.out_dir = parse_string(s.at("dir"));
  }
  cfg.make_domain();  // validates preset parameters
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace speclab
