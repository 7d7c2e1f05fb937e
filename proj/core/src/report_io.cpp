#include "speclab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace speclab {

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) throw Error("CSV row width mismatch");
  rows_.push_back(std::move(fields));
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

nlohmann::ordered_json bound_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string CsvWriter::str() const {
  std::string out = join_row(header_);
  for (const auto& r : rows_) out += join_row(r);
  return out;
}

nlohmann::ordered_json report_to_json(const std::vector<InequalityReport>& reports,
                                      const std::string& fingerprint) {
  nlohmann::ordered_json root;
  root["tool"] = "speclab";
  root["version"] = kVersion;
  root["config_fingerprint"] = fingerprint;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    nlohmann::ordered_json jr;
    jr["domain"] = rep.domain_fingerprint;
    jr["mesh_level"] = rep.mesh_level;
    jr["passed"] = rep.passed;
    jr["failed"] = rep.failed;
    jr["skipped"] = rep.skipped;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
      nlohmann::ordered_json jc;
      jc["name"] = c.name;
      jc["paper_ref"] = c.reference;
      jc["lhs"] = bound_json(c.lhs);
      jc["rhs"] = bound_json(c.rhs);
      jc["relation"] = c.relation == '<' ? "<=" : ">=";
      jc["slack"] = bound_json(c.slack);
      jc["verdict"] = verdict_name(c.verdict);
      jc["reason"] = c.reason;
      jc["trivial"] = c.trivial;
      jc["inputs"] = c.inputs;
      jc["discretization_slack"] = c.discretization_slack;
      checks.push_back(std::move(jc));
    }
    jr["checks"] = std::move(checks);
    levels.push_back(std::move(jr));
  }
  root["levels"] = std::move(levels);
  return root;
}

std::string report_to_csv(const std::vector<InequalityReport>& reports,
                          const std::string& fingerprint) {
  CsvWriter csv({"level", "name", "paper_ref", "lhs", "rhs", "relation", "slack", "verdict",
                 "reason", "config_fingerprint", "version"});
  for (const auto& rep : reports) {
    for (const auto& c : rep.checks) {
      csv.add_row({std::to_string(rep.mesh_level), c.name, c.reference,
                   std::isinf(c.lhs) ? "inf" : CsvWriter::number(c.lhs),
                   std::isinf(c.rhs) ? "inf" : CsvWriter::number(c.rhs),
                   c.relation == '<' ? "<=" : ">=",
                   std::isinf(c.slack) ? "inf" : CsvWriter::number(c.slack),
                   verdict_name(c.verdict), c.reason, fingerprint, kVersion});
    }
  }
  return csv.str();
}

std::string spectra_to_csv(const std::vector<SpectralResult>& levels,
                           const std::string& fingerprint) {
  CsvWriter csv({"level", "index", "value", "cluster_id", "residual", "config_fingerprint",
                 "version"});
  for (const auto& res : levels) {
    for (int i = 0; i < res.count(); ++i) {
      int cluster_id = 0;
      for (std::size_t c = 0; c < res.eigen.clusters.size(); ++c) {
        const auto& cl = res.eigen.clusters[c];
        if (i >= cl.first && i < cl.first + cl.count) cluster_id = static_cast<int>(c);
      }
      csv.add_row({std::to_string(res.mesh_level), std::to_string(i + 1),
                   CsvWriter::number(res.eigen.values[i]), std::to_string(cluster_id),
                   CsvWriter::number(res.eigen.residual_norms[i]), fingerprint, kVersion});
    }
  }
  return csv.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + path);
  f << text;
}

}  // namespace speclab
