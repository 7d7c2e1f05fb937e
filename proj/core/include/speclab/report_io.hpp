#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "speclab/inequalities.hpp"
#include "speclab/problems.hpp"

namespace speclab {

/// 17-significant-digit decimal text (round-trips doubles exactly).
std::string format_sig17(double v);

/// FNV-1a 64-bit hash as fixed-width hex; used for config fingerprints.
std::string fnv1a_hex(const std::string& text);

/// RFC-4180 CSV writer: quotes fields containing separators/quotes, '.'
/// decimal point, 17 significant digits for numbers.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(std::vector<std::string> fields);
  std::string str() const;
  static std::string number(double v) { return format_sig17(v); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Stable-key-order JSON for an inequality report sequence (one entry per
/// mesh level). Infinite bounds are emitted as the string "inf".
nlohmann::ordered_json report_to_json(const std::vector<InequalityReport>& reports,
                                      const std::string& fingerprint);
std::string report_to_csv(const std::vector<InequalityReport>& reports,
                          const std::string& fingerprint);

/// Per-problem eigenvalue table: level,index,value,cluster_id,residual.
std::string spectra_to_csv(const std::vector<SpectralResult>& levels,
                           const std::string& fingerprint);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace speclab
