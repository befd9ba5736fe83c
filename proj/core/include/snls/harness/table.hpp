#pragma once

#include <string>
#include <utility>
#include <vector>

namespace snls::harness {

/// A named CSV table. Every row carries the full parameter tuple.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Throws InvalidParameter when the row width does not match the columns.
  void add_row(std::vector<std::string> row);
};

/// Outcome of one experiment: tables, a verdict and human-readable findings.
struct ExperimentResult {
  std::string experiment;
  std::vector<Table> tables;
  bool pass = true;
  std::vector<std::string> findings;
  /// Named scalar summaries for programmatic checks.
  std::vector<std::pair<std::string, double>> metrics;

  double metric(const std::string& key) const;
};

/// Header lines written as "# key: value" before the CSV body.
using Manifest = std::vector<std::pair<std::string, std::string>>;

/// CSV body with a '#'-prefixed header block. The timestamp line, when
/// present, is the only one that varies between identical runs.
std::string render_csv(const Table& table, const Manifest& header, const std::string& timestamp);

/// Drops "# timestamp:" lines, for byte comparisons of reruns.
std::string strip_timestamp(const std::string& csv);

/// Writes each table to <directory>/<table.name>.csv and a manifest.json.
/// Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentResult& result, const Manifest& header,
                                       const std::string& directory, const std::string& timestamp,
                                       unsigned threads);

/// UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace snls::harness
