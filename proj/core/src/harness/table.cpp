#include "snls/harness/table.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "snls/error.hpp"
#include "snls/harness/config.hpp"

namespace snls::harness {
namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw InvalidParameter("table " + name + ": row has " + std::to_string(row.size()) +
                           " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

double ExperimentResult::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw InvalidParameter("experiment " + experiment + " has no metric " + key);
}

std::string render_csv(const Table& table, const Manifest& header, const std::string& timestamp) {
  std::ostringstream out;
  out << "# table: " << table.name << "\n";
  for (const auto& [k, v] : header) out << "# " << k << ": " << v << "\n";
  if (!timestamp.empty()) out << "# timestamp: " << timestamp << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_escape(table.columns[i]);
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string strip_timestamp(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp:", 0) == 0) continue;
    out << line << "\n";
  }
  return out.str();
}

std::vector<std::string> write_outputs(const ExperimentResult& result, const Manifest& header,
                                       const std::string& directory, const std::string& timestamp,
                                       unsigned threads) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  std::vector<std::string> written;
  nlohmann::ordered_json manifest;
  manifest["experiment"] = result.experiment;
  for (const auto& [k, v] : header) manifest["header"][k] = v;
  manifest["verdict"] = result.pass ? "PASS" : "FAIL";
  manifest["findings"] = result.findings;
  for (const auto& [k, v] : result.metrics) {
    manifest["metrics"][k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(format_number(v));
  }
  manifest["threads"] = threads;
  manifest["timestamp"] = timestamp;
  for (const auto& table : result.tables) {
    const fs::path path = fs::path(directory) / (table.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << render_csv(table, header, timestamp);
    written.push_back(path.string());
    manifest["tables"].push_back({{"name", table.name},
                                  {"file", path.filename().string()},
                                  {"columns", table.columns},
                                  {"rows", table.rows.size()}});
  }
  const fs::path mpath = fs::path(directory) / (result.experiment + ".manifest.json");
  std::ofstream mout(mpath, std::ios::binary);
  if (!mout) throw Error("cannot write " + mpath.string());
  mout << manifest.dump(2) << "\n";
  written.push_back(mpath.string());
  return written;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace snls::harness
