#pragma once

// Experiment reports: config echo, per-item rows, summary values, plot series,
// a SHA-256 content hash, and CSV / JSON / plot-data emission.

#include <string>
#include <utility>
#include <vector>

#include "hermite/runner/config.hpp"

namespace hermite::runner {

inline constexpr const char* kToolName = "hermite_lab";
inline constexpr const char* kToolVersion = "0.3.0";

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct ExperimentReport {
  std::string experiment;
  KeyValues config;           // full echo
  KeyValues semantic_config;  // the part covered by the hash
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<Series> series;
  std::string version = kToolVersion;
  std::string content_hash;

  double summary_value(const std::string& key) const;
};

// Hex SHA-256 of the canonical text of experiment, semantic config, columns,
// rows, summary and series (numbers in shortest round-trip form).
std::string compute_content_hash(const ExperimentReport& r);
void seal(ExperimentReport& r);

std::string to_csv(const ExperimentReport& r);
std::string to_json(const ExperimentReport& r);
ExperimentReport from_json(const std::string& text);
// "x y" lines, one point per line.
std::string to_plot_data(const Series& s);

// Writes <experiment>.csv or <experiment>.json and <experiment>_<series>.dat into dir.
// Returns the written paths; throws IoError.
std::vector<std::string> write_report(const ExperimentReport& r, const std::string& dir, const std::string& format);
std::string read_text_file(const std::string& path);

}  // namespace hermite::runner
