#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvframe/serialize.hpp"

namespace mvframe {

struct ExperimentConfig {
  std::vector<int> group;
  int rows = 1;  // s
  int cols = 1;  // r
  std::string construction;
  json params = json::object();
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::string output;

  double tolerance(const std::string& name, double fallback) const;
};

// Validates field by field; ConfigError::path is a JSON pointer to the
// offending field.
ExperimentConfig parse_config(const json& doc);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  json doc;      // deterministic; what lands in <prefix>.report.json
  json timings;  // wall clock, printed but never persisted
  std::optional<CsvTable> table;
  bool all_pass = false;
};

RunReport run_experiment(const ExperimentConfig& config);

// The three fixed counterexamples (entry swap, its orbit family, transpose);
// s = r = 2 on the given group.
RunReport suite_counterexamples(const std::vector<int>& group_orders);

struct PropertySuiteOptions {
  std::uint64_t seed = 1;
  int trials = 100;
  std::vector<int> group{8};
  int rows = 2;
  int cols = 2;
  // Swaps one generator for the non-adjointable entry swap; the suite must
  // then fail and serialize the witness.
  bool inject_entry_swap = false;
};

RunReport suite_random_properties(const PropertySuiteOptions& options);

// Writes <prefix>.report.json (and <prefix>.table.csv when a table is
// attached); returns the paths written.
std::vector<std::string> write_report_files(const RunReport& report,
                                            const std::string& prefix);

// 17 significant digits; round-trip exact doubles.
std::string format_double(double v);

// Parallelism cap from MVFRAME_THREADS (>= 1); hardware default.
int max_threads();

}  // namespace mvframe
