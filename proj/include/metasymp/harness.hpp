#pragma once

// Seeded property suites, one per identity, with JSON/CSV reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace metasymp {

struct SuiteConfig {
  std::string suite_name;
  std::vector<int> n_range;             // empty: suite default
  std::optional<int> trials;            // suite default when unset
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;  // overrides of the suite's defaults
  double tol_scale = 1.0;               // multiplies every tolerance
  std::optional<std::size_t> n_basis;
  std::optional<std::size_t> grid_n;
  std::optional<double> grid_xmax;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string digest;   // short hash of the inputs
  double residual = 0.0;
  bool pass = false;
  nlohmann::json inputs;  // enough to rerun the trial
  std::string note;
};

struct SuiteReport {
  std::string suite_name;
  std::string claim;
  nlohmann::json config;
  std::map<std::string, double> tolerances;
  std::vector<TrialRecord> trials;
  int passes = 0;
  int rejections = 0;
  double max_residual = 0.0;
  double seconds = 0.0;

  bool passed() const { return passes == static_cast<int>(trials.size()) && !trials.empty(); }
  /// timing=false omits the wall time so equal seeds give equal output.
  nlohmann::json to_json(bool timing = true) const;
};

struct SuiteInfo {
  std::string name;
  std::string claim;
};

const std::vector<SuiteInfo>& registered_suites();

/// Throws UnknownSuite.
SuiteReport run_suite(const SuiteConfig& config);

std::vector<SuiteReport> run_all(std::uint64_t seed, double tol_scale = 1.0);

/// suite,trials,passes,max_residual,seconds
std::string csv_summary(const std::vector<SuiteReport>& reports);

}  // namespace metasymp
