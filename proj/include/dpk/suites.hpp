#pragma once

// Seeded property suites. Trial t draws its instance from
// Rng(trial_seed(seed, t)); results are collected in trial order so reports
// are reproducible byte for byte when metadata is excluded.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpk/io.hpp"

namespace dpk {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int trials = 300;
  Index head_size = 24;
  Index period = 3;
  /// Replaces the threshold of every residual check (not of exact checks).
  std::optional<double> tolerance;
  std::string suite;
};

/// ConfigError unless trials >= 1, period >= 1 and period | head_size.
void validate(const ExperimentConfig& config);

struct CaseResult {
  std::uint64_t trial = 0;
  bool pass = true;
  std::vector<std::pair<std::string, double>> residuals;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  ExperimentConfig config;
  int passed = 0;
  int failed = 0;
  int no_convergence = 0;
  std::vector<std::pair<std::string, double>> worst;
  double wall_time_seconds = 0.0;
  std::vector<CaseResult> cases;
};

std::vector<std::string> suite_names();
SuiteReport run_suite(const ExperimentConfig& config);

io::Json report_to_json(const SuiteReport& report, bool include_meta);
std::string report_to_csv(const SuiteReport& report);

/// kind in {operator, unitary, projection, positive, functional, permutation}.
io::Json generate_instance(const ExperimentConfig& config, const std::string& kind, std::uint64_t trial);

}  // namespace dpk
