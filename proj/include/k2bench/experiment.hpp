#pragma once

#include "k2bench/evaluation.hpp"
#include "k2bench/generate.hpp"
#include "k2bench/k2.hpp"
#include "k2bench/regression.hpp"
#include "k2bench/sampler.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace k2bench {

struct ExperimentConfig {
  std::size_t pair_count = 67;
  /// Required; there is deliberately no default.
  std::optional<std::uint64_t> seed;
  GenerationConfig generation;  // its seed field is ignored
  CaseCountBounds cases;
  std::size_t max_parents = 10;
  /// Empty: nothing is written.
  std::filesystem::path output_dir;
  /// Per-pair gold/induced networks and case files. Gold networks with many
  /// ternary parents run to tens of megabytes.
  bool write_pair_artifacts = true;
  std::size_t jobs = 1;
};

void check(const ExperimentConfig& cfg);

/// Pairs are numbered from 1. Seed layout: pair i uses derive_seed(seed, i); within a pair, stream 1
/// drives generation and stream 2 drives the case count and sampling.
std::uint64_t pair_seed(std::uint64_t experiment_seed, std::size_t pair);
constexpr std::uint64_t kGenerationStream = 1;
constexpr std::uint64_t kSamplingStream = 2;

struct PairOutcome {
  std::size_t pair = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  EvaluationRecord record;
  std::vector<std::string> artifacts;  // relative to the output directory
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<PairOutcome> pairs;
  std::optional<Summary> summary;
  std::string summary_error;
  std::vector<RegressionFit> fits;
  std::vector<std::string> artifacts;
  std::size_t failed = 0;

  std::vector<EvaluationRecord> records() const;
};

/// Generate -> count -> sample -> K2 with the gold ordering -> compare.
/// Stage failures are caught and reported on the outcome.
PairOutcome run_pair(const ExperimentConfig& cfg, std::size_t pair);

/// Every pair, then describe, stratify and fit. Writes all artifacts and a
/// manifest when an output directory is set.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json manifest_json(const ExperimentReport& report);

/// Plot coordinates for arcs-vs-cases (per ordinality), metrics-vs-cases and
/// metrics-vs-variables.
std::string plot_arcs_vs_cases_csv(std::span<const EvaluationRecord> records, std::size_t ordinality);
std::string plot_metrics_vs_cases_csv(std::span<const EvaluationRecord> records);
std::string plot_metrics_vs_variables_csv(std::span<const EvaluationRecord> records);

}  // namespace k2bench
