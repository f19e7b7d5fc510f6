#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bqhash/core.hpp"
#include "bqhash/driver.hpp"
#include "bqhash/eval.hpp"
#include "bqhash/similarity.hpp"

namespace bqhash {

/// Fully-resolved experiment settings. Serialized as JSON; keys mirror the
/// CLI flags.
struct ExperimentConfig {
  std::filesystem::path train;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> query;
  std::optional<std::filesystem::path> query_labels;
  std::filesystem::path out_dir = "bqhash_out";

  SimilarityMode mode = SimilarityMode::Supervised;
  bool normalize = false;
  InferenceConfig inference;
  double encoder_ridge = 1e-3;
  std::size_t knn_k = 4;

  void validate() const;
};

std::string to_json(const ExperimentConfig& config);

/// Overlays the keys present in `json_text` onto `base`. Unknown keys are a
/// ConfigError.
ExperimentConfig merge_json(ExperimentConfig base, const std::string& json_text);

struct ExperimentResult {
  CodeMatrix codes;
  CodeMatrix initial_codes;
  InferenceTrace trace;
  std::optional<MetricsReport> train_metrics;    // train codes vs themselves
  std::optional<MetricsReport> initial_metrics;  // same, for the initialization
  std::optional<MetricsReport> query_metrics;    // encoded queries vs train codes
  double wall_time = 0.0;
};

/// Loads data, infers codes, evaluates, and writes codes.csv, trace.jsonl,
/// metrics.json and config.json (plus query_codes.csv with a query split)
/// into out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SyntheticData {
  DenseMatrix x;  // D x n, unit-norm columns
  std::vector<int> labels;
};

/// Two Gaussian clusters around antipodal-ish unit centers, projected to the
/// unit sphere. `spread` is the per-coordinate noise standard deviation.
SyntheticData make_two_cluster_data(std::size_t n, std::size_t dims, double spread,
                                    std::uint64_t seed);

}  // namespace bqhash
