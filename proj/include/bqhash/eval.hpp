#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bqhash/core.hpp"

namespace bqhash {

/// Codes packed one sign bit per entry (+1 -> 1), 64 bits per word, one
/// contiguous block of words per sample.
class PackedCodes {
 public:
  explicit PackedCodes(const CodeMatrix& z);

  std::size_t bits() const noexcept { return bits_; }
  std::size_t samples() const noexcept { return samples_; }
  std::size_t words_per_code() const noexcept { return words_; }

  std::span<const std::uint64_t> code(std::size_t sample) const noexcept {
    return {words_data_.data() + sample * words_, words_};
  }

 private:
  std::size_t bits_;
  std::size_t samples_;
  std::size_t words_;
  std::vector<std::uint64_t> words_data_;
};

std::size_t hamming_distance(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b) noexcept;

/// Distances from every query to every database item (queries x database).
std::vector<std::vector<std::uint32_t>> hamming_distances(const CodeMatrix& queries,
                                                          const CodeMatrix& database);

struct RetrievalGroundTruth {
  std::vector<int> query_labels;
  std::vector<int> database_labels;
};

struct MetricsReport {
  double map = 0.0;
  double precision_at_r2 = 0.0;
  std::vector<double> per_query_ap;
  std::optional<double> knn_accuracy;
};

using Ranking = std::vector<std::vector<std::size_t>>;

/// Per query, database indices by ascending Hamming distance; ties by index.
Ranking hamming_rank(const CodeMatrix& queries, const CodeMatrix& database);

/// Average precision of each query over the full ranking. A query with no
/// relevant items scores 0.
std::vector<double> average_precisions(const Ranking& ranking, const RetrievalGroundTruth& truth);

double mean_average_precision(const Ranking& ranking, const RetrievalGroundTruth& truth);

/// Mean over queries of the precision among items within Hamming distance 2;
/// an empty retrieval set counts as precision 0.
double precision_at_radius2(const CodeMatrix& queries, const CodeMatrix& database,
                            const RetrievalGroundTruth& truth);

/// Majority label among the k nearest database items (distance ties by index,
/// vote ties to the smallest label).
std::vector<int> knn_classify(const CodeMatrix& queries, const CodeMatrix& database,
                              std::span<const int> database_labels, std::size_t k);

/// All retrieval metrics; kNN accuracy is included when knn_k is given.
MetricsReport evaluate(const CodeMatrix& queries, const CodeMatrix& database,
                       const RetrievalGroundTruth& truth, std::optional<std::size_t> knn_k = {});

}  // namespace bqhash
