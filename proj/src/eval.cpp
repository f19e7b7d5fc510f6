#include "bqhash/eval.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

namespace bqhash {

namespace {

void check_lengths(const CodeMatrix& q, const CodeMatrix& db, const char* where) {
  if (q.bits() != db.bits()) {
    throw DimensionError(std::string(where) + ": query codes have " + std::to_string(q.bits()) +
                         " bits, database codes have " + std::to_string(db.bits()));
  }
}

void check_truth(const CodeMatrix& q, const CodeMatrix& db, const RetrievalGroundTruth& truth,
                 const char* where) {
  if (truth.query_labels.size() != q.samples() ||
      truth.database_labels.size() != db.samples()) {
    throw DimensionError(std::string(where) + ": label counts do not match code counts");
  }
}

}  // namespace

PackedCodes::PackedCodes(const CodeMatrix& z)
    : bits_(z.bits()), samples_(z.samples()), words_((z.bits() + 63) / 64) {
  words_data_.assign(samples_ * words_, 0);
  for (std::size_t k = 0; k < bits_; ++k) {
    const auto row = z.row(k);
    const std::uint64_t mask = std::uint64_t{1} << (k % 64);
    const std::size_t word = k / 64;
    for (std::size_t j = 0; j < samples_; ++j)
      if (row[j] > 0) words_data_[j * words_ + word] |= mask;
  }
}

std::size_t hamming_distance(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b) noexcept {
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.size(); ++w) d += std::popcount(a[w] ^ b[w]);
  return d;
}

std::vector<std::vector<std::uint32_t>> hamming_distances(const CodeMatrix& queries,
                                                          const CodeMatrix& database) {
  check_lengths(queries, database, "hamming_distances");
  const PackedCodes q(queries);
  const PackedCodes db(database);
  std::vector<std::vector<std::uint32_t>> out(q.samples(),
                                              std::vector<std::uint32_t>(db.samples()));
  for (std::size_t i = 0; i < q.samples(); ++i)
    for (std::size_t j = 0; j < db.samples(); ++j)
      out[i][j] = static_cast<std::uint32_t>(hamming_distance(q.code(i), db.code(j)));
  return out;
}

Ranking hamming_rank(const CodeMatrix& queries, const CodeMatrix& database) {
  const auto dist = hamming_distances(queries, database);
  const std::size_t bits = queries.bits();
  Ranking out(dist.size());
  // Counting sort on distance keeps ascending index order within a bucket.
  std::vector<std::size_t> offsets(bits + 2);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    std::fill(offsets.begin(), offsets.end(), 0);
    for (std::uint32_t d : dist[i]) ++offsets[d + 1];
    for (std::size_t b = 1; b < offsets.size(); ++b) offsets[b] += offsets[b - 1];
    out[i].resize(dist[i].size());
    for (std::size_t j = 0; j < dist[i].size(); ++j) out[i][offsets[dist[i][j]]++] = j;
  }
  return out;
}

std::vector<double> average_precisions(const Ranking& ranking,
                                       const RetrievalGroundTruth& truth) {
  if (ranking.size() != truth.query_labels.size()) {
    throw DimensionError("average_precisions: ranking/query label count mismatch");
  }
  std::vector<double> ap(ranking.size(), 0.0);
  for (std::size_t q = 0; q < ranking.size(); ++q) {
    if (ranking[q].size() != truth.database_labels.size()) {
      throw DimensionError("average_precisions: ranking does not cover the database");
    }
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t r = 0; r < ranking[q].size(); ++r) {
      if (truth.database_labels[ranking[q][r]] == truth.query_labels[q]) {
        ++hits;
        sum += static_cast<double>(hits) / static_cast<double>(r + 1);
      }
    }
    ap[q] = hits ? sum / static_cast<double>(hits) : 0.0;
  }
  return ap;
}

double mean_average_precision(const Ranking& ranking, const RetrievalGroundTruth& truth) {
  const auto ap = average_precisions(ranking, truth);
  if (ap.empty()) return 0.0;
  double s = 0.0;
  for (double v : ap) s += v;
  return s / static_cast<double>(ap.size());
}

double precision_at_radius2(const CodeMatrix& queries, const CodeMatrix& database,
                            const RetrievalGroundTruth& truth) {
  check_truth(queries, database, truth, "precision_at_radius2");
  const auto dist = hamming_distances(queries, database);
  if (dist.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t q = 0; q < dist.size(); ++q) {
    std::size_t retrieved = 0;
    std::size_t relevant = 0;
    for (std::size_t j = 0; j < dist[q].size(); ++j) {
      if (dist[q][j] <= 2) {
        ++retrieved;
        if (truth.database_labels[j] == truth.query_labels[q]) ++relevant;
      }
    }
    if (retrieved) total += static_cast<double>(relevant) / static_cast<double>(retrieved);
  }
  return total / static_cast<double>(dist.size());
}

std::vector<int> knn_classify(const CodeMatrix& queries, const CodeMatrix& database,
                              std::span<const int> database_labels, std::size_t k) {
  if (k == 0) throw PreconditionError("knn_classify: k must be >= 1");
  if (k > database.samples()) {
    throw PreconditionError("knn_classify: k = " + std::to_string(k) +
                            " exceeds database size " + std::to_string(database.samples()));
  }
  if (database_labels.size() != database.samples()) {
    throw DimensionError("knn_classify: label count does not match database size");
  }
  const Ranking ranking = hamming_rank(queries, database);
  std::vector<int> predicted(ranking.size());
  for (std::size_t q = 0; q < ranking.size(); ++q) {
    std::map<int, std::size_t> votes;  // ordered: first max is the smallest label
    for (std::size_t r = 0; r < k; ++r) ++votes[database_labels[ranking[q][r]]];
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it)
      if (it->second > best->second) best = it;
    predicted[q] = best->first;
  }
  return predicted;
}

MetricsReport evaluate(const CodeMatrix& queries, const CodeMatrix& database,
                       const RetrievalGroundTruth& truth, std::optional<std::size_t> knn_k) {
  check_lengths(queries, database, "evaluate");
  check_truth(queries, database, truth, "evaluate");
  MetricsReport m;
  const Ranking ranking = hamming_rank(queries, database);
  m.per_query_ap = average_precisions(ranking, truth);
  for (double v : m.per_query_ap) m.map += v;
  if (!m.per_query_ap.empty()) m.map /= static_cast<double>(m.per_query_ap.size());
  m.precision_at_r2 = precision_at_radius2(queries, database, truth);
  if (knn_k) {
    const auto pred = knn_classify(queries, database, truth.database_labels, *knn_k);
    std::size_t correct = 0;
    for (std::size_t q = 0; q < pred.size(); ++q)
      if (pred[q] == truth.query_labels[q]) ++correct;
    m.knn_accuracy = pred.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(pred.size());
  }
  return m;
}

}  // namespace bqhash
