#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bqhash/eval.hpp"
#include "bqhash/similarity.hpp"
#include "test_support.hpp"

using namespace bqhash;
using testing::rng;

namespace {

// Distance by comparing entries one at a time.
std::size_t slow_distance(const CodeMatrix& a, std::size_t i, const CodeMatrix& b, std::size_t j) {
  std::size_t d = 0;
  for (std::size_t k = 0; k < a.bits(); ++k) d += a(k, i) != b(k, j);
  return d;
}

CodeMatrix column_subset(const CodeMatrix& z, const std::vector<std::size_t>& cols) {
  std::vector<std::int8_t> c(z.bits() * cols.size());
  for (std::size_t k = 0; k < z.bits(); ++k)
    for (std::size_t j = 0; j < cols.size(); ++j) c[k * cols.size() + j] = z(k, cols[j]);
  return CodeMatrix(z.bits(), cols.size(), std::move(c));
}

std::vector<int> random_labels(std::size_t n, int classes) {
  std::vector<int> l(n);
  for (int& v : l) v = static_cast<int>(rng()() % static_cast<std::uint64_t>(classes));
  return l;
}

// AP straight from the definition: for each relevant item, precision among
// the items ranked at or above it.
double ap_definition(const std::vector<std::size_t>& rank, const std::vector<int>& db, int label) {
  std::vector<double> precisions;
  for (std::size_t r = 0; r < rank.size(); ++r) {
    if (db[rank[r]] != label) continue;
    std::size_t rel_upto = 0;
    for (std::size_t s = 0; s <= r; ++s) rel_upto += db[rank[s]] == label;
    precisions.push_back(double(rel_upto) / double(r + 1));
  }
  if (precisions.empty()) return 0.0;
  return std::accumulate(precisions.begin(), precisions.end(), 0.0) / double(precisions.size());
}

}  // namespace

TEST_CASE("packed Hamming distance equals the inner-product identity") {
  for (std::size_t bits : {1u, 7u, 63u, 64u, 65u, 130u}) {
    const CodeMatrix z = testing::random_codes(bits, 15, rng());
    const auto d = hamming_distances(z, z);
    const SymmetricMatrix ident = hamming_from_codes(z);
    for (std::size_t i = 0; i < 15; ++i)
      for (std::size_t j = 0; j < 15; ++j) {
        CHECK(d[i][j] == slow_distance(z, i, z, j));
        CHECK(double(d[i][j]) == ident(i, j));
      }
  }
  CHECK_THROWS_AS(hamming_distances(CodeMatrix(3, 2), CodeMatrix(4, 2)), DimensionError);
}

TEST_CASE("hamming_rank examples") {
  const CodeMatrix db = testing::random_codes(8, 10, rng());
  const Ranking r = hamming_rank(column_subset(db, {6}), db);
  CHECK(r[0][0] == 6);

  // db items at distances 3 and 1 from the all-ones query.
  const CodeMatrix q(4, 1);
  const CodeMatrix two(4, 2, {-1, 1, -1, 1, -1, -1, 1, 1});
  const Ranking r2 = hamming_rank(q, two);
  CHECK(r2[0] == std::vector<std::size_t>{1, 0});
}

TEST_CASE("hamming_rank matches a stable sort on exact distances") {
  const CodeMatrix q = testing::random_codes(6, 5, rng());
  const CodeMatrix db = testing::random_codes(6, 50, rng());
  const Ranking r = hamming_rank(q, db);
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<std::size_t> idx(50);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto da = slow_distance(q, i, db, a), dbb = slow_distance(q, i, db, b);
      return da != dbb ? da < dbb : a < b;
    });
    CHECK(r[i] == idx);
  }
}

TEST_CASE("mean_average_precision examples") {
  const Ranking r{{0, 1, 2}};
  CHECK(mean_average_precision(r, {{5}, {5, 5, 5}}) == 1.0);
  CHECK(mean_average_precision(r, {{5}, {1, 5, 2}}) == doctest::Approx(0.5));
  CHECK(mean_average_precision(r, {{9}, {1, 5, 2}}) == 0.0);  // nothing relevant
  CHECK_THROWS_AS(mean_average_precision(Ranking{{0, 1}}, {{5}, {1, 5, 2}}), DimensionError);
}

TEST_CASE("mAP matches the definition-level oracle") {
  const CodeMatrix q = testing::random_codes(5, 30, rng());
  const CodeMatrix db = testing::random_codes(5, 30, rng());
  const auto ql = random_labels(30, 3), dl = random_labels(30, 3);
  const Ranking r = hamming_rank(q, db);
  double expect = 0.0;
  for (std::size_t i = 0; i < 30; ++i) expect += ap_definition(r[i], dl, ql[i]);
  expect /= 30.0;
  const double map = mean_average_precision(r, {ql, dl});
  CHECK(map == doctest::Approx(expect).epsilon(1e-14));
  CHECK(map >= 0.0);
  CHECK(map <= 1.0);
  const MetricsReport m = evaluate(q, db, {ql, dl});
  CHECK(m.map == doctest::Approx(map).epsilon(1e-14));
  CHECK(m.per_query_ap.size() == 30);
  CHECK_FALSE(m.knn_accuracy.has_value());
}

TEST_CASE("mAP is 1 when relevant items lead every ranking") {
  // Two classes with codes far apart.
  const CodeMatrix db(4, 4, {1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1});
  const std::vector<int> labels{0, 0, 1, 1};
  CHECK(evaluate(db, db, {labels, labels}).map == 1.0);
}

TEST_CASE("precision_at_radius2 examples") {
  const CodeMatrix db(4, 3, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
  const std::vector<int> labels{2, 2, 2};
  CHECK(precision_at_radius2(CodeMatrix(4, 1), db, {{2}, labels}) == 1.0);

  // Query at distance 4 from everything: empty retrieval set counts 0.
  const CodeMatrix far(4, 1, {-1, -1, -1, -1});
  CHECK(precision_at_radius2(far, db, {{2}, labels}) == 0.0);
}

TEST_CASE("precision_at_radius2 matches filter-and-count, independent of db order") {
  const CodeMatrix q = testing::random_codes(6, 20, rng());
  const CodeMatrix db = testing::random_codes(6, 40, rng());
  const auto ql = random_labels(20, 2), dl = random_labels(40, 2);
  double expect = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    std::vector<std::size_t> in;
    for (std::size_t j = 0; j < 40; ++j)
      if (slow_distance(q, i, db, j) <= 2) in.push_back(j);
    if (in.empty()) continue;
    std::size_t rel = 0;
    for (auto j : in) rel += dl[j] == ql[i];
    expect += double(rel) / double(in.size());
  }
  expect /= 20.0;
  const double p = precision_at_radius2(q, db, {ql, dl});
  CHECK(p == doctest::Approx(expect).epsilon(1e-14));

  std::vector<std::size_t> perm(40);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng());
  std::vector<int> dl_perm(40);
  for (std::size_t j = 0; j < 40; ++j) dl_perm[j] = dl[perm[j]];
  CHECK(precision_at_radius2(q, column_subset(db, perm), {ql, dl_perm}) ==
        doctest::Approx(p).epsilon(1e-14));
}

TEST_CASE("knn_classify examples") {
  const CodeMatrix db = testing::random_codes(16, 8, rng());
  const std::vector<int> labels{0, 1, 2, 3, 4, 5, 6, 7};
  CHECK(knn_classify(column_subset(db, {5}), db, labels, 1) == std::vector<int>{5});

  // Four items equal to the query: three vote 1, one votes 0.
  const CodeMatrix same(2, 5, {1, 1, 1, 1, -1, 1, 1, 1, 1, -1});
  CHECK(knn_classify(CodeMatrix(2, 1), same, std::vector<int>{1, 0, 1, 1, 0}, 4) ==
        std::vector<int>{1});
  // 2-2 vote: smallest label wins.
  CHECK(knn_classify(CodeMatrix(2, 1), same, std::vector<int>{3, 2, 2, 3, 0}, 4) ==
        std::vector<int>{2});

  CHECK_THROWS_AS(knn_classify(CodeMatrix(2, 1), same, std::vector<int>(5), 6), PreconditionError);
  CHECK_THROWS_AS(knn_classify(CodeMatrix(2, 1), same, std::vector<int>(5), 0), PreconditionError);
}

TEST_CASE("knn_classify matches the definition-level oracle") {
  const CodeMatrix q = testing::random_codes(5, 25, rng());
  const CodeMatrix db = testing::random_codes(5, 40, rng());
  const auto dl = random_labels(40, 4);
  const auto pred = knn_classify(q, db, dl, 4);
  for (std::size_t i = 0; i < 25; ++i) {
    std::vector<std::pair<std::size_t, std::size_t>> by_dist;
    for (std::size_t j = 0; j < 40; ++j) by_dist.push_back({slow_distance(q, i, db, j), j});
    std::sort(by_dist.begin(), by_dist.end());
    std::vector<int> count(4, 0);
    for (std::size_t r = 0; r < 4; ++r) ++count[dl[by_dist[r].second]];
    const int best = static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
    CHECK(pred[i] == best);
  }
  const MetricsReport m = evaluate(q, db, {random_labels(25, 4), dl}, 4);
  CHECK(m.knn_accuracy.has_value());
}
