#include "bqhash/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace bqhash {

const char* mode_name(SimilarityMode mode) noexcept {
  return mode == SimilarityMode::Supervised ? "supervised" : "unsupervised";
}

SimilarityMatrix build_unsupervised(const DenseMatrix& x) {
  const std::size_t dims = x.rows();
  const std::size_t n = x.cols();
  if (n == 0) throw PreconditionError("build_unsupervised: no samples");

  std::vector<double> t(n * dims);  // samples as rows, for contiguous dots
  for (std::size_t d = 0; d < dims; ++d)
    for (std::size_t j = 0; j < n; ++j) t[j * dims + d] = x(d, j);

  for (std::size_t j = 0; j < n; ++j) {
    double sq = 0.0;
    for (std::size_t d = 0; d < dims; ++d) sq += t[j * dims + d] * t[j * dims + d];
    if (std::abs(std::sqrt(sq) - 1.0) > 1e-8) {
      throw PreconditionError("build_unsupervised: column " + std::to_string(j) +
                              " has l2 norm " + std::to_string(std::sqrt(sq)) +
                              ", expected unit norm (normalize the data first)");
    }
  }

  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t d = 0; d < dims; ++d) dot += t[i * dims + d] * t[j * dims + d];
      const double v = std::clamp(2.0 - 2.0 * dot, 0.0, 4.0);
      s[i * n + j] = v;
      s[j * n + i] = v;
    }
  }
  return {SymmetricMatrix(n, std::move(s)), SimilarityMode::Unsupervised, 4.0};
}

SimilarityMatrix build_supervised(std::span<const int> labels) {
  const std::size_t n = labels.size();
  if (n == 0) throw PreconditionError("build_supervised: empty label vector");
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s[i * n + j] = labels[i] == labels[j] ? 0.0 : 1.0;
  return {SymmetricMatrix(n, std::move(s)), SimilarityMode::Supervised, 1.0};
}

TargetMatrix derive_target(const SimilarityMatrix& sim, std::size_t code_length) {
  if (code_length == 0) throw PreconditionError("derive_target: code length must be >= 1");
  const double len = static_cast<double>(code_length);
  const double slope = sim.mode == SimilarityMode::Supervised ? 2.0 * len : 0.5 * len;
  const auto src = sim.s.data();
  std::vector<double> y(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) y[i] = len - slope * src[i];
  return {SymmetricMatrix(sim.s.n(), std::move(y)), code_length};
}

SymmetricMatrix hamming_from_codes(const CodeMatrix& z) {
  const SymmetricMatrix g = z.gram();
  const double len = static_cast<double>(z.bits());
  std::vector<double> d(g.data().begin(), g.data().end());
  for (double& v : d) v = (len - v) / 2.0;
  return SymmetricMatrix(g.n(), std::move(d));
}

}  // namespace bqhash
