#pragma once

#include <cstddef>
#include <span>

#include "bqhash/core.hpp"

namespace bqhash {

enum class SimilarityMode { Unsupervised, Supervised };

const char* mode_name(SimilarityMode mode) noexcept;

/// Pairwise dissimilarity S with its scale constant c.
///
/// Unsupervised: squared Euclidean distance between unit-norm samples, in
/// [0, 4], c = 4. Supervised: 0 for same label, 1 otherwise, c = 1.
struct SimilarityMatrix {
  SymmetricMatrix s;
  SimilarityMode mode = SimilarityMode::Unsupervised;
  double c = 4.0;
};

/// Target code inner products Y for code length L.
struct TargetMatrix {
  SymmetricMatrix y;
  std::size_t code_length = 0;
};

/// Columns of x must have unit l2 norm within 1e-8.
SimilarityMatrix build_unsupervised(const DenseMatrix& x);

SimilarityMatrix build_supervised(std::span<const int> labels);

/// Y = L - L S / 2 (unsupervised) or Y = L - 2 L S (supervised).
TargetMatrix derive_target(const SimilarityMatrix& sim, std::size_t code_length);

/// Hamming distances D = (L - Z^T Z) / 2.
SymmetricMatrix hamming_from_codes(const CodeMatrix& z);

}  // namespace bqhash
