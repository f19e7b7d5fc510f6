#pragma once

#include "bqhash/core.hpp"

namespace bqhash {

/// Per-bit linear hash function h_k(x) = sgn(w_k^T x + b_k), sgn(0) = +1.
///
/// This is a stand-in for kernel hash functions, fitted by ridge least
/// squares to the inferred code rows; the bias is regularized with the
/// weights.
struct LinearEncoder {
  DenseMatrix weights;  // L x (D + 1), last column is the bias

  std::size_t bits() const noexcept { return weights.rows(); }
  std::size_t dims() const noexcept { return weights.cols() ? weights.cols() - 1 : 0; }

  /// Real-valued scores (L x n) before the sign.
  DenseMatrix scores(const DenseMatrix& x) const;
  CodeMatrix encode(const DenseMatrix& x) const;
};

LinearEncoder fit_linear_encoder(const DenseMatrix& x, const CodeMatrix& z, double ridge = 1e-3);

}  // namespace bqhash
