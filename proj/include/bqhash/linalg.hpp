#pragma once

#include <cstddef>
#include <vector>

#include "bqhash/core.hpp"

namespace bqhash {

/// Full spectral decomposition M = U diag(values) U^T.
///
/// Eigenvalues are sorted descending. Column k of `eigenvectors` is the unit
/// eigenvector of eigenvalues[k], with its largest-magnitude entry made
/// positive. Within a repeated eigenvalue any orthonormal basis may be
/// returned, so callers comparing results should compare subspaces.
struct EigenDecomposition {
  std::size_t n = 0;
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;

  std::vector<double> vector(std::size_t k) const { return eigenvectors.column(k); }
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

struct CholeskyFactor {
  std::size_t n = 0;
  DenseMatrix lower;
  double jitter_applied = 0.0;
};

EigenDecomposition eig_sym(const SymmetricMatrix& m);

EigenPair largest_eigenvalue(const SymmetricMatrix& m);
EigenPair smallest_eigenvector(const SymmetricMatrix& m);

/// Projection onto the PSD cone: negative eigenvalues are clipped to zero.
SymmetricMatrix project_psd(const SymmetricMatrix& m);

/// Cholesky factor of m + jitter * I. Tries jitter 0 first, then base_jitter,
/// escalating by x10 up to 1e-3. Throws NumericalError if m is still
/// indefinite at the largest jitter.
CholeskyFactor cholesky_psd(const SymmetricMatrix& m, double base_jitter = 1e-9);

/// Projects the D x n data matrix (samples in columns) onto its top-k principal
/// directions after subtracting the column mean. Returns k x n scores. When
/// D > n the n x n centered Gram matrix is decomposed instead of the covariance.
DenseMatrix pca_project(const DenseMatrix& x, std::size_t k);

}  // namespace bqhash
