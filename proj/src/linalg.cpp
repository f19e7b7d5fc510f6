#include "bqhash/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bqhash {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const SymmetricMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.n()),
          static_cast<Eigen::Index>(m.n())};
}

Eigen::Map<const RowMajor> view(const DenseMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

DenseMatrix to_dense(const Eigen::MatrixXd& m) {
  std::vector<double> d(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      d[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return DenseMatrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                     std::move(d));
}

// Largest-magnitude entry positive; the first such entry wins ties.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  if (v(best) < 0.0) v = -v;
}

struct SortedSpectrum {
  Eigen::VectorXd values;  // descending
  Eigen::MatrixXd vectors;
};

SortedSpectrum decompose(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_sym: eigensolver did not converge (n = " +
                         std::to_string(m.rows()) + ")");
  }
  const Eigen::Index n = m.rows();
  SortedSpectrum out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    canonicalize_sign(out.vectors.col(k));
  }
  return out;
}

EigenPair extreme_pair(const SymmetricMatrix& m, bool largest) {
  const SortedSpectrum s = decompose(view(m));
  const Eigen::Index k = largest ? 0 : s.values.size() - 1;
  EigenPair p;
  p.value = s.values(k);
  p.vector.assign(s.vectors.col(k).data(), s.vectors.col(k).data() + s.vectors.rows());
  return p;
}

}  // namespace

EigenDecomposition eig_sym(const SymmetricMatrix& m) {
  const SortedSpectrum s = decompose(view(m));
  EigenDecomposition out;
  out.n = m.n();
  out.eigenvalues.assign(s.values.data(), s.values.data() + s.values.size());
  out.eigenvectors = to_dense(s.vectors);
  return out;
}

EigenPair largest_eigenvalue(const SymmetricMatrix& m) { return extreme_pair(m, true); }

EigenPair smallest_eigenvector(const SymmetricMatrix& m) { return extreme_pair(m, false); }

SymmetricMatrix project_psd(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(view(m));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("project_psd: eigensolver did not converge");
  }
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& u = solver.eigenvectors();
  const Eigen::MatrixXd p = u * clipped.asDiagonal() * u.transpose();
  std::vector<double> d(m.n() * m.n());
  Eigen::Map<RowMajor>(d.data(), p.rows(), p.cols()) = p;
  return SymmetricMatrix(m.n(), std::move(d));
}

CholeskyFactor cholesky_psd(const SymmetricMatrix& m, double base_jitter) {
  if (!(base_jitter > 0.0)) {
    throw PreconditionError("cholesky_psd: base_jitter must be positive");
  }
  constexpr double kMaxJitter = 1e-3;
  const Eigen::MatrixXd a = view(m);
  const auto n = a.rows();

  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd lower = llt.matrixL();
      if (lower.allFinite()) {
        CholeskyFactor f;
        f.n = static_cast<std::size_t>(n);
        f.lower = to_dense(lower);
        f.jitter_applied = jitter;
        return f;
      }
    }
    if (jitter >= kMaxJitter) break;
    jitter = jitter == 0.0 ? base_jitter : std::min(jitter * 10.0, kMaxJitter);
  }
  throw NumericalError("cholesky_psd: matrix is not positive semidefinite (indefinite at "
                       "jitter 1e-3)");
}

DenseMatrix pca_project(const DenseMatrix& x, std::size_t k) {
  const std::size_t dims = x.rows();
  const std::size_t n = x.cols();
  if (k == 0 || k > std::min(dims, n)) {
    throw PreconditionError("pca_project: k = " + std::to_string(k) +
                            " out of range [1, " + std::to_string(std::min(dims, n)) + "]");
  }
  Eigen::MatrixXd centered = view(x);
  const Eigen::VectorXd mean = centered.rowwise().mean();
  centered.colwise() -= mean;

  Eigen::MatrixXd scores(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
  if (dims > n) {
    // Gram route: Xc^T u_k = sigma_k v_k, so the scores are sigma_k v_k^T.
    const SortedSpectrum s = decompose(centered.transpose() * centered);
    for (std::size_t r = 0; r < k; ++r) {
      const auto ri = static_cast<Eigen::Index>(r);
      const double sigma = std::sqrt(std::max(s.values(ri), 0.0));
      scores.row(ri) = sigma * s.vectors.col(ri).transpose();
    }
  } else {
    const SortedSpectrum s = decompose(centered * centered.transpose());
    scores = s.vectors.leftCols(static_cast<Eigen::Index>(k)).transpose() * centered;
  }
  return to_dense(scores);
}

}  // namespace bqhash
