#include "bqhash/encoder.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <string>

namespace bqhash {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Features with a trailing row of ones: (D + 1) x n.
Eigen::MatrixXd augmented(const DenseMatrix& x) {
  const auto d = static_cast<Eigen::Index>(x.rows());
  const auto n = static_cast<Eigen::Index>(x.cols());
  Eigen::MatrixXd f(d + 1, n);
  f.topRows(d) = Eigen::Map<const RowMajor>(x.data().data(), d, n);
  f.row(d).setOnes();
  return f;
}

}  // namespace

DenseMatrix LinearEncoder::scores(const DenseMatrix& x) const {
  if (x.rows() != dims()) {
    throw DimensionError("LinearEncoder: input has " + std::to_string(x.rows()) +
                         " dimensions, encoder expects " + std::to_string(dims()));
  }
  const Eigen::Map<const RowMajor> w(weights.data().data(),
                                     static_cast<Eigen::Index>(weights.rows()),
                                     static_cast<Eigen::Index>(weights.cols()));
  const Eigen::MatrixXd s = w * augmented(x);
  std::vector<double> out(static_cast<std::size_t>(s.size()));
  Eigen::Map<RowMajor>(out.data(), s.rows(), s.cols()) = s;
  return DenseMatrix(static_cast<std::size_t>(s.rows()), static_cast<std::size_t>(s.cols()),
                     std::move(out));
}

CodeMatrix LinearEncoder::encode(const DenseMatrix& x) const {
  const DenseMatrix s = scores(x);
  std::vector<std::int8_t> codes(s.rows() * s.cols());
  for (std::size_t k = 0; k < s.rows(); ++k)
    for (std::size_t j = 0; j < s.cols(); ++j)
      codes[k * s.cols() + j] = s(k, j) < 0.0 ? -1 : 1;
  return CodeMatrix(s.rows(), s.cols(), std::move(codes));
}

LinearEncoder fit_linear_encoder(const DenseMatrix& x, const CodeMatrix& z, double ridge) {
  if (x.cols() != z.samples()) {
    throw DimensionError("fit_linear_encoder: data has " + std::to_string(x.cols()) +
                         " samples, codes have " + std::to_string(z.samples()));
  }
  if (!(ridge >= 0.0)) throw PreconditionError("fit_linear_encoder: ridge must be >= 0");

  const Eigen::MatrixXd f = augmented(x);
  Eigen::MatrixXd normal = f * f.transpose();
  normal.diagonal().array() += ridge;

  Eigen::MatrixXd targets(static_cast<Eigen::Index>(z.samples()),
                          static_cast<Eigen::Index>(z.bits()));
  for (std::size_t k = 0; k < z.bits(); ++k)
    for (std::size_t j = 0; j < z.samples(); ++j)
      targets(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = z(k, j);

  const Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-13) {
    throw NumericalError("fit_linear_encoder: normal equations are singular; use a nonzero ridge");
  }
  const Eigen::MatrixXd w = llt.solve(f * targets);  // (D + 1) x L

  std::vector<double> out(static_cast<std::size_t>(w.size()));
  Eigen::Map<RowMajor>(out.data(), w.cols(), w.rows()) = w.transpose();
  return {DenseMatrix(static_cast<std::size_t>(w.cols()), static_cast<std::size_t>(w.rows()),
                      std::move(out))};
}

}  // namespace bqhash
