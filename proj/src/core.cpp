#include "bqhash/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bqhash {

namespace {

void require_finite(std::span<const double> data, const char* what) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw NumericalError(std::string(what) + ": non-finite entry at flat index " +
                           std::to_string(i));
    }
  }
}

}  // namespace

const char* category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::Dimension: return "dimension";
    case ErrorCategory::Precondition: return "precondition";
    case ErrorCategory::Numerical: return "numerical";
    case ErrorCategory::Io: return "io";
    case ErrorCategory::Config: return "config";
  }
  return "unknown";
}

// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("DenseMatrix: data length " + std::to_string(data_.size()) +
                         " != " + std::to_string(rows_) + " x " + std::to_string(cols_));
  }
  require_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
  return DenseMatrix(n, n, std::move(d));
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = data_[i * cols_ + j];
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  std::vector<double> t(data_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = data_[i * cols_ + j];
  return DenseMatrix(cols_, rows_, std::move(t));
}

// SymmetricMatrix

SymmetricMatrix::SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
  if (n == 0) throw DimensionError("SymmetricMatrix: n must be >= 1");
}

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<double> data)
    : n_(n), data_(std::move(data)) {
  if (n == 0) throw DimensionError("SymmetricMatrix: n must be >= 1");
  if (data_.size() != n * n) {
    throw DimensionError("SymmetricMatrix: data length " + std::to_string(data_.size()) +
                         " != " + std::to_string(n) + "^2");
  }
  require_finite(data_, "SymmetricMatrix");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (data_[i * n + j] + data_[j * n + i]);
      data_[i * n + j] = avg;
      data_[j * n + i] = avg;
    }
  }
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
  return SymmetricMatrix(n, std::move(d));
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = diag[i];
  return SymmetricMatrix(n, std::move(d));
}

DenseMatrix SymmetricMatrix::to_dense() const {
  return DenseMatrix(n_, n_, data_);
}

SymmetricMatrix SymmetricMatrix::shifted(double c) const {
  std::vector<double> d = data_;
  for (std::size_t i = 0; i < n_; ++i) d[i * n_ + i] += c;
  return SymmetricMatrix(n_, std::move(d));
}

// CodeMatrix

CodeMatrix::CodeMatrix(std::size_t bits, std::size_t samples)
    : bits_(bits), samples_(samples), codes_(bits * samples, 1) {}

CodeMatrix::CodeMatrix(std::size_t bits, std::size_t samples,
                       std::vector<std::int8_t> codes)
    : bits_(bits), samples_(samples), codes_(std::move(codes)) {
  if (codes_.size() != bits_ * samples_) {
    throw DimensionError("CodeMatrix: data length " + std::to_string(codes_.size()) +
                         " != " + std::to_string(bits_) + " x " + std::to_string(samples_));
  }
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i] != 1 && codes_[i] != -1) {
      throw PreconditionError("CodeMatrix: entry at flat index " + std::to_string(i) +
                              " is not +-1");
    }
  }
}

void CodeMatrix::set_row(std::size_t bit, std::span<const double> values) {
  if (bit >= bits_) {
    throw DimensionError("CodeMatrix::set_row: bit " + std::to_string(bit) +
                         " out of range");
  }
  if (values.size() != samples_) {
    throw DimensionError("CodeMatrix::set_row: row length mismatch");
  }
  for (double v : values) {
    if (v != 1.0 && v != -1.0) {
      throw PreconditionError("CodeMatrix::set_row: value is not +-1");
    }
  }
  for (std::size_t j = 0; j < samples_; ++j) {
    codes_[bit * samples_ + j] = values[j] > 0.0 ? 1 : -1;
  }
}

SymmetricMatrix CodeMatrix::gram() const {
  const std::size_t n = samples_;
  std::vector<double> g(n * n, 0.0);
  for (std::size_t k = 0; k < bits_; ++k) {
    const std::int8_t* r = codes_.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) {
      double* gi = g.data() + i * n;
      const double ri = r[i];
      for (std::size_t j = 0; j < n; ++j) gi[j] += ri * r[j];
    }
  }
  return SymmetricMatrix(n, std::move(g));
}

// Free functions

SymmetricMatrix symmetrize(const DenseMatrix& m) {
  if (!m.is_square()) {
    throw DimensionError("symmetrize: matrix is " + std::to_string(m.rows()) + " x " +
                         std::to_string(m.cols()) + ", expected square");
  }
  return SymmetricMatrix(m.rows(), std::vector<double>(m.data().begin(), m.data().end()));
}

double quadratic_form(const SymmetricMatrix& a, std::span<const double> x) {
  const std::size_t n = a.n();
  if (x.size() != n) {
    throw DimensionError("quadratic_form: vector length " + std::to_string(x.size()) +
                         " != " + std::to_string(n));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += r[j] * x[j];
    total += x[i] * acc;
  }
  return total;
}

std::vector<double> multiply(const SymmetricMatrix& a, std::span<const double> x) {
  const std::size_t n = a.n();
  if (x.size() != n) {
    throw DimensionError("multiply: vector length " + std::to_string(x.size()) +
                         " != " + std::to_string(n));
  }
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

double trace_product(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.n() != b.n()) throw DimensionError("trace_product: size mismatch");
  double total = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) total += da[i] * db[i];
  return total;
}

double binary_violation(std::span<const double> x) noexcept {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, std::abs(v * v - 1.0));
  return worst;
}

}  // namespace bqhash
