#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bqhash {

/// Broad failure classes. The CLI maps each to its own exit code.
enum class ErrorCategory {
  Dimension,
  Precondition,
  Numerical,
  Io,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorCategory::Dimension, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorCategory::Precondition, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCategory::Numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCategory::Config, what) {}
};

const char* category_name(ErrorCategory category) noexcept;

/// Dense real matrix, row-major. Entries are checked finite on construction.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<double> column(std::size_t j) const;

  DenseMatrix transpose() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric n x n matrix in full storage. Construction averages the input
/// with its transpose, so m(i, j) == m(j, i) holds bit-for-bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n);  // zero-filled
  SymmetricMatrix(std::size_t n, std::vector<double> data);

  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(std::span<const double> d);

  std::size_t n() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }

  DenseMatrix to_dense() const;

  /// Returns this + c * I.
  SymmetricMatrix shifted(double c) const;

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) =
      default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// L x n matrix of +-1 codes; column j is the code of sample j.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  CodeMatrix(std::size_t bits, std::size_t samples);  // all +1
  CodeMatrix(std::size_t bits, std::size_t samples, std::vector<std::int8_t> codes);

  std::size_t bits() const noexcept { return bits_; }
  std::size_t samples() const noexcept { return samples_; }

  std::int8_t operator()(std::size_t bit, std::size_t sample) const noexcept {
    return codes_[bit * samples_ + sample];
  }

  std::span<const std::int8_t> row(std::size_t bit) const noexcept {
    return {codes_.data() + bit * samples_, samples_};
  }
  std::span<const std::int8_t> data() const noexcept { return codes_; }

  /// Replaces one bit row. Every value must be exactly -1.0 or +1.0.
  void set_row(std::size_t bit, std::span<const double> values);

  /// Gram matrix Z^T Z (n x n, integer valued).
  SymmetricMatrix gram() const;

  friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;

 private:
  std::size_t bits_ = 0;
  std::size_t samples_ = 0;
  std::vector<std::int8_t> codes_;
};

struct SolverReport {
  double objective = 0.0;
  std::size_t iterations = 0;
  double feasibility_violation = 0.0;  // max |x_i^2 - 1| before projection
  double wall_time = 0.0;              // seconds
  bool converged = false;
};

SymmetricMatrix symmetrize(const DenseMatrix& m);

/// x^T A x.
double quadratic_form(const SymmetricMatrix& a, std::span<const double> x);

/// y = A x.
std::vector<double> multiply(const SymmetricMatrix& a, std::span<const double> x);

/// trace(A B) for symmetric A, B (the Frobenius inner product).
double trace_product(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// sgn with sgn(0) = +1.
inline double sign_of(double v) noexcept { return v < 0.0 ? -1.0 : 1.0; }

/// Max |x_i^2 - 1|.
double binary_violation(std::span<const double> x) noexcept;

}  // namespace bqhash
