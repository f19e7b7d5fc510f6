#include <doctest.h>

#include <cmath>

#include "bqhash/bqp.hpp"
#include "bqhash/linalg.hpp"
#include "bqhash/sdr.hpp"
#include "test_support.hpp"

using namespace bqhash;
using testing::Mat;
using testing::rng;
using testing::Vec;

namespace {

double frob(const Mat& m) {
  double s = 0.0;
  for (const auto& r : m)
    for (double v : r) s += v * v;
  return std::sqrt(s);
}

// |<u, v>| for unit vectors; 1 means same line.
double alignment(const Vec& u, const Vec& v) {
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d += u[i] * v[i];
  return std::abs(d);
}

}  // namespace

TEST_CASE("eig_sym on small hand cases") {
  const std::vector<double> d{3, 1, 2};
  const EigenDecomposition e = eig_sym(SymmetricMatrix::diagonal(d));
  CHECK(e.eigenvalues[0] == doctest::Approx(3));
  CHECK(e.eigenvalues[1] == doctest::Approx(2));
  CHECK(e.eigenvalues[2] == doctest::Approx(1));
  // Axis-aligned, with the sign convention making the nonzero entry +1.
  CHECK(e.eigenvectors(0, 0) == doctest::Approx(1));
  CHECK(e.eigenvectors(2, 1) == doctest::Approx(1));
  CHECK(e.eigenvectors(1, 2) == doctest::Approx(1));

  const EigenDecomposition s = eig_sym(SymmetricMatrix(2, {0, 1, 1, 0}));
  CHECK(s.eigenvalues[0] == doctest::Approx(1));
  CHECK(s.eigenvalues[1] == doctest::Approx(-1));
}

TEST_CASE("eig_sym reconstruction, residuals and orthonormality") {
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 10;
    const Mat m = testing::random_symmetric(n, rng());
    const EigenDecomposition e = eig_sym(testing::to_sym(m));
    Mat rec(n, Vec(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
      if (k + 1 < n) CHECK(e.eigenvalues[k] >= e.eigenvalues[k + 1]);
      const Vec v = e.vector(k);
      double norm = 0.0;
      for (double x : v) norm += x * x;
      CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-10);
      double resid = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double mv = 0.0;
        for (std::size_t j = 0; j < n; ++j) mv += m[i][j] * v[j];
        resid = std::max(resid, std::abs(mv - e.eigenvalues[k] * v[i]));
        for (std::size_t j = 0; j < n; ++j) rec[i][j] += e.eigenvalues[k] * v[i] * v[j];
      }
      CHECK(resid <= 1e-8 * (1.0 + std::abs(e.eigenvalues[k])));
      for (std::size_t l = 0; l < n; ++l) {
        double dot = 0.0;
        const Vec w = e.vector(l);
        for (std::size_t i = 0; i < n; ++i) dot += v[i] * w[i];
        CHECK(std::abs(dot - (k == l ? 1.0 : 0.0)) <= 1e-8);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rec[i][j] -= m[i][j];
    CHECK(frob(rec) / frob(m) <= 1e-10);
  }
}

TEST_CASE("eig_sym eigenvalues agree with an independent Jacobi oracle") {
  const Mat m = testing::random_symmetric(9, rng());
  const auto [vals, vecs] = testing::jacobi_eigen(m);
  const EigenDecomposition e = eig_sym(testing::to_sym(m));
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(e.eigenvalues[k] == doctest::Approx(vals[k]).epsilon(1e-10));
    Vec col(9);
    for (std::size_t i = 0; i < 9; ++i) col[i] = vecs[i][k];
    CHECK(alignment(e.vector(k), col) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("largest_eigenvalue examples") {
  CHECK(largest_eigenvalue(SymmetricMatrix::identity(4)).value == doctest::Approx(1));
  const std::vector<double> d{-5, -1};
  const EigenPair p = largest_eigenvalue(SymmetricMatrix::diagonal(d));
  CHECK(p.value == doctest::Approx(-1));
  CHECK(p.vector[1] == doctest::Approx(1));

  const Mat m = testing::random_symmetric(12, rng());
  const auto [vals, vecs] = testing::jacobi_eigen(m);
  const EigenPair top = largest_eigenvalue(testing::to_sym(m));
  CHECK(std::abs(top.value - vals.front()) <= 1e-8 * (1 + std::abs(vals.front())));
  CHECK(top.value == doctest::Approx(eig_sym(testing::to_sym(m)).eigenvalues.front()));
}

TEST_CASE("smallest_eigenvector examples and shift invariance") {
  const std::vector<double> d{3, 1, 2};
  const EigenPair p = smallest_eigenvector(SymmetricMatrix::diagonal(d));
  CHECK(p.value == doctest::Approx(1));
  CHECK(p.vector[1] == doctest::Approx(1));

  const SymmetricMatrix m = testing::random_sym(12, rng());
  const EigenPair a = smallest_eigenvector(m);
  const EigenPair b = smallest_eigenvector(m.shifted(2.5));
  CHECK(std::abs(b.value - a.value - 2.5) <= 1e-10 * (1 + std::abs(a.value)) + 1e-12);
  CHECK(alignment(a.vector, b.vector) == doctest::Approx(1.0).epsilon(1e-10));
  const EigenDecomposition e = eig_sym(m);
  CHECK(a.value == doctest::Approx(e.eigenvalues.back()));

  // All eigenvalues shift by exactly c.
  const EigenDecomposition es = eig_sym(m.shifted(-1.75));
  for (std::size_t k = 0; k < 12; ++k)
    CHECK(std::abs(es.eigenvalues[k] - (e.eigenvalues[k] - 1.75)) <= 1e-10 * (1 + std::abs(e.eigenvalues[k])));
}

TEST_CASE("degenerate eigenspace is compared as a subspace") {
  // diag(2, 2, 1): any orthonormal basis of span(e0, e1) is acceptable.
  const std::vector<double> d{2, 2, 1};
  const EigenDecomposition e = eig_sym(SymmetricMatrix::diagonal(d));
  for (std::size_t k = 0; k < 2; ++k) {
    const Vec v = e.vector(k);
    CHECK(v[0] * v[0] + v[1] * v[1] == doctest::Approx(1.0));
    CHECK(std::abs(v[2]) <= 1e-12);
  }
}

TEST_CASE("project_psd clips negative eigenvalues") {
  const SymmetricMatrix m = testing::random_sym(8, rng());
  const SymmetricMatrix p = project_psd(m);
  const EigenDecomposition em = eig_sym(m);
  const EigenDecomposition ep = eig_sym(p);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(ep.eigenvalues[k] >= -1e-12);
    CHECK(ep.eigenvalues[k] == doctest::Approx(std::max(em.eigenvalues[k], 0.0)).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("cholesky_psd") {
  const CholeskyFactor id = cholesky_psd(SymmetricMatrix::identity(4));
  CHECK(id.jitter_applied == 0.0);
  CHECK(id.lower == DenseMatrix::identity(4));

  // Rank one v v^T: needs a small jitter, reproduces v v^T closely.
  const Vec v{1.0, -2.0, 0.5, 3.0};
  std::vector<double> vv;
  for (double a : v)
    for (double b : v) vv.push_back(a * b);
  const SymmetricMatrix r1(4, vv);
  const CholeskyFactor f = cholesky_psd(r1);
  CHECK(f.jitter_applied > 0.0);
  CHECK(f.jitter_applied <= 1e-3);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += f.lower(i, k) * f.lower(j, k);
      const double target = r1(i, j) + (i == j ? f.jitter_applied : 0.0);
      err += (s - target) * (s - target);
      ref += target * target;
      if (j > i) CHECK(f.lower(i, j) == 0.0);
    }
  CHECK(std::sqrt(err / ref) <= 1e-8);

  // Well-conditioned PD input gets no jitter.
  const Mat g = testing::random_symmetric(6, rng());
  Mat pd(6, Vec(6, 0.0));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      for (std::size_t k = 0; k < 6; ++k) pd[i][j] += g[i][k] * g[j][k];
      if (i == j) pd[i][j] += 1.0;
    }
  CHECK(cholesky_psd(testing::to_sym(pd)).jitter_applied == 0.0);

  const std::vector<double> neg{1.0, -1.0};
  CHECK_THROWS_AS(cholesky_psd(SymmetricMatrix::diagonal(neg)), NumericalError);
}

TEST_CASE("cholesky_psd factors an SDP solution") {
  const BQPInstance inst{testing::random_sym(10, rng())};
  const ShiftedBQP b = shift_instance(inst);
  const SDPState st = solve_sdp(b);
  const CholeskyFactor f = cholesky_psd(st.x_var);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 10; ++k) s += f.lower(i, k) * f.lower(j, k);
      err += (s - st.x_var(i, j)) * (s - st.x_var(i, j));
      ref += st.x_var(i, j) * st.x_var(i, j);
    }
  CHECK(std::sqrt(err / ref) <= 1e-6);
}

namespace {

Mat centered(const DenseMatrix& x) {
  Mat c(x.rows(), Vec(x.cols()));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double mean = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) mean += x(r, j);
    mean /= static_cast<double>(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) c[r][j] = x(r, j) - mean;
  }
  return c;
}

DenseMatrix gaussian_data(std::size_t d, std::size_t n) {
  std::vector<double> v(d * n);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t j = 0; j < n; ++j)
      v[r * n + j] = testing::gauss(rng()) * (1.0 + static_cast<double>(r));
  return DenseMatrix(d, n, std::move(v));
}

void check_pca_spectrum(const DenseMatrix& x, std::size_t k) {
  const Mat c = centered(x);
  const std::size_t d = x.rows(), n = x.cols();
  Mat scatter(d, Vec(d, 0.0));
  double total = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t j = 0; j < n; ++j) scatter[a][b] += c[a][j] * c[b][j];
  for (std::size_t a = 0; a < d; ++a) total += scatter[a][a];
  const auto [vals, vecs] = testing::jacobi_eigen(scatter);
  double discarded = 0.0;
  for (std::size_t i = k; i < d; ++i) discarded += vals[i];

  const DenseMatrix p = pca_project(x, k);
  REQUIRE(p.rows() == k);
  REQUIRE(p.cols() == n);
  double captured = 0.0;
  for (double v : p.data()) captured += v * v;
  // Orthogonal projection: ||Xc||^2 = ||captured||^2 + ||residual||^2.
  CHECK(total - captured == doctest::Approx(discarded).epsilon(1e-8).scale(total));

  // Rows are uncorrelated, and row r carries eigenvalue r's variance.
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t s = 0; s < k; ++s) {
      double cov = 0.0;
      for (std::size_t j = 0; j < n; ++j) cov += p(r, j) * p(s, j);
      if (r == s) CHECK(cov == doctest::Approx(vals[r]).epsilon(1e-8));
      else CHECK(std::abs(cov) <= 1e-8 * total);
    }
  }
}

}  // namespace

TEST_CASE("pca_project against the covariance spectrum") {
  check_pca_spectrum(gaussian_data(20, 50), 5);  // covariance route
  check_pca_spectrum(gaussian_data(30, 12), 4);  // Gram route (D > n)
}

TEST_CASE("pca_project simple geometry") {
  // Points on a line: scores proportional to position.
  const std::vector<double> t{-2, -1, 0.5, 1, 3};
  std::vector<double> v;
  for (double a : t) v.push_back(3 * a);
  for (double a : t) v.push_back(4 * a);
  const DenseMatrix line(2, 5, v);
  const DenseMatrix p = pca_project(line, 1);
  const double mean = (-2 - 1 + 0.5 + 1 + 3) / 5.0;
  const double ratio = p(0, 0) / (t[0] - mean);
  for (std::size_t j = 0; j < 5; ++j) CHECK(p(0, j) == doctest::Approx(ratio * (t[j] - mean)));
  CHECK(std::abs(ratio) == doctest::Approx(5.0));

  // Already 2-d data: projection is a rotation/sign change, so pairwise
  // distances are preserved.
  const DenseMatrix x = gaussian_data(2, 7);
  const DenseMatrix q = pca_project(x, 2);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      const double dx = std::hypot(x(0, i) - x(0, j), x(1, i) - x(1, j));
      const double dq = std::hypot(q(0, i) - q(0, j), q(1, i) - q(1, j));
      CHECK(dq == doctest::Approx(dx));
    }

  CHECK_THROWS_AS(pca_project(x, 3), PreconditionError);
  CHECK_THROWS_AS(pca_project(x, 0), PreconditionError);
}
