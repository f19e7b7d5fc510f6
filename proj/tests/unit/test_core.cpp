#include <doctest.h>

#include <cmath>
#include <limits>

#include "bqhash/core.hpp"
#include "test_support.hpp"

using namespace bqhash;
using testing::rng;

TEST_CASE("symmetrize averages with the transpose") {
  const SymmetricMatrix s = symmetrize(DenseMatrix(2, 2, {1, 2, 4, 1}));
  CHECK(s(0, 0) == 1);
  CHECK(s(0, 1) == 3);
  CHECK(s(1, 0) == 3);
  CHECK(s(1, 1) == 1);

  CHECK(symmetrize(DenseMatrix::identity(3)) == SymmetricMatrix::identity(3));

  const SymmetricMatrix r = testing::random_sym(6, rng());
  CHECK(symmetrize(r.to_dense()) == r);

  CHECK_THROWS_AS(symmetrize(DenseMatrix(2, 3)), DimensionError);
}

TEST_CASE("matrices reject non-finite entries and bad shapes") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, nan}), NumericalError);
  CHECK_THROWS_AS(DenseMatrix(1, 1, {inf}), NumericalError);
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(SymmetricMatrix(2, {0.0, nan, 0.0, 0.0}), NumericalError);
  CHECK_THROWS_AS(SymmetricMatrix(0), DimensionError);
}

TEST_CASE("symmetric storage is exactly symmetric") {
  const SymmetricMatrix s(2, {0.1, 0.3, 0.7, 0.2});
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("quadratic_form examples") {
  const std::vector<double> ones{1, 1, 1};
  CHECK(quadratic_form(SymmetricMatrix::identity(3), ones) == 3);
  CHECK(quadratic_form(SymmetricMatrix(2, {0, 1, 1, 0}), std::vector<double>{1, -1}) == -2);
  CHECK_THROWS_AS(quadratic_form(SymmetricMatrix::identity(3), std::vector<double>{1, 1}),
                  DimensionError);
}

TEST_CASE("quadratic_form matches the double-loop oracle") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testing::random_symmetric(8, rng());
    const auto x = testing::random_binary(8, rng());
    const double expect = testing::quad_naive(m, x);
    CHECK(quadratic_form(testing::to_sym(m), x) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("quadratic_form is even and consistent with the upper triangle") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing::random_symmetric(7, rng());
    const SymmetricMatrix a = testing::to_sym(m);
    std::vector<double> x(7);
    for (double& v : x) v = testing::gauss(rng());
    std::vector<double> neg = x;
    for (double& v : neg) v = -v;
    CHECK(quadratic_form(a, x) == doctest::Approx(quadratic_form(a, neg)).epsilon(1e-14));

    double upper = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
      upper += m[i][i] * x[i] * x[i];
      for (std::size_t j = i + 1; j < 7; ++j) upper += 2.0 * m[i][j] * x[i] * x[j];
    }
    CHECK(quadratic_form(a, x) == doctest::Approx(upper).epsilon(1e-12));
  }
}

TEST_CASE("multiply and trace_product") {
  const auto m = testing::random_symmetric(5, rng());
  const auto p = testing::random_symmetric(5, rng());
  std::vector<double> x{1, -2, 0.5, 3, -1};
  const auto y = multiply(testing::to_sym(m), x);
  double tr = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      s += m[i][j] * x[j];
      tr += m[i][j] * p[j][i];
    }
    CHECK(y[i] == doctest::Approx(s));
  }
  CHECK(trace_product(testing::to_sym(m), testing::to_sym(p)) == doctest::Approx(tr));
}

TEST_CASE("CodeMatrix validates entries") {
  CHECK_THROWS_AS(CodeMatrix(1, 2, {1, 0}), PreconditionError);
  CHECK_THROWS_AS(CodeMatrix(2, 2, {1, 1, 1}), DimensionError);

  CodeMatrix z(2, 3);
  CHECK(z(1, 2) == 1);
  z.set_row(1, std::vector<double>{-1, 1, -1});
  CHECK(z(1, 0) == -1);
  CHECK(z(1, 2) == -1);
  CHECK_THROWS_AS(z.set_row(0, std::vector<double>{1, 0.5, 1}), PreconditionError);
  CHECK_THROWS_AS(z.set_row(2, std::vector<double>{1, 1, 1}), DimensionError);
  CHECK_THROWS_AS(z.set_row(0, std::vector<double>{1, 1}), DimensionError);
}

TEST_CASE("CodeMatrix gram matches column inner products") {
  const CodeMatrix z = testing::random_codes(5, 9, rng());
  const SymmetricMatrix g = z.gram();
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      int s = 0;
      for (std::size_t k = 0; k < 5; ++k) s += z(k, i) * z(k, j);
      CHECK(g(i, j) == s);
    }
}

TEST_CASE("sign and violation helpers") {
  CHECK(sign_of(0.0) == 1.0);
  CHECK(sign_of(-0.0) == 1.0);
  CHECK(sign_of(-1e-300) == -1.0);
  CHECK(binary_violation(std::vector<double>{1, -1, 0.5}) == doctest::Approx(0.75));
  CHECK(binary_violation(std::vector<double>{1, -1}) == 0.0);
}

TEST_CASE("error categories") {
  try {
    throw IoError("x");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Io);
    CHECK(std::string(category_name(e.category())) == "io");
  }
}
