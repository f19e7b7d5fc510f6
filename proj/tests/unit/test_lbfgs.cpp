#include <doctest.h>

#include <cmath>

#include "bqhash/core.hpp"
#include "bqhash/lbfgs.hpp"

using namespace bqhash;

TEST_CASE("convex quadratic converges quickly") {
  const std::vector<double> target{1.0, -2.0, 0.5, 3.0, 0.0, -1.5};
  const ObjectiveFn fn = [&](std::span<const double> x, std::span<double> g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - target[i];
      f += d * d;
      g[i] = 2.0 * d;
    }
    return f;
  };
  LbfgsOptions opt;
  opt.grad_tol = 1e-10;
  const LbfgsResult r = lbfgs_minimize(fn, std::vector<double>(6, 0.0), opt);
  CHECK(r.converged);
  CHECK(r.iterations <= target.size() + 5);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(r.x[i] - target[i]) <= 1e-8);
}

TEST_CASE("ill-conditioned quadratic") {
  const ObjectiveFn fn = [](std::span<const double> x, std::span<double> g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = std::pow(10.0, static_cast<double>(i) / 2.0);
      f += w * x[i] * x[i];
      g[i] = 2.0 * w * x[i];
    }
    return f;
  };
  LbfgsOptions opt;
  opt.max_iter = 200;
  const LbfgsResult r = lbfgs_minimize(fn, std::vector<double>(6, 1.0), opt);
  CHECK(r.converged);
  CHECK(r.grad_norm_inf <= 1e-6);
}

TEST_CASE("Rosenbrock from the classic start") {
  const ObjectiveFn fn = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  LbfgsOptions opt;
  opt.max_iter = 500;
  opt.grad_tol = 1e-9;
  const LbfgsResult r = lbfgs_minimize(fn, {-1.2, 1.0}, opt);
  CHECK(std::abs(r.x[0] - 1.0) <= 1e-5);
  CHECK(std::abs(r.x[1] - 1.0) <= 1e-5);
}

TEST_CASE("iteration cap is respected") {
  const ObjectiveFn fn = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  LbfgsOptions opt;
  opt.max_iter = 3;
  const LbfgsResult r = lbfgs_minimize(fn, {-1.2, 1.0}, opt);
  CHECK(r.iterations <= 3);
  CHECK_FALSE(r.converged);
}

TEST_CASE("starting at a stationary point takes no steps") {
  const ObjectiveFn fn = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2.0 * x[0];
    return x[0] * x[0];
  };
  const LbfgsResult r = lbfgs_minimize(fn, {0.0});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
}

TEST_CASE("non-finite objective is a numerical error") {
  const ObjectiveFn fn = [](std::span<const double> x, std::span<double> g) {
    g[0] = -1.0;
    return x[0] > 0.5 ? NAN : -x[0];
  };
  CHECK_THROWS_AS(lbfgs_minimize(fn, {0.0}), NumericalError);
}
