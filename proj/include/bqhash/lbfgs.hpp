#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bqhash {

/// Objective callback: returns f(x) and writes the gradient into `grad`.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
  std::size_t memory = 10;
  std::size_t max_iter = 50;
  double grad_tol = 1e-6;  // on ||grad||_inf
  double armijo_c1 = 1e-4;
  std::size_t max_backtracks = 60;
};

struct LbfgsResult {
  std::vector<double> x;
  double objective = 0.0;
  double grad_norm_inf = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // gradient tolerance reached
};

/// Limited-memory BFGS with the two-loop recursion and Armijo backtracking
/// (step halving). Curvature pairs with s^T y <= 1e-10 ||s|| ||y|| are
/// skipped. Throws NumericalError if the objective turns non-finite.
LbfgsResult lbfgs_minimize(const ObjectiveFn& fn, std::vector<double> x0,
                           const LbfgsOptions& options = {});

}  // namespace bqhash
