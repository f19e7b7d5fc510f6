#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bqhash/bqp.hpp"
#include "bqhash/core.hpp"

namespace bqhash {

struct ALConfig {
  std::size_t T = 10;       // outer iteration cap
  double mu0 = 0.1;         // initial penalty
  double alpha = 10.0;      // penalty growth factor
  double epsilon = 1e-6;    // early stop on |x_t^T A x_t - x_s^T A x_s|
  std::size_t lbfgs_memory = 10;
  std::size_t lbfgs_max_iter = 50;
  double grad_tol = 1e-6;
  /// Length of the displacement along the most negative curvature direction
  /// when an inner solve starts at a stationary point that is a saddle of the
  /// augmented Lagrangian.
  double escape_step = 0.1;

  void validate() const;
};

struct ALState {
  std::vector<double> x;
  std::vector<double> lambda;
  double mu = 0.0;
  std::vector<double> phi;  // x_i^2 - 1
  std::size_t outer_iter = 0;
};

struct ALResult {
  std::vector<double> x;  // binary
  SolverReport report;
  ALState final_state;
  double init_objective = 0.0;
  std::vector<std::size_t> inner_iterations;  // LBFGS iterations per outer step
  std::vector<bool> inner_converged;
  std::vector<double> violation_history;      // max |phi| after each outer step
  std::size_t saddle_escapes = 0;
  bool kept_initialization = false;  // projected point was worse than x0
};

/// x^T A x - Lambda^T Phi(x) + (mu/2) ||Phi(x)||^2.
double al_objective(std::span<const double> x, std::span<const double> lambda, double mu,
                    const SymmetricMatrix& a);

/// 2 A x - 2 Lambda .* x + 2 mu Phi(x) .* x.
std::vector<double> al_gradient(std::span<const double> x, std::span<const double> lambda,
                                double mu, const SymmetricMatrix& a);

/// Spectral relaxation sqrt(n) u_min followed by in-order greedy
/// binarization: x_i = -sgn(xbar^T abar_i), with ties resolved to +1.
std::vector<double> spectral_init(const BQPInstance& inst);

/// Lambda0_i = (A x0)_i / x0_i, which makes x0 a stationary point of the
/// augmented Lagrangian for any mu.
std::vector<double> warm_start_multipliers(const BQPInstance& inst, std::span<const double> x0);

ALResult solve_al(const BQPInstance& inst, const ALConfig& config = {},
                  std::optional<std::vector<double>> x0 = std::nullopt);

}  // namespace bqhash
