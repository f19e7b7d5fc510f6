#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bqhash/bqp.hpp"
#include "bqhash/core.hpp"

namespace bqhash {

struct SdpOptions {
  double tol = 1e-6;
  std::size_t max_iter = 2000;
  double rho = 1.0;
  /// Residual balancing: every `adapt_every` iterations rho is doubled or
  /// halved when one relative residual exceeds the other by `adapt_ratio`,
  /// staying within [rho_min, rho_max].
  std::size_t adapt_every = 50;
  double adapt_ratio = 10.0;
  double rho_min = 0.1;
  double rho_max = 10.0;
};

/// Solution of min trace(B X) s.t. diag(X) = 1, X PSD.
///
/// `x_var` is the PSD iterate rescaled to unit diagonal, so it is always
/// feasible; `dual` is the scaled ADMM multiplier in units of the normalized
/// cost. Residuals are relative Frobenius norms.
struct SDPState {
  SymmetricMatrix x_var;
  SymmetricMatrix dual;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// The relaxation was found tight: x_var is exactly x x^T for a binary x
  /// whose objective matches the relaxed optimum within tol.
  bool tight = false;
  double objective = 0.0;  // trace(B x_var)
  double wall_time = 0.0;
};

struct RoundingResult {
  std::vector<double> best_x;
  double best_objective = 0.0;
  std::vector<double> sample_objectives;
  double f_sdr = 0.0;
  double jitter_applied = 0.0;
};

/// Diagnostics for the rounding guarantees on a brute-forceable instance.
struct BoundReport {
  double f_opt = 0.0;
  double f_sdr = 0.0;
  double sample_mean = 0.0;
  double standard_error = 0.0;
  /// (2/pi) trace(B arcsin(X*)), the exact expectation of x^T B x under
  /// sign rounding of N(0, X*).
  double closed_form_expectation = 0.0;
  bool lower_bound_holds = false;        // mean >= f_opt - tol
  bool upper_bound_holds = false;        // mean <= (2/pi) f_opt + 3 stderr
  bool expectation_consistent = false;   // |mean - closed form| <= 3 stderr
};

SDPState solve_sdp(const ShiftedBQP& b, const SdpOptions& options = {});

/// Draws xi ~ N(0, X*) via the Cholesky factor of X* and rounds by sgn
/// (sgn(0) = +1). Trial t uses the stream derive_seed(seed, t).
RoundingResult randomized_round(const SDPState& state, const ShiftedBQP& b,
                                std::size_t trials = 100, std::uint64_t seed = 0);

/// (2/pi) trace(B arcsin(X)) with arcsin applied entrywise.
double rounding_expectation(const SymmetricMatrix& x, const ShiftedBQP& b);

BoundReport bound_report(const RoundingResult& result, const SDPState& state,
                         const ShiftedBQP& b, double f_opt, double tol = 1e-6);

}  // namespace bqhash
