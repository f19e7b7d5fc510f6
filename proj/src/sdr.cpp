#include "bqhash/sdr.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "bqhash/linalg.hpp"
#include "bqhash/random.hpp"

namespace bqhash {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd to_eigen(const SymmetricMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.n());
  return Eigen::Map<const RowMajor>(m.data().data(), n, n);
}

SymmetricMatrix from_eigen(const Eigen::MatrixXd& m) {
  std::vector<double> d(static_cast<std::size_t>(m.size()));
  Eigen::Map<RowMajor>(d.data(), m.rows(), m.cols()) = m;
  return SymmetricMatrix(static_cast<std::size_t>(m.rows()), std::move(d));
}

}  // namespace

SDPState solve_sdp(const ShiftedBQP& b, const SdpOptions& options) {
  if (!(options.tol > 0.0)) throw PreconditionError("solve_sdp: tol must be positive");
  if (options.max_iter == 0) throw PreconditionError("solve_sdp: max_iter must be >= 1");
  if (!(options.rho > 0.0)) throw PreconditionError("solve_sdp: rho must be positive");

  const auto start = std::chrono::steady_clock::now();
  const Eigen::MatrixXd cost = to_eigen(b.b);
  const Eigen::Index n = cost.rows();

  // Normalize by the spectral norm so the default rho suits any instance.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(cost, Eigen::EigenvaluesOnly);
  if (spectrum.info() != Eigen::Success) {
    throw NumericalError("solve_sdp: eigensolver did not converge on the cost matrix");
  }
  double scale = spectrum.eigenvalues().cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) scale = 1.0;
  const Eigen::MatrixXd c = cost / scale;

  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd x(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(n);

  double rho = options.rho;
  SDPState state;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    // Affine step: argmin <C, X> + rho/2 ||X - Z + U||^2 s.t. diag(X) = 1.
    x = z - u - c / rho;
    x.diagonal().setOnes();

    // PSD projection of X + U.
    const Eigen::MatrixXd z_prev = z;
    eig.compute(x + u);
    if (eig.info() != Eigen::Success) {
      throw NumericalError("solve_sdp: eigensolver failed at iteration " + std::to_string(it));
    }
    const Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0);
    z = eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().transpose();
    z = 0.5 * (z + z.transpose()).eval();

    u += x - z;

    state.primal_residual =
        (x - z).norm() / (1.0 + std::max(x.norm(), z.norm()));
    state.dual_residual = rho * (z - z_prev).norm() / (1.0 + rho * u.norm());
    state.iterations = it;
    if (std::max(state.primal_residual, state.dual_residual) <= options.tol) {
      state.converged = true;
      break;
    }
    if (options.adapt_every > 0 && it % options.adapt_every == 0) {
      if (state.primal_residual > options.adapt_ratio * state.dual_residual &&
          rho * 2.0 <= options.rho_max) {
        rho *= 2.0;
        u /= 2.0;
      } else if (state.dual_residual > options.adapt_ratio * state.primal_residual &&
                 rho / 2.0 >= options.rho_min) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }

  // Rescale the PSD iterate to unit diagonal; congruence keeps it PSD.
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(std::max(z(i, i), 1e-12));
  Eigen::MatrixXd feasible = inv_sqrt.asDiagonal() * z * inv_sqrt.asDiagonal();
  feasible = 0.5 * (feasible + feasible.transpose()).eval();
  feasible.diagonal().setOnes();

  state.x_var = from_eigen(feasible);
  state.dual = from_eigen(rho * u);
  state.objective = trace_product(b.b, state.x_var);

  // Tightness check: if the sign pattern of the leading eigenvector already
  // attains the relaxed optimum, x x^T is itself an optimal SDP solution, and
  // an exactly rank-one X* keeps the arcsine expectation free of the ADMM
  // error (arcsin is not Lipschitz at +-1).
  std::vector<double> sx = largest_eigenvalue(state.x_var).vector;
  for (double& v : sx) v = v < 0.0 ? -1.0 : 1.0;
  const double rank_one = quadratic_form(b.b, sx);
  if (rank_one <= state.objective + options.tol * (1.0 + std::abs(state.objective))) {
    std::vector<double> outer(static_cast<std::size_t>(n * n));
    for (std::size_t i = 0; i < sx.size(); ++i)
      for (std::size_t j = 0; j < sx.size(); ++j) outer[i * sx.size() + j] = sx[i] * sx[j];
    state.x_var = SymmetricMatrix(sx.size(), std::move(outer));
    state.objective = rank_one;
    state.tight = true;
  }
  state.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return state;
}

RoundingResult randomized_round(const SDPState& state, const ShiftedBQP& b,
                                std::size_t trials, std::uint64_t seed) {
  const std::size_t n = b.n();
  if (trials == 0) throw PreconditionError("randomized_round: trials must be >= 1");
  if (state.x_var.n() != n) throw DimensionError("randomized_round: state/instance size mismatch");

  const CholeskyFactor chol = cholesky_psd(state.x_var);
  RoundingResult out;
  out.f_sdr = state.objective;
  out.jitter_applied = chol.jitter_applied;
  out.sample_objectives.resize(trials);

  std::vector<double> g(n);
  std::vector<double> x(n);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    for (double& v : g) v = rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      const auto li = chol.lower.row(i);
      double xi = 0.0;
      for (std::size_t j = 0; j <= i; ++j) xi += li[j] * g[j];
      x[i] = sign_of(xi);
    }
    const double obj = quadratic_form(b.b, x);
    out.sample_objectives[t] = obj;
    if (t == 0 || obj < out.best_objective) {
      out.best_objective = obj;
      out.best_x = x;
    }
  }
  return out;
}

double rounding_expectation(const SymmetricMatrix& x, const ShiftedBQP& b) {
  if (x.n() != b.n()) throw DimensionError("rounding_expectation: size mismatch");
  const auto xs = x.data();
  const auto bs = b.b.data();
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) total += bs[i] * std::asin(std::clamp(xs[i], -1.0, 1.0));
  return 2.0 / std::numbers::pi * total;
}

BoundReport bound_report(const RoundingResult& result, const SDPState& state,
                         const ShiftedBQP& b, double f_opt, double tol) {
  if (f_opt > tol * (1.0 + std::abs(b.lambda1))) {
    throw PreconditionError("bound_report: f_opt = " + std::to_string(f_opt) +
                            " > 0; the shifted matrix is not negative semidefinite");
  }
  const auto& s = result.sample_objectives;
  if (s.empty()) throw PreconditionError("bound_report: no samples");
  const double count = static_cast<double>(s.size());

  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= count;
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  var = s.size() > 1 ? var / (count - 1.0) : 0.0;

  BoundReport r;
  r.f_opt = f_opt;
  r.f_sdr = result.f_sdr;
  r.sample_mean = mean;
  r.standard_error = std::sqrt(var / count);
  r.closed_form_expectation = rounding_expectation(state.x_var, b);
  const double slack = tol * (1.0 + std::abs(f_opt));
  r.lower_bound_holds = mean >= f_opt - slack;
  r.upper_bound_holds = mean <= 2.0 / std::numbers::pi * f_opt + 3.0 * r.standard_error;
  r.expectation_consistent = std::abs(mean - r.closed_form_expectation) <=
                             3.0 * r.standard_error +
                                 1e-9 * (1.0 + std::abs(r.closed_form_expectation));
  return r;
}

}  // namespace bqhash
