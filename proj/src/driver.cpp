#include "bqhash/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "bqhash/bqp.hpp"
#include "bqhash/linalg.hpp"
#include "bqhash/random.hpp"

namespace bqhash {

namespace {

double frobenius_gap(const SymmetricMatrix& gram, const SymmetricMatrix& y) {
  const auto g = gram.data();
  const auto t = y.data();
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g[i] - t[i];
    total += d * d;
  }
  return total;
}

// Checks ||Z^T Z - Y||^2 = ||A||^2 + 2 z^T A z + n^2 for bit k's row z.
void check_bit_decomposition(const SymmetricMatrix& gram, const CodeMatrix& z,
                             const TargetMatrix& y, const BQPInstance& inst, std::size_t k) {
  const std::size_t n = z.samples();
  const auto row = z.row(k);
  std::vector<double> x(row.begin(), row.end());
  double a_sq = 0.0;
  for (double v : inst.a.data()) a_sq += v * v;
  const double expected =
      a_sq + 2.0 * inst.objective(x) + static_cast<double>(n) * static_cast<double>(n);
  const double actual = frobenius_gap(gram, y.y);
  if (std::abs(expected - actual) > 1e-9 * (1.0 + std::abs(actual))) {
    throw NumericalError("bit decomposition self-check failed: " + std::to_string(actual) +
                         " vs " + std::to_string(expected));
  }
}

Error with_context(const Error& e, std::size_t sweep, std::size_t bit) {
  return Error(e.category(),
               "sweep " + std::to_string(sweep) + ", bit " + std::to_string(bit) + ": " + e.what());
}

}  // namespace

const char* backend_name(Backend backend) noexcept {
  return backend == Backend::SDR ? "sdr" : "al";
}

void InferenceConfig::validate() const {
  if (code_length < 1) throw PreconditionError("InferenceConfig: code_length must be >= 1");
  if (max_iter < 1) throw PreconditionError("InferenceConfig: max_iter must be >= 1");
  if (backend == Backend::AL) al.validate();
  if (backend == Backend::SDR && sdr.trials < 1) {
    throw PreconditionError("InferenceConfig: sdr trials must be >= 1");
  }
}

std::vector<double> InferenceTrace::objectives() const {
  std::vector<double> v;
  v.reserve(updates.size());
  for (const auto& u : updates) v.push_back(u.objective);
  return v;
}

CodeMatrix init_codes(const DenseMatrix& x, std::size_t code_length) {
  const std::size_t n = x.cols();
  if (code_length == 0 || code_length > std::min(x.rows(), n)) {
    throw PreconditionError("init_codes: code length " + std::to_string(code_length) +
                            " out of range [1, " + std::to_string(std::min(x.rows(), n)) + "]");
  }
  const DenseMatrix proj = pca_project(x, code_length);
  std::vector<std::int8_t> codes(code_length * n);
  for (std::size_t k = 0; k < code_length; ++k) {
    const auto r = proj.row(k);
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) codes[k * n + j] = r[j] > mean ? 1 : -1;
  }
  return CodeMatrix(code_length, n, std::move(codes));
}

double global_objective(const CodeMatrix& z, const TargetMatrix& y) {
  if (y.y.n() != z.samples()) {
    throw DimensionError("global_objective: target has " + std::to_string(y.y.n()) +
                         " samples, codes have " + std::to_string(z.samples()));
  }
  return frobenius_gap(z.gram(), y.y);
}

std::vector<double> solve_bit(const BQPInstance& inst, const InferenceConfig& config,
                              std::uint64_t stream, SolverReport& report) {
  if (config.backend == Backend::AL) {
    ALResult r = solve_al(inst, config.al);
    report = r.report;
    return std::move(r.x);
  }
  const auto start = std::chrono::steady_clock::now();
  const ShiftedBQP shifted = shift_instance(inst);
  const SDPState state = solve_sdp(shifted, config.sdr.sdp);
  RoundingResult rounded =
      randomized_round(state, shifted, config.sdr.trials, derive_seed(config.seed, stream));
  report.objective = inst.objective(rounded.best_x);
  report.iterations = state.iterations;
  report.feasibility_violation = 0.0;  // rounding is exactly binary
  report.converged = state.converged;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return std::move(rounded.best_x);
}

InferenceResult infer_codes(const DenseMatrix& x, const TargetMatrix& y,
                            const InferenceConfig& config) {
  config.validate();
  if (x.cols() != y.y.n()) {
    throw DimensionError("infer_codes: data has " + std::to_string(x.cols()) +
                         " samples, target has " + std::to_string(y.y.n()));
  }
  return infer_codes(init_codes(x, config.code_length), y, config);
}

InferenceResult infer_codes(CodeMatrix initial, const TargetMatrix& y,
                            const InferenceConfig& config) {
  config.validate();
  if (initial.bits() != config.code_length) {
    throw DimensionError("infer_codes: initial codes have " + std::to_string(initial.bits()) +
                         " bits, config asks for " + std::to_string(config.code_length));
  }
  if (initial.samples() != y.y.n()) {
    throw DimensionError("infer_codes: codes/target sample count mismatch");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = initial.samples();
  const std::size_t bits = config.code_length;

  InferenceResult out{std::move(initial), {}};
  CodeMatrix& z = out.codes;
  const SymmetricMatrix initial_gram = z.gram();
  std::vector<double> gram(initial_gram.data().begin(), initial_gram.data().end());
  out.trace.initial_objective = frobenius_gap(SymmetricMatrix(n, gram), y.y);
  out.trace.updates.reserve(config.max_iter * bits);

  const std::size_t check_bit = static_cast<std::size_t>(derive_seed(config.seed, ~0ULL) % bits);

  for (std::size_t r = 0; r < config.max_iter; ++r) {
    for (std::size_t k = 0; k < bits; ++k) {
      BitUpdate u;
      u.sweep = r;
      u.bit = k;
      try {
        const SymmetricMatrix g(n, gram);
        const BQPInstance inst = assemble_bit_instance(g, z, y, k);
        if (r == 0 && k == check_bit) check_bit_decomposition(g, z, y, inst, k);

        const auto row = z.row(k);
        const std::vector<double> current(row.begin(), row.end());
        u.bqp_before = inst.objective(current);
        const std::vector<double> candidate = solve_bit(inst, config, r * bits + k, u.report);
        u.bqp_candidate = inst.objective(candidate);

        // Global objective changes by 2 * (change in x^T A x) for this row.
        // Ties keep the current row.
        if (u.bqp_candidate < u.bqp_before) {
          u.accepted = true;
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
              gram[i * n + j] += candidate[i] * candidate[j] - current[i] * current[j];
            }
          }
          z.set_row(k, candidate);
        }
        u.objective = frobenius_gap(SymmetricMatrix(n, gram), y.y);
      } catch (const Error& e) {
        throw with_context(e, r, k);
      }
      out.trace.updates.push_back(u);
    }
  }
  out.trace.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace bqhash
