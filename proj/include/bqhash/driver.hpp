#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bqhash/al.hpp"
#include "bqhash/core.hpp"
#include "bqhash/sdr.hpp"
#include "bqhash/similarity.hpp"

namespace bqhash {

enum class Backend { SDR, AL };

const char* backend_name(Backend backend) noexcept;

struct SdrConfig {
  std::size_t trials = 100;
  SdpOptions sdp;
};

struct InferenceConfig {
  std::size_t code_length = 8;
  std::size_t max_iter = 3;  // sweeps over all bits
  Backend backend = Backend::AL;
  SdrConfig sdr;
  ALConfig al;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One row update of the coordinate descent.
struct BitUpdate {
  std::size_t sweep = 0;
  std::size_t bit = 0;
  double objective = 0.0;       // global ||Z^T Z - Y||_F^2 after this update
  double bqp_before = 0.0;      // x^T A x of the row before the update
  double bqp_candidate = 0.0;   // x^T A x of the backend's solution
  bool accepted = false;
  SolverReport report;
};

struct InferenceTrace {
  double initial_objective = 0.0;
  std::vector<BitUpdate> updates;  // max_iter * L entries
  double wall_time = 0.0;

  std::vector<double> objectives() const;
};

struct InferenceResult {
  CodeMatrix codes;
  InferenceTrace trace;
};

/// PCA to L dimensions, then each projected row thresholded at its mean
/// (+1 strictly above, -1 otherwise).
CodeMatrix init_codes(const DenseMatrix& x, std::size_t code_length);

/// ||Z^T Z - Y||_F^2.
double global_objective(const CodeMatrix& z, const TargetMatrix& y);

/// Solves one bit's BQP with the configured backend. `stream` seeds the SDR
/// rounding.
std::vector<double> solve_bit(const BQPInstance& inst, const InferenceConfig& config,
                              std::uint64_t stream, SolverReport& report);

/// Coordinate descent from the PCA initialization of x.
InferenceResult infer_codes(const DenseMatrix& x, const TargetMatrix& y,
                            const InferenceConfig& config);

/// Coordinate descent from given initial codes.
InferenceResult infer_codes(CodeMatrix initial, const TargetMatrix& y,
                            const InferenceConfig& config);

}  // namespace bqhash
