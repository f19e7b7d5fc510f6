#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bqhash/core.hpp"
#include "bqhash/similarity.hpp"

namespace bqhash {

/// min x^T A x over x in {-1, 1}^n, for one bit row of the code matrix.
struct BQPInstance {
  SymmetricMatrix a;

  std::size_t n() const noexcept { return a.n(); }
  double objective(std::span<const double> x) const { return quadratic_form(a, x); }
};

/// B = A - lambda1 I, negative semidefinite. For binary x,
/// x^T B x = x^T A x - n lambda1, so both share the same minimizers.
struct ShiftedBQP {
  SymmetricMatrix b;
  double lambda1 = 0.0;

  std::size_t n() const noexcept { return b.n(); }
  double objective(std::span<const double> x) const { return quadratic_form(b, x); }
};

struct BruteForceResult {
  std::vector<double> x;  // lexicographically smallest minimizer with x[0] = +1
  double objective = 0.0;
  /// Every minimizer with x[0] = +1, in lexicographic order (-1 < +1).
  std::vector<std::vector<double>> minimizers;
};

inline constexpr std::size_t kBruteForceMaxN = 20;

/// a_ij = <z_i, z_j> with bit k excluded, minus y_ij.
BQPInstance assemble_bit_instance(const CodeMatrix& z, const TargetMatrix& y, std::size_t k);

/// Same as above, reusing a cached Gram matrix Z^T Z of the current codes.
BQPInstance assemble_bit_instance(const SymmetricMatrix& gram, const CodeMatrix& z,
                                  const TargetMatrix& y, std::size_t k);

ShiftedBQP shift_instance(const BQPInstance& inst);

/// Exhaustive minimization for n <= 20, fixing x[0] = +1 (the objective is
/// even). Ties are collected within 1e-9 relative of the optimum.
BruteForceResult brute_force(const SymmetricMatrix& a);
inline BruteForceResult brute_force(const BQPInstance& inst) { return brute_force(inst.a); }
inline BruteForceResult brute_force(const ShiftedBQP& inst) { return brute_force(inst.b); }

}  // namespace bqhash
