#include "bqhash/bqp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "bqhash/linalg.hpp"

namespace bqhash {

namespace {

void check_bit_args(const CodeMatrix& z, const TargetMatrix& y, std::size_t k) {
  if (k >= z.bits()) {
    throw DimensionError("assemble_bit_instance: bit index " + std::to_string(k) +
                         " out of range [0, " + std::to_string(z.bits()) + ")");
  }
  if (y.y.n() != z.samples()) {
    throw DimensionError("assemble_bit_instance: target is " + std::to_string(y.y.n()) +
                         " x " + std::to_string(y.y.n()) + " but codes have " +
                         std::to_string(z.samples()) + " samples");
  }
}

}  // namespace

BQPInstance assemble_bit_instance(const CodeMatrix& z, const TargetMatrix& y, std::size_t k) {
  check_bit_args(z, y, k);
  return assemble_bit_instance(z.gram(), z, y, k);
}

BQPInstance assemble_bit_instance(const SymmetricMatrix& gram, const CodeMatrix& z,
                                  const TargetMatrix& y, std::size_t k) {
  check_bit_args(z, y, k);
  const std::size_t n = z.samples();
  if (gram.n() != n) throw DimensionError("assemble_bit_instance: Gram size mismatch");
  const auto row = z.row(k);
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = gram.row(i);
    const auto t = y.y.row(i);
    const double zi = row[i];
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = g[j] - zi * row[j] - t[j];
  }
  return {SymmetricMatrix(n, std::move(a))};
}

ShiftedBQP shift_instance(const BQPInstance& inst) {
  const EigenPair top = largest_eigenvalue(inst.a);
  ShiftedBQP out{inst.a.shifted(-top.value), top.value};
  const double top_b = largest_eigenvalue(out.b).value;
  if (top_b > 1e-6 * (1.0 + std::abs(top.value))) {
    throw NumericalError("shift_instance: shifted matrix has eigenvalue " +
                         std::to_string(top_b) + " > 0");
  }
  return out;
}

BruteForceResult brute_force(const SymmetricMatrix& a) {
  const std::size_t n = a.n();
  if (n > kBruteForceMaxN) {
    throw PreconditionError("brute_force: n = " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(kBruteForceMaxN));
  }
  const std::size_t free_bits = n - 1;

  // Gray-code walk over x[1..n-1] with x[0] = +1; r tracks A x.
  std::vector<double> x(n, -1.0);
  x[0] = 1.0;
  std::vector<double> r = multiply(a, x);
  double f = 0.0;
  for (std::size_t i = 0; i < n; ++i) f += x[i] * r[i];

  // Ordering key: bit (n-1-i) set iff x[i] = +1, so numeric order of keys is
  // lexicographic order of vectors under -1 < +1.
  const auto key_bit = [n](std::size_t i) { return std::uint32_t{1} << (n - 1 - i); };
  std::uint32_t key = key_bit(0);

  double best = f;
  std::vector<std::uint32_t> candidates{key};
  const double scale = [&] {
    double s = 0.0;
    for (double v : a.data()) s += std::abs(v);
    return s;
  }();
  const double loose = 1e-7 * (1.0 + scale);

  const std::uint64_t total = std::uint64_t{1} << free_bits;
  for (std::uint64_t step = 1; step < total; ++step) {
    const std::size_t i = 1 + static_cast<std::size_t>(std::countr_zero(step));
    const double xi = x[i];
    f += -4.0 * xi * (r[i] - a(i, i) * xi);
    const auto col = a.row(i);
    for (std::size_t j = 0; j < n; ++j) r[j] -= 2.0 * xi * col[j];
    x[i] = -xi;
    key ^= key_bit(i);

    if (f < best - loose) {
      best = f;
      candidates.clear();
      candidates.push_back(key);
    } else if (f <= best + loose) {
      candidates.push_back(key);
    }
  }

  const auto decode = [n, &key_bit](std::uint32_t k) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (k & key_bit(i)) ? 1.0 : -1.0;
    return v;
  };

  std::vector<std::pair<std::uint32_t, double>> exact;
  exact.reserve(candidates.size());
  double exact_best = INFINITY;
  for (std::uint32_t k : candidates) {
    const double v = quadratic_form(a, decode(k));
    exact.emplace_back(k, v);
    exact_best = std::min(exact_best, v);
  }
  const double tol = 1e-9 * (1.0 + std::abs(exact_best));
  std::vector<std::uint32_t> winners;
  for (const auto& [k, v] : exact)
    if (v <= exact_best + tol) winners.push_back(k);
  std::sort(winners.begin(), winners.end());

  BruteForceResult out;
  out.minimizers.reserve(winners.size());
  for (std::uint32_t k : winners) out.minimizers.push_back(decode(k));
  out.x = out.minimizers.front();
  out.objective = quadratic_form(a, out.x);
  return out;
}

}  // namespace bqhash
