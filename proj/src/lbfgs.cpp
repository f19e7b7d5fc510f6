#include "bqhash/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "bqhash/core.hpp"

namespace bqhash {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;  // 1 / (s^T y)
};

// Two-loop recursion: returns -H g.
std::vector<double> search_direction(const std::deque<CurvaturePair>& pairs,
                                     std::span<const double> grad) {
  std::vector<double> q(grad.begin(), grad.end());
  std::vector<double> alpha(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    const auto& p = pairs[k];
    alpha[k] = p.rho * dot(p.s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * p.y[i];
  }
  double gamma = 1.0;
  if (!pairs.empty()) {
    const auto& last = pairs.back();
    gamma = dot(last.s, last.y) / dot(last.y, last.y);
  } else {
    const double g = norm_inf(grad);
    gamma = g > 1.0 ? 1.0 / g : 1.0;
  }
  for (double& v : q) v *= gamma;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    const double beta = p.rho * dot(p.y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * p.s[i];
  }
  for (double& v : q) v = -v;
  return q;
}

double evaluate(const ObjectiveFn& fn, std::span<const double> x, std::span<double> grad,
                std::size_t iteration) {
  const double f = fn(x, grad);
  if (!std::isfinite(f)) {
    throw NumericalError("lbfgs_minimize: non-finite objective at iteration " +
                         std::to_string(iteration));
  }
  return f;
}

}  // namespace

LbfgsResult lbfgs_minimize(const ObjectiveFn& fn, std::vector<double> x0,
                           const LbfgsOptions& options) {
  if (options.memory == 0) throw PreconditionError("lbfgs_minimize: memory must be >= 1");
  const std::size_t n = x0.size();

  LbfgsResult out;
  out.x = std::move(x0);
  std::vector<double> grad(n);
  double f = evaluate(fn, out.x, grad, 0);

  std::deque<CurvaturePair> pairs;
  std::vector<double> x_new(n);
  std::vector<double> grad_new(n);

  std::size_t it = 0;
  for (; it < options.max_iter; ++it) {
    if (norm_inf(grad) <= options.grad_tol) {
      out.converged = true;
      break;
    }
    std::vector<double> dir = search_direction(pairs, grad);
    double slope = dot(grad, dir);
    if (!(slope < 0.0)) {
      // Not a descent direction: drop the memory and fall back to -g.
      pairs.clear();
      dir = search_direction(pairs, grad);
      slope = dot(grad, dir);
    }

    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (std::size_t bt = 0; bt <= options.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = out.x[i] + step * dir[i];
      f_new = evaluate(fn, x_new, grad_new, it + 1);
      if (f_new <= f + options.armijo_c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no progress possible along any tried step

    CurvaturePair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - out.x[i];
      p.y[i] = grad_new[i] - grad[i];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-10 * std::sqrt(dot(p.s, p.s)) * std::sqrt(dot(p.y, p.y))) {
      p.rho = 1.0 / sy;
      pairs.push_back(std::move(p));
      if (pairs.size() > options.memory) pairs.pop_front();
    }

    out.x.swap(x_new);
    grad.swap(grad_new);
    f = f_new;
  }
  if (!out.converged && norm_inf(grad) <= options.grad_tol) out.converged = true;

  out.objective = f;
  out.grad_norm_inf = norm_inf(grad);
  out.iterations = it;
  return out;
}

}  // namespace bqhash
