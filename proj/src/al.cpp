#include "bqhash/al.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "bqhash/lbfgs.hpp"
#include "bqhash/linalg.hpp"

namespace bqhash {

namespace {

void check_dims(std::span<const double> x, std::span<const double> lambda,
                const SymmetricMatrix& a, const char* where) {
  if (x.size() != a.n() || lambda.size() != a.n()) {
    throw DimensionError(std::string(where) + ": expected vectors of length " +
                         std::to_string(a.n()));
  }
}

void require_binary(std::span<const double> x, const char* where) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 1.0 && x[i] != -1.0) {
      throw PreconditionError(std::string(where) + ": entry " + std::to_string(i) +
                              " is not +-1");
    }
  }
}

// Shared evaluation so the objective and gradient reuse one A x product.
double evaluate(std::span<const double> x, std::span<const double> lambda, double mu,
                const SymmetricMatrix& a, std::span<double> grad) {
  const std::vector<double> ax = multiply(a, x);
  double quad = 0.0;
  double lin = 0.0;
  double pen = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phi = x[i] * x[i] - 1.0;
    quad += x[i] * ax[i];
    lin += lambda[i] * phi;
    pen += phi * phi;
    if (!grad.empty()) grad[i] = 2.0 * ax[i] - 2.0 * lambda[i] * x[i] + 2.0 * mu * phi * x[i];
  }
  return quad - lin + 0.5 * mu * pen;
}

SymmetricMatrix lagrangian_hessian(const SymmetricMatrix& a, std::span<const double> x,
                                   std::span<const double> lambda, double mu) {
  const std::size_t n = a.n();
  std::vector<double> h(a.data().begin(), a.data().end());
  for (double& v : h) v *= 2.0;
  for (std::size_t i = 0; i < n; ++i)
    h[i * n + i] += -2.0 * lambda[i] + 2.0 * mu * (3.0 * x[i] * x[i] - 1.0);
  return SymmetricMatrix(n, std::move(h));
}

}  // namespace

void ALConfig::validate() const {
  if (T < 1) throw PreconditionError("ALConfig: T must be >= 1");
  if (!(mu0 > 0.0)) throw PreconditionError("ALConfig: mu0 must be positive");
  if (!(alpha > 1.0)) throw PreconditionError("ALConfig: alpha must exceed 1");
  if (!(epsilon > 0.0)) throw PreconditionError("ALConfig: epsilon must be positive");
  if (lbfgs_memory < 1) throw PreconditionError("ALConfig: lbfgs_memory must be >= 1");
  if (lbfgs_max_iter < 1) throw PreconditionError("ALConfig: lbfgs_max_iter must be >= 1");
  if (!(grad_tol > 0.0)) throw PreconditionError("ALConfig: grad_tol must be positive");
  if (!(escape_step >= 0.0)) throw PreconditionError("ALConfig: escape_step must be >= 0");
}

double al_objective(std::span<const double> x, std::span<const double> lambda, double mu,
                    const SymmetricMatrix& a) {
  check_dims(x, lambda, a, "al_objective");
  if (!(mu > 0.0)) throw PreconditionError("al_objective: mu must be positive");
  return evaluate(x, lambda, mu, a, {});
}

std::vector<double> al_gradient(std::span<const double> x, std::span<const double> lambda,
                                double mu, const SymmetricMatrix& a) {
  check_dims(x, lambda, a, "al_gradient");
  if (!(mu > 0.0)) throw PreconditionError("al_gradient: mu must be positive");
  std::vector<double> g(x.size());
  evaluate(x, lambda, mu, a, g);
  return g;
}

std::vector<double> spectral_init(const BQPInstance& inst) {
  const std::size_t n = inst.n();
  const EigenPair bottom = smallest_eigenvector(inst.a);
  std::vector<double> x = bottom.vector;
  const double scale = std::sqrt(static_cast<double>(n));
  for (double& v : x) v *= scale;

  for (std::size_t i = 0; i < n; ++i) {
    const auto col = inst.a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s += x[j] * col[j];
    x[i] = s > 0.0 ? -1.0 : 1.0;
  }
  return x;
}

std::vector<double> warm_start_multipliers(const BQPInstance& inst,
                                           std::span<const double> x0) {
  if (x0.size() != inst.n()) throw DimensionError("warm_start_multipliers: length mismatch");
  require_binary(x0, "warm_start_multipliers");
  std::vector<double> lambda = multiply(inst.a, x0);
  for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] /= x0[i];
  return lambda;
}

ALResult solve_al(const BQPInstance& inst, const ALConfig& config,
                  std::optional<std::vector<double>> x0) {
  config.validate();
  const auto start_time = std::chrono::steady_clock::now();
  const SymmetricMatrix& a = inst.a;
  const std::size_t n = inst.n();

  std::vector<double> init = x0 ? std::move(*x0) : spectral_init(inst);
  if (init.size() != n) throw DimensionError("solve_al: x0 length mismatch");
  require_binary(init, "solve_al");

  ALResult out;
  out.init_objective = quadratic_form(a, init);

  ALState& st = out.final_state;
  st.lambda = warm_start_multipliers(inst, init);
  st.mu = config.mu0;
  std::vector<double> xs = init;
  double xs_obj = out.init_objective;

  LbfgsOptions lbfgs;
  lbfgs.memory = config.lbfgs_memory;
  lbfgs.max_iter = config.lbfgs_max_iter;
  lbfgs.grad_tol = config.grad_tol;

  bool converged = false;
  std::size_t t = 0;
  for (; t < config.T; ++t) {
    const std::vector<double> lambda = st.lambda;
    const double mu = st.mu;
    const ObjectiveFn fn = [&a, &lambda, mu](std::span<const double> x, std::span<double> g) {
      return evaluate(x, lambda, mu, a, g);
    };

    std::vector<double> start = xs;
    std::vector<double> g0(n);
    evaluate(start, lambda, mu, a, g0);
    double g0_inf = 0.0;
    for (double v : g0) g0_inf = std::max(g0_inf, std::abs(v));
    if (g0_inf <= config.grad_tol && config.escape_step > 0.0) {
      // A vanishing gradient leaves L-BFGS in place; if the point is a saddle,
      // move along the most negative curvature direction first.
      const SymmetricMatrix h = lagrangian_hessian(a, start, lambda, mu);
      const EigenPair bottom = smallest_eigenvector(h);
      double h_scale = 0.0;
      for (double v : h.data()) h_scale = std::max(h_scale, std::abs(v));
      if (bottom.value < -1e-10 * (1.0 + h_scale)) {
        std::vector<double> plus = start;
        std::vector<double> minus = start;
        for (std::size_t i = 0; i < n; ++i) {
          plus[i] += config.escape_step * bottom.vector[i];
          minus[i] -= config.escape_step * bottom.vector[i];
        }
        const double fp = evaluate(plus, lambda, mu, a, {});
        const double fm = evaluate(minus, lambda, mu, a, {});
        start = fp <= fm ? std::move(plus) : std::move(minus);
        ++out.saddle_escapes;
      }
    }

    const LbfgsResult inner = lbfgs_minimize(fn, std::move(start), lbfgs);
    out.inner_iterations.push_back(inner.iterations);
    out.inner_converged.push_back(inner.converged);
    const std::vector<double>& xt = inner.x;
    out.violation_history.push_back(binary_violation(xt));

    const double xt_obj = quadratic_form(a, xt);
    if (t > 1 && std::abs(xt_obj - xs_obj) < config.epsilon) {
      xs = xt;
      xs_obj = xt_obj;
      converged = true;
      ++t;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) st.lambda[i] -= mu * (xt[i] * xt[i] - 1.0);
    st.mu = config.alpha * mu;
    xs = xt;
    xs_obj = xt_obj;
  }

  st.x = xs;
  st.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.phi[i] = xs[i] * xs[i] - 1.0;
  st.outer_iter = t;

  std::vector<double> binary(n);
  for (std::size_t i = 0; i < n; ++i) binary[i] = sign_of(xs[i]);
  double objective = quadratic_form(a, binary);
  if (objective > out.init_objective) {
    binary = init;
    objective = out.init_objective;
    out.kept_initialization = true;
  }

  out.x = std::move(binary);
  out.report.objective = objective;
  out.report.iterations = t;
  out.report.feasibility_violation = binary_violation(xs);
  out.report.converged = converged;
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return out;
}

}  // namespace bqhash
