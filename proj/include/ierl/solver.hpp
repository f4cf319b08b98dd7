#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "ierl/error.hpp"
#include "ierl/linalg.hpp"

namespace ierl {

// Fixed regression target [1, -1, 1, -1]: similar contexts pull the weight
// towards +1, dissimilar contexts towards -1.
template <typename Scalar>
Vector4<Scalar> target_vector() {
  return Vector4<Scalar>(1, -1, 1, -1);
}

template <typename Scalar>
struct SolverOptions {
  Scalar learning_rate = Scalar(0.25);
  Scalar l1_weight = Scalar(1);
  Scalar tol = Scalar(1e-8);
  long max_iters = 10000;
  // When set, convergence additionally requires max_k |alpha_k - alpha_k_prev| < param_tol.
  std::optional<Scalar> param_tol;
  bool record_trace = false;
};

template <typename Scalar>
struct SolveResult {
  Vector4<Scalar> alpha;
  Scalar objective;
  long steps = 0;
  bool converged = false;
  // Objective after each iteration, prefixed by the initial objective.
  std::vector<Scalar> trace;
};

template <typename Scalar>
Scalar soft_threshold(Scalar a, Scalar tau) {
  const Scalar shrunk = std::abs(a) - tau;
  if (shrunk <= Scalar(0)) return Scalar(0);
  return a < Scalar(0) ? -shrunk : shrunk;
}

// ||I - alpha (.) D||_2^2 + lambda ||alpha||_1
template <typename Scalar>
Scalar ensemble_objective(const Vector4<Scalar>& d, const Vector4<Scalar>& target,
                          const Vector4<Scalar>& alpha, Scalar l1_weight) {
  return (target - alpha.cwiseProduct(d)).squaredNorm() + l1_weight * alpha.template lpNorm<1>();
}

template <typename Scalar>
void validate(const SolverOptions<Scalar>& options) {
  if (!(options.learning_rate > Scalar(0)) || !std::isfinite(options.learning_rate))
    throw ConfigError("learning rate must be positive");
  if (!(options.l1_weight >= Scalar(0)) || !std::isfinite(options.l1_weight))
    throw ConfigError("l1 weight must be non-negative");
  if (!(options.tol > Scalar(0))) throw ConfigError("tolerance must be positive");
  if (options.max_iters <= 0) throw ConfigError("max_iters must be positive");
  if (options.param_tol && !(*options.param_tol > Scalar(0)))
    throw ConfigError("parameter tolerance must be positive");
}

// Proximal gradient descent (ISTA) on the per-sentence objective: a gradient step
// on the quadratic term followed by soft thresholding at learning_rate * lambda.
// Stops once the objective changes by less than tol between iterations.
template <typename Scalar>
SolveResult<Scalar> solve_alpha(const Vector4<Scalar>& d, const Vector4<Scalar>& target,
                                const Vector4<Scalar>& alpha0,
                                const SolverOptions<Scalar>& options) {
  validate(options);
  if (!d.allFinite()) throw DataError("solve_alpha: non-finite D vector");
  if (!alpha0.allFinite()) throw DataError("solve_alpha: non-finite initial alpha");

  const Scalar lr = options.learning_rate;
  const Scalar threshold = lr * options.l1_weight;

  SolveResult<Scalar> result;
  result.alpha = alpha0;
  result.objective = ensemble_objective(d, target, alpha0, options.l1_weight);
  if (options.record_trace) result.trace.push_back(result.objective);

  for (long step = 1; step <= options.max_iters; ++step) {
    const Vector4<Scalar> residual = target - result.alpha.cwiseProduct(d);
    const Vector4<Scalar> gradient = Scalar(-2) * d.cwiseProduct(residual);
    const Vector4<Scalar> moved = result.alpha - lr * gradient;
    Vector4<Scalar> next;
    for (int k = 0; k < 4; ++k) next[k] = soft_threshold(moved[k], threshold);

    const Scalar objective = ensemble_objective(d, target, next, options.l1_weight);
    if (!std::isfinite(objective) || !next.allFinite()) throw DivergedError(step);

    const Scalar change = std::abs(result.objective - objective);
    const Scalar param_change = (next - result.alpha).cwiseAbs().maxCoeff();
    result.alpha = next;
    result.objective = objective;
    result.steps = step;
    if (options.record_trace) result.trace.push_back(objective);

    if (change < options.tol && (!options.param_tol || param_change < *options.param_tol)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace ierl
