#pragma once

#include "proxkkt/problem.hpp"
#include "proxkkt/solver_types.hpp"

namespace proxkkt {

/// Inequality multiplier for a problem with exactly one inequality and no
/// equalities. Returns (raw, clamped) where
///   raw = -(( (f''+K I)^{-1} f' ) . g' - g) / (( (f''+K I)^{-1} g' ) . g')
/// at x_k and clamped = max(0, raw). Throws DegenerateConstraintGradient
/// when the denominator falls below 1e-14 (1 + |g'|^2).
std::pair<double, double> multiplier_single(const Vec& x_k, const Problem& p,
                                            double K);

/// x_{k+1} = x_k - (f''(x_k) + K I)^{-1} (f'(x_k) + lambda_sq g'(x_k)).
Vec prox_newton_step(const Vec& x_k, double lambda_sq, const Problem& p,
                     double K);

/// Multiplier computation followed by the proximal Newton update.
SingleStepOutcome single_step(const Vec& x_k, const Problem& p, double K);

/// Iterates single_step until |x_{k+1} - x_k| < cfg.e1 or the iteration
/// cap is reached. A start with g(x0) >= 0 is reported as a warning and
/// the run proceeds. Errors raised inside an iteration propagate with
/// the iteration index attached to the message.
SolveReport solve_single(const Problem& p, const Vec& x0,
                         const SolverConfig& cfg);

}  // namespace proxkkt
