#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxkkt/problem.hpp"

namespace proxkkt {

/// Verdict for one convergence hypothesis, checked empirically over the
/// sampled ball. For semidefinite orderings A <= B the check is
/// lambda_min(B - A) >= -1e-10 and `margin` is the worst such eigenvalue
/// gap; for strict scalar conditions `margin` must be positive.
struct ConditionResult {
  std::string id;
  bool holds = false;
  double margin = 0.0;
  Vec witness_x;                 // worst-case sample
  std::optional<Vec> witness_y;  // second sample for pairwise conditions
  std::string note;
};

/// Empirical estimates of the convergence-condition constants over
/// B_r(x0), plus per-condition verdicts.
struct DiagnosticsReport {
  double r = 0.0;
  double K = 0.0;
  int n_samples = 0;
  unsigned seed = 0;

  double K_hat_1 = 0.0;  // max over samples of |f''(x)|
  double K_hat_3 = 0.0;  // max pair ratio |lambda^2(x)-lambda^2(y)| / |x-y|
  double K_3 = 0.0;      // K_hat_3 * sup |g'| over samples
  double alpha_1 = 0.0;  // 2 K_3 / |K - K_hat_1|
  double alpha_0 = 0.0;  // 1 - alpha_1 / 4
  double sup_g_grad = 0.0;

  int degenerate_samples = 0;

  std::vector<Vec> samples;
  std::vector<double> lambda_sq;   // clamped multiplier per sample
  std::vector<char> lambda_valid;  // 0 where the sample was degenerate

  std::vector<ConditionResult> conditions;

  // Advisory, not part of the gating conditions: whether the first step
  // from x0 stayed inside the shrunken ball of radius r (1 - alpha_0).
  double first_step_norm = 0.0;
  double shrunk_ball_radius = 0.0;
  bool first_step_in_shrunk_ball = false;

  const ConditionResult* find(std::string_view id) const;
  bool all_conditions_hold() const;
};

/// Samples n_samples points uniformly in B_r(x0) (deterministic for a
/// fixed seed), estimates the constants, and fills the condition table.
/// Requires a problem with m1 = 0 and m2 = 1. Samples whose constraint
/// gradient is degenerate are skipped and counted; more than half being
/// degenerate raises InsufficientSamples.
DiagnosticsReport estimate_constants(const Problem& p, const Vec& x0, double r,
                                     double K, int n_samples, unsigned seed);

/// Evaluates every condition on the samples already stored in `report`
/// (constants must be estimated first) and rewrites report.conditions.
void check_conditions(const Problem& p, const Vec& x0, double r, double K,
                      DiagnosticsReport& report);

/// Heuristic proximal constant: max(10 * K_hat_1 estimate over B_r(x0), 1).
double suggest_K(const Problem& p, const Vec& x0, double r, int n_samples = 64,
                 unsigned seed = 42);

}  // namespace proxkkt
