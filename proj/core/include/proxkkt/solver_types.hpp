#pragma once

#include <string>
#include <vector>

#include "proxkkt/dense_linalg.hpp"

namespace proxkkt {

enum class Termination {
  StepTolerance,
  IterationCap,
  SingularSystem,
  EvaluationFailure,
  ActiveSetCycle,
};

const char* to_string(Termination t);

struct SolverConfig {
  double K;               // proximal constant
  double e1 = 1e-5;       // step-norm stopping tolerance
  int k_max = 500;        // iteration cap
  // Diagnostics defaults, used when a caller runs the condition checks.
  double diagnostics_radius = 1.0;
  int diagnostics_samples = 256;
  unsigned seed = 42;
};

struct KktResiduals {
  double stationarity = 0.0;    // |f' + sum lambda_h h' + sum lambda_g^2 g'|
  double equality = 0.0;        // max_j |h_j|
  double feasibility = 0.0;     // max_l max(0, g_l)
  double complementarity = 0.0; // max_l |lambda_g_l^2 * g_l|
};

/// One iteration of either solver: the point the step started from, the
/// multipliers computed there (raw = first pass over all inequalities,
/// before clamping), the active set, and the step taken.
struct IterateRecord {
  int k = 0;
  Vec x;
  Vec lambda_h;
  Vec lambda_g_sq;
  Vec lambda_g_sq_raw;
  std::vector<int> active;  // 1-based inequality indices
  double step_norm = 0.0;
  KktResiduals kkt;
};

/// Multiplier + step outcome of a single-inequality iteration.
struct SingleStepOutcome {
  double lambda_sq_raw = 0.0;  // may be negative
  double lambda_sq = 0.0;      // max(0, raw)
  Vec x_next;
  double step_norm = 0.0;
};

struct SolveReport {
  std::vector<IterateRecord> iterates;
  Termination termination = Termination::IterationCap;
  Vec x_tilde;
  double lambda_tilde_sq = 0.0;
  double lambda_tilde_sq_raw = 0.0;
  KktResiduals kkt;
  std::vector<std::string> warnings;

  int iterations() const { return static_cast<int>(iterates.size()); }
};

/// Joint multiplier state of the general algorithm. Entries of
/// lambda_g_sq outside `active` are exactly zero; entries inside are
/// strictly positive once the active-set loop has finished.
struct MultiplierState {
  Vec lambda_h;
  Vec lambda_g_sq;
  std::vector<int> active;  // 1-based, sorted
  bool least_squares_fallback = false;
};

struct GeneralSolveReport {
  std::vector<IterateRecord> iterates;
  Termination termination = Termination::IterationCap;
  Vec x_tilde;
  MultiplierState multipliers;
  KktResiduals kkt;
  std::vector<std::string> warnings;
  bool least_squares_fallback_used = false;

  int iterations() const { return static_cast<int>(iterates.size()); }
};

}  // namespace proxkkt
