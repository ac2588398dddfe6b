#pragma once

#include "proxkkt/problem.hpp"
#include "proxkkt/solver_types.hpp"

namespace proxkkt {

/// The assembled multiplier system. Row/column order is equalities
/// first, then the members of J in ascending order:
///   matrix[a][b] = ((f''+K I)^{-1} c_b') . c_a'
///   rhs[a]       = c_a(x_k) - ((f''+K I)^{-1} f') . c_a'
/// where c ranges over {h_j'} then {g_l' : l in J}. The matrix is
/// symmetric because (f''+K I)^{-1} is.
struct MultiplierSystem {
  Eigen::MatrixXd matrix;
  Vec rhs;
  std::vector<int> active;  // J, sorted ascending
};

MultiplierSystem assemble_multiplier_system(const Vec& x_k, const Problem& p,
                                            double K,
                                            const std::vector<int>& J);

/// Solves the joint multiplier system over all equalities and the
/// inequalities in J (1-based). Unknowns are the equality multipliers
/// and the squared inequality multipliers for J; entries for l not in J
/// are zero. A rank-deficient system (linearly dependent constraint
/// gradients) is solved in the minimum-norm least-squares sense and
/// flagged.
MultiplierState multiplier_system(const Vec& x_k, const Problem& p, double K,
                                  const std::vector<int>& J);

/// Outcome of the clamping loop: the resolved multipliers plus the raw
/// first-pass squared multipliers over the full inequality set.
struct ActiveSetResolution {
  MultiplierState state;
  Vec lambda_g_sq_raw;  // pass-1 solution with J = {1..m2}
  int passes = 0;
  bool used_least_squares = false;  // any pass hit a rank-deficient system
};

/// Starts from J = {1..m2}, solves the multiplier system, drops every
/// index with a non-positive squared multiplier, and repeats until all
/// remaining multipliers are positive or J is empty. The loop only
/// removes indices, so it finishes within m2+1 passes.
ActiveSetResolution active_set_resolve(const Vec& x_k, const Problem& p,
                                       double K);

/// x_{k+1} = x_k - (f''+K I)^{-1} (f' + sum_j lambda_h_j h_j'
///                                    + sum_l lambda_g_l^2 g_l').
Vec general_step(const Vec& x_k, const MultiplierState& ms, const Problem& p,
                 double K);

/// Full algorithm: active_set_resolve, general_step, stop when
/// |x_{k+1} - x_k| < cfg.e1 or the iteration cap is reached.
GeneralSolveReport solve_general(const Problem& p, const Vec& x0,
                                 const SolverConfig& cfg);

/// KKT residuals of the general problem at (x, multipliers).
KktResiduals general_residuals(const Problem& p, const Vec& x,
                               const MultiplierState& ms);

}  // namespace proxkkt
