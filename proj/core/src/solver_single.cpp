#include "proxkkt/solver_single.hpp"

#include <cmath>
#include <string>

#include "iteration_rethrow.hpp"

namespace proxkkt {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::StepTolerance: return "step-tolerance";
    case Termination::IterationCap: return "iteration-cap";
    case Termination::SingularSystem: return "singular-system";
    case Termination::EvaluationFailure: return "evaluation-failure";
    case Termination::ActiveSetCycle: return "active-set-cycle";
  }
  return "?";
}

namespace {

void require_single_inequality(const Problem& p, const char* who) {
  if (p.num_equalities() != 0 || p.num_inequalities() != 1) {
    throw DimensionMismatch(std::string(who) +
                            " requires m1 = 0 and m2 = 1, got m1 = " +
                            std::to_string(p.num_equalities()) + ", m2 = " +
                            std::to_string(p.num_inequalities()));
  }
}

std::pair<double, double> multiplier_from_factorization(
    const ShiftedFactorization& fac, const Vec& f_grad, double g_value,
    const Vec& g_grad) {
  const double denom = fac.solve(g_grad).dot(g_grad);
  if (denom <= 1e-14 * (1.0 + g_grad.squaredNorm())) {
    throw DegenerateConstraintGradient(
        "multiplier denominator ((f''+K I)^{-1} g') . g' = " +
        std::to_string(denom) + " is not safely positive");
  }
  const double numer = fac.solve(f_grad).dot(g_grad) - g_value;
  const double raw = -(numer / denom);
  return {raw, std::max(0.0, raw)};
}

KktResiduals residuals_single(const EvaluationBundle& at, double lambda_sq) {
  KktResiduals r;
  r.stationarity = (at.f_grad() + lambda_sq * at.ineq_grad(0)).norm();
  r.feasibility = std::max(0.0, at.ineq_value(0));
  r.complementarity = std::abs(lambda_sq * at.ineq_value(0));
  return r;
}

SingleStepOutcome step_with_record(const Vec& x, const Problem& p, double K,
                                   int k, IterateRecord& rec) {
  const EvaluationBundle at = evaluate_all(p, x);
  ShiftedFactorization fac(at.f_hess(), K);
  auto [raw, clamped] = multiplier_from_factorization(
      fac, at.f_grad(), at.ineq_value(0), at.ineq_grad(0));
  Vec rhs = at.f_grad();
  rhs += clamped * at.ineq_grad(0);

  SingleStepOutcome step;
  step.lambda_sq_raw = raw;
  step.lambda_sq = clamped;
  step.x_next = x - fac.solve(rhs);
  step.step_norm = (step.x_next - x).norm();

  rec.k = k;
  rec.x = x;
  rec.lambda_h = Vec(0);
  rec.lambda_g_sq = Vec::Constant(1, clamped);
  rec.lambda_g_sq_raw = Vec::Constant(1, raw);
  if (clamped > 0.0) rec.active = {1};
  rec.step_norm = step.step_norm;
  rec.kkt = residuals_single(at, clamped);
  return step;
}

}  // namespace

std::pair<double, double> multiplier_single(const Vec& x_k, const Problem& p,
                                            double K) {
  require_single_inequality(p, "multiplier_single");
  if (K <= 0) throw DimensionMismatch("K must be positive");
  const EvaluationBundle at = evaluate_all(p, x_k);
  ShiftedFactorization fac(at.f_hess(), K);
  return multiplier_from_factorization(fac, at.f_grad(), at.ineq_value(0),
                                       at.ineq_grad(0));
}

Vec prox_newton_step(const Vec& x_k, double lambda_sq, const Problem& p,
                     double K) {
  require_single_inequality(p, "prox_newton_step");
  if (lambda_sq < 0) {
    throw DimensionMismatch("prox_newton_step requires lambda_sq >= 0");
  }
  const EvaluationBundle at = evaluate_all(p, x_k);
  Vec rhs = at.f_grad();
  rhs += lambda_sq * at.ineq_grad(0);
  return x_k - regularized_solve(at.f_hess(), K, rhs);
}

SingleStepOutcome single_step(const Vec& x_k, const Problem& p, double K) {
  require_single_inequality(p, "single_step");
  IterateRecord unused;
  return step_with_record(x_k, p, K, 0, unused);
}

SolveReport solve_single(const Problem& p, const Vec& x0,
                         const SolverConfig& cfg) {
  require_single_inequality(p, "solve_single");
  if (x0.size() != p.dim()) {
    throw DimensionMismatch("solve_single: x0 has wrong dimension");
  }
  if (cfg.K <= 0) throw DimensionMismatch("K must be positive");

  SolveReport report;
  if (p.constraint_count_warning()) {
    report.warnings.push_back(*p.constraint_count_warning());
  }
  if (p.inequality(0).value(x0) >= 0.0) {
    report.warnings.push_back(
        "g(x0) >= 0: start point is not strictly feasible, proceeding anyway");
  }

  Vec x = x0;
  for (int k = 0;; ++k) {
    SingleStepOutcome step;
    IterateRecord rec;
    try {
      step = step_with_record(x, p, cfg.K, k, rec);
    } catch (const Error&) {
      internal::rethrow_at_iteration(k);
    }
    report.iterates.push_back(std::move(rec));
    x = step.x_next;

    if (step.step_norm < cfg.e1) {
      report.termination = Termination::StepTolerance;
      break;
    }
    if (k + 1 >= cfg.k_max) {
      report.termination = Termination::IterationCap;
      break;
    }
  }

  report.x_tilde = x;
  try {
    auto [raw, clamped] = multiplier_single(x, p, cfg.K);
    report.lambda_tilde_sq_raw = raw;
    report.lambda_tilde_sq = clamped;
  } catch (const Error&) {
    // Degenerate limit point: reuse the multiplier of the last step.
    const auto& last = report.iterates.back();
    report.lambda_tilde_sq_raw = last.lambda_g_sq_raw(0);
    report.lambda_tilde_sq = last.lambda_g_sq(0);
  }
  report.kkt = residuals_single(evaluate_all(p, x), report.lambda_tilde_sq);
  return report;
}

}  // namespace proxkkt
