#include "proxkkt/solver_general.hpp"

#include <algorithm>
#include <cmath>

#include "iteration_rethrow.hpp"

namespace proxkkt {

namespace {

void validate_active_set(const std::vector<int>& J, Eigen::Index m2) {
  for (int l : J) {
    if (l < 1 || l > m2) {
      throw DimensionMismatch("active-set index " + std::to_string(l) +
                              " outside 1.." + std::to_string(m2));
    }
  }
}

struct GradientTable {
  std::vector<const Vec*> grads;
  Vec values;
  std::vector<int> active;  // J, sorted
};

GradientTable collect_constraints(const EvaluationBundle& at, const Problem& p,
                                  const std::vector<int>& J) {
  const Eigen::Index m1 = p.num_equalities();
  GradientTable t;
  t.active = J;
  std::sort(t.active.begin(), t.active.end());
  const Eigen::Index size = m1 + static_cast<Eigen::Index>(J.size());
  t.grads.resize(static_cast<std::size_t>(size));
  t.values.resize(size);
  for (Eigen::Index j = 0; j < m1; ++j) {
    t.grads[static_cast<std::size_t>(j)] = &at.eq_grad(j);
    t.values(j) = at.eq_value(j);
  }
  for (std::size_t i = 0; i < t.active.size(); ++i) {
    const Eigen::Index l = t.active[i] - 1;
    t.grads[static_cast<std::size_t>(m1) + i] = &at.ineq_grad(l);
    t.values(m1 + static_cast<Eigen::Index>(i)) = at.ineq_value(l);
  }
  return t;
}

MultiplierSystem assemble(const ShiftedFactorization& fac,
                          const EvaluationBundle& at, const Problem& p,
                          const std::vector<int>& J) {
  const GradientTable t = collect_constraints(at, p, J);
  const Eigen::Index size = t.values.size();

  MultiplierSystem sys;
  sys.active = t.active;
  sys.matrix.resize(size, size);
  sys.rhs.resize(size);
  if (size == 0) return sys;

  const Vec u_f = fac.solve(at.f_grad());
  std::vector<Vec> u_c(static_cast<std::size_t>(size));
  for (Eigen::Index b = 0; b < size; ++b) {
    u_c[static_cast<std::size_t>(b)] = fac.solve(*t.grads[static_cast<std::size_t>(b)]);
  }
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = 0; b < size; ++b) {
      sys.matrix(a, b) = u_c[static_cast<std::size_t>(b)].dot(*t.grads[static_cast<std::size_t>(a)]);
    }
    sys.rhs(a) = t.values(a) - u_f.dot(*t.grads[static_cast<std::size_t>(a)]);
  }
  return sys;
}

// Assembles and solves the restricted system for a prefactored f''+K I.
MultiplierState solve_system(const ShiftedFactorization& fac,
                             const EvaluationBundle& at, const Problem& p,
                             const std::vector<int>& J) {
  const Eigen::Index m1 = p.num_equalities();
  MultiplierSystem sys = assemble(fac, at, p, J);
  const Eigen::Index size = sys.rhs.size();

  MultiplierState ms;
  ms.lambda_h = Vec::Zero(m1);
  ms.lambda_g_sq = Vec::Zero(p.num_inequalities());
  ms.active = sys.active;
  if (size == 0) return ms;

  Vec solution(size);
  if (size == 1) {
    const double pivot = sys.matrix(0, 0);
    if (std::abs(pivot) <= 1e-14 * (1.0 + std::abs(pivot))) {
      ms.least_squares_fallback = true;
      solution(0) = 0.0;
    } else {
      solution(0) = sys.rhs(0) / pivot;
    }
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys.matrix);
    ms.least_squares_fallback = cod.rank() < size;
    solution = cod.solve(sys.rhs);
  }

  for (Eigen::Index j = 0; j < m1; ++j) {
    ms.lambda_h(j) = solution(j);
  }
  for (std::size_t i = 0; i < ms.active.size(); ++i) {
    ms.lambda_g_sq(ms.active[i] - 1) =
        solution(m1 + static_cast<Eigen::Index>(i));
  }
  return ms;
}

Vec step_from_state(const ShiftedFactorization& fac, const EvaluationBundle& at,
                    const Problem& p, const MultiplierState& ms) {
  Vec rhs = at.f_grad();
  for (Eigen::Index j = 0; j < p.num_equalities(); ++j) {
    rhs += ms.lambda_h(j) * at.eq_grad(j);
  }
  for (Eigen::Index l = 0; l < p.num_inequalities(); ++l) {
    rhs += ms.lambda_g_sq(l) * at.ineq_grad(l);
  }
  return at.x() - fac.solve(rhs);
}

ActiveSetResolution resolve(const ShiftedFactorization& fac,
                            const EvaluationBundle& at, const Problem& p) {
  const Eigen::Index m2 = p.num_inequalities();
  ActiveSetResolution out;

  std::vector<int> J(static_cast<std::size_t>(m2));
  for (Eigen::Index l = 0; l < m2; ++l) J[static_cast<std::size_t>(l)] = static_cast<int>(l) + 1;

  for (int pass = 0;; ++pass) {
    if (pass > m2) {
      throw ActiveSetCycle("active-set loop exceeded " +
                           std::to_string(m2 + 1) + " passes");
    }
    MultiplierState ms = solve_system(fac, at, p, J);
    if (pass == 0) {
      out.lambda_g_sq_raw = ms.lambda_g_sq;
    }
    out.passes = pass + 1;
    out.used_least_squares |= ms.least_squares_fallback;

    std::vector<int> survivors;
    survivors.reserve(J.size());
    for (int l : ms.active) {
      if (ms.lambda_g_sq(l - 1) > 0.0) survivors.push_back(l);
    }
    if (survivors.size() == ms.active.size()) {
      out.state = std::move(ms);
      return out;
    }
    // Zero the dropped multipliers and re-solve over the survivors.
    J = std::move(survivors);
    if (J.empty()) {
      out.state = solve_system(fac, at, p, J);
      out.passes = pass + 2;
      return out;
    }
  }
}

}  // namespace

KktResiduals general_residuals(const Problem& p, const Vec& x,
                               const MultiplierState& ms) {
  const EvaluationBundle at = evaluate_all(p, x);
  KktResiduals r;
  Vec stat = at.f_grad();
  for (Eigen::Index j = 0; j < p.num_equalities(); ++j) {
    stat += ms.lambda_h(j) * at.eq_grad(j);
    r.equality = std::max(r.equality, std::abs(at.eq_value(j)));
  }
  for (Eigen::Index l = 0; l < p.num_inequalities(); ++l) {
    stat += ms.lambda_g_sq(l) * at.ineq_grad(l);
    r.feasibility = std::max(r.feasibility, std::max(0.0, at.ineq_value(l)));
    r.complementarity = std::max(
        r.complementarity, std::abs(ms.lambda_g_sq(l) * at.ineq_value(l)));
  }
  r.stationarity = stat.norm();
  return r;
}

MultiplierSystem assemble_multiplier_system(const Vec& x_k, const Problem& p,
                                            double K,
                                            const std::vector<int>& J) {
  if (K <= 0) throw DimensionMismatch("K must be positive");
  if (x_k.size() != p.dim()) {
    throw DimensionMismatch("multiplier system: point has wrong dimension");
  }
  validate_active_set(J, p.num_inequalities());
  const EvaluationBundle at = evaluate_all(p, x_k);
  ShiftedFactorization fac(at.f_hess(), K);
  return assemble(fac, at, p, J);
}

MultiplierState multiplier_system(const Vec& x_k, const Problem& p, double K,
                                  const std::vector<int>& J) {
  if (K <= 0) throw DimensionMismatch("K must be positive");
  if (x_k.size() != p.dim()) {
    throw DimensionMismatch("multiplier_system: point has wrong dimension");
  }
  validate_active_set(J, p.num_inequalities());
  const EvaluationBundle at = evaluate_all(p, x_k);
  ShiftedFactorization fac(at.f_hess(), K);
  return solve_system(fac, at, p, J);
}

ActiveSetResolution active_set_resolve(const Vec& x_k, const Problem& p,
                                       double K) {
  if (K <= 0) throw DimensionMismatch("K must be positive");
  const EvaluationBundle at = evaluate_all(p, x_k);
  ShiftedFactorization fac(at.f_hess(), K);
  return resolve(fac, at, p);
}

Vec general_step(const Vec& x_k, const MultiplierState& ms, const Problem& p,
                 double K) {
  if (ms.lambda_h.size() != p.num_equalities() ||
      ms.lambda_g_sq.size() != p.num_inequalities()) {
    throw DimensionMismatch(
        "general_step: multiplier state does not match the problem's "
        "constraint counts");
  }
  const EvaluationBundle at = evaluate_all(p, x_k);
  ShiftedFactorization fac(at.f_hess(), K);
  return step_from_state(fac, at, p, ms);
}

GeneralSolveReport solve_general(const Problem& p, const Vec& x0,
                                 const SolverConfig& cfg) {
  if (x0.size() != p.dim()) {
    throw DimensionMismatch("solve_general: x0 has wrong dimension");
  }
  if (cfg.K <= 0) throw DimensionMismatch("K must be positive");

  GeneralSolveReport report;
  if (p.constraint_count_warning()) {
    report.warnings.push_back(*p.constraint_count_warning());
  }

  Vec x = x0;
  for (int k = 0;; ++k) {
    Vec x_next;
    IterateRecord rec;
    try {
      const EvaluationBundle at = evaluate_all(p, x);
      ShiftedFactorization fac(at.f_hess(), cfg.K);
      ActiveSetResolution res = resolve(fac, at, p);
      x_next = step_from_state(fac, at, p, res.state);

      rec.k = k;
      rec.x = x;
      rec.lambda_h = res.state.lambda_h;
      rec.lambda_g_sq = res.state.lambda_g_sq;
      rec.lambda_g_sq_raw = res.lambda_g_sq_raw;
      rec.active = res.state.active;
      rec.step_norm = (x_next - x).norm();
      rec.kkt = general_residuals(p, x, res.state);
      if (res.used_least_squares) {
        report.least_squares_fallback_used = true;
      }
    } catch (const Error&) {
      internal::rethrow_at_iteration(k);
    }
    const double step_norm = rec.step_norm;
    report.iterates.push_back(std::move(rec));
    x = x_next;

    if (step_norm < cfg.e1) {
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
    ActiveSetResolution res = active_set_resolve(x, p, cfg.K);
    report.multipliers = std::move(res.state);
  } catch (const Error&) {
    const auto& last = report.iterates.back();
    report.multipliers.lambda_h = last.lambda_h;
    report.multipliers.lambda_g_sq = last.lambda_g_sq;
    report.multipliers.active = last.active;
  }
  report.kkt = general_residuals(p, x, report.multipliers);
  return report;
}

}  // namespace proxkkt
