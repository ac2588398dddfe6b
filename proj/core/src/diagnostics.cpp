#include "proxkkt/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "proxkkt/solver_single.hpp"

namespace proxkkt {

namespace {

constexpr double kOrderingTol = 1e-10;  // slack for semidefinite orderings

std::vector<Vec> sample_ball(const Vec& x0, double r, int n_samples,
                             unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto n = x0.size();

  std::vector<Vec> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  while (static_cast<int>(samples.size()) < n_samples) {
    Vec dir(n);
    for (Eigen::Index i = 0; i < n; ++i) dir(i) = normal(gen);
    const double norm = dir.norm();
    if (norm < 1e-12) continue;
    const double radius =
        r * std::pow(uniform(gen), 1.0 / static_cast<double>(n));
    samples.push_back(x0 + (radius / norm) * dir);
  }
  return samples;
}

struct SampleData {
  Eigen::VectorXd f_hess_eigs;       // eigenvalues of f''(x), ascending
  Eigen::MatrixXd shifted;           // f''(x) + K I
  Eigen::VectorXd shifted_eigs;      // its eigenvalues, ascending
  Eigen::MatrixXd inv_sqrt;          // (f''(x)+K I)^{-1/2}, valid when PD
  bool shifted_pd = false;
  SymMatrix f_hess = SymMatrix::zero(1);
  SymMatrix g_hess = SymMatrix::zero(1);
  double g_value = 0.0;
  Vec g_grad;
};

SampleData analyze_sample(const Problem& p, const Vec& x, double K) {
  SampleData d;
  const EvaluationBundle at = evaluate_all(p, x);
  d.f_hess = at.f_hess();
  d.g_hess = at.ineq_hess(0);
  d.g_value = at.ineq_value(0);
  d.g_grad = at.ineq_grad(0);

  const Eigen::Index n = p.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_f(d.f_hess.mat());
  if (es_f.info() != Eigen::Success) {
    throw NoConvergence("eigenvalue iteration failed on f''");
  }
  d.f_hess_eigs = es_f.eigenvalues();

  d.shifted = d.f_hess.mat() + K * Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_s(d.shifted);
  if (es_s.info() != Eigen::Success) {
    throw NoConvergence("eigenvalue iteration failed on f'' + K I");
  }
  d.shifted_eigs = es_s.eigenvalues();
  d.shifted_pd = d.shifted_eigs(0) > 0.0;
  if (d.shifted_pd) {
    d.inv_sqrt = es_s.operatorInverseSqrt();
  }
  return d;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("eigenvalue iteration failed");
  }
  return es.eigenvalues()(0);
}

std::pair<double, double> eig_range(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("eigenvalue iteration failed");
  }
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

void require_single_inequality(const Problem& p) {
  if (p.num_equalities() != 0 || p.num_inequalities() != 1) {
    throw DimensionMismatch(
        "diagnostics require a problem with m1 = 0 and m2 = 1");
  }
}

}  // namespace

const ConditionResult* DiagnosticsReport::find(std::string_view id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

bool DiagnosticsReport::all_conditions_hold() const {
  for (const auto& c : conditions) {
    if (!c.holds) return false;
  }
  return !conditions.empty();
}

void check_conditions(const Problem& p, const Vec& x0, double r, double K,
                      DiagnosticsReport& report) {
  require_single_inequality(p);
  report.conditions.clear();
  const double inf = std::numeric_limits<double>::infinity();

  // Strictly feasible start.
  {
    ConditionResult c;
    c.id = "start-strictly-feasible";
    c.margin = -p.inequality(0).value(x0);
    c.holds = c.margin > 0.0;
    c.witness_x = x0;
    report.conditions.push_back(std::move(c));
  }

  // K dominates the curvature bound.
  {
    ConditionResult c;
    c.id = "prox-exceeds-curvature";
    c.margin = K - report.K_hat_1;
    c.holds = c.margin > 0.0;
    c.witness_x = x0;
    report.conditions.push_back(std::move(c));
  }

  // Contraction rate in range. alpha_1 is nonnegative by construction;
  // alpha_1 == 0 means the multiplier is constant on the ball and the
  // contraction statement is the degenerate non-expansive bound.
  {
    ConditionResult c;
    c.id = "contraction-rate-in-range";
    c.margin = 1.0 - report.alpha_1;
    c.holds = std::isfinite(report.alpha_1) && report.alpha_1 >= 0.0 &&
              report.alpha_1 < 1.0;
    if (report.alpha_1 == 0.0) {
      c.note = "alpha_1 = 0: multiplier constant on the sampled ball";
    }
    c.witness_x = x0;
    report.conditions.push_back(std::move(c));
  }

  std::vector<SampleData> data;
  data.reserve(report.samples.size());
  for (const auto& x : report.samples) {
    data.push_back(analyze_sample(p, x, K));
  }
  const std::size_t count = report.samples.size();

  // Lower curvature bound on the Lagrangian Hessian, over sample pairs:
  // f''(x) + lambda^2(y) g''(x) >= alpha_1 (K_hat_1 + K) I.
  {
    ConditionResult c;
    c.id = "lagrangian-curvature-lower-bound";
    c.margin = inf;
    const double bound = report.alpha_1 * (report.K_hat_1 + K);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        if (!report.lambda_valid[j]) continue;
        const double lam = report.lambda_sq[j];
        const double lo =
            min_eigenvalue(data[i].f_hess.mat() + lam * data[i].g_hess.mat());
        const double margin = lo - bound;
        if (margin < c.margin) {
          c.margin = margin;
          c.witness_x = report.samples[i];
          c.witness_y = report.samples[j];
        }
      }
    }
    c.holds = c.margin >= -kOrderingTol;
    report.conditions.push_back(std::move(c));
  }

  // Hessian ratio near the identity, over sample pairs:
  // (1 - alpha_1/4) I <= (f''(x)+K I)^{-1} (f''(y)+K I) <= (1 + alpha_1/4) I.
  // The product is checked through the congruence by (f''(x)+K I)^{-1/2},
  // which is symmetric and shares the product's eigenvalues.
  {
    ConditionResult c;
    c.id = "hessian-ratio-near-identity";
    c.margin = inf;
    const double lo_bound = 1.0 - report.alpha_1 / 4.0;
    const double hi_bound = 1.0 + report.alpha_1 / 4.0;
    bool pd_everywhere = true;
    for (std::size_t i = 0; i < count && pd_everywhere; ++i) {
      if (!data[i].shifted_pd) {
        pd_everywhere = false;
        c.margin = data[i].shifted_eigs(0);
        c.witness_x = report.samples[i];
        c.note = "f''(x) + K I is not positive definite";
        break;
      }
      for (std::size_t j = 0; j < count; ++j) {
        const Eigen::MatrixXd m =
            data[i].inv_sqrt * data[j].shifted * data[i].inv_sqrt;
        auto [lo, hi] = eig_range(m);
        const double margin = std::min(lo - lo_bound, hi_bound - hi);
        if (margin < c.margin) {
          c.margin = margin;
          c.witness_x = report.samples[i];
          c.witness_y = report.samples[j];
        }
      }
    }
    c.holds = pd_everywhere && c.margin >= -kOrderingTol;
    report.conditions.push_back(std::move(c));
  }

  // Scaled Lagrangian curvature bounded above, over sample pairs:
  // 0 <= (f''(x) + lambda^2(y) g''(x)) / (K - K_hat_1) <= (1 - alpha_1/2) I.
  {
    ConditionResult c;
    c.id = "scaled-curvature-upper-bound";
    const double gap = K - report.K_hat_1;
    if (gap <= 0.0) {
      c.margin = gap;
      c.holds = false;
      c.note = "undefined: K <= K_hat_1";
      c.witness_x = x0;
    } else {
      c.margin = inf;
      const double hi_bound = 1.0 - report.alpha_1 / 2.0;
      for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
          if (!report.lambda_valid[j]) continue;
          const double lam = report.lambda_sq[j];
          const Eigen::MatrixXd m =
              (data[i].f_hess.mat() + lam * data[i].g_hess.mat()) / gap;
          auto [lo, hi] = eig_range(m);
          const double margin = std::min(lo, hi_bound - hi);
          if (margin < c.margin) {
            c.margin = margin;
            c.witness_x = report.samples[i];
            c.witness_y = report.samples[j];
          }
        }
      }
      c.holds = c.margin >= -kOrderingTol;
    }
    report.conditions.push_back(std::move(c));
  }

  // Resolvent bound per sample: (f''(x)+K I)^{-1} <= 1/(K - K_hat_1) I.
  {
    ConditionResult c;
    c.id = "resolvent-norm-bound";
    const double gap = K - report.K_hat_1;
    if (gap <= 0.0) {
      c.margin = gap;
      c.holds = false;
      c.note = "undefined: K <= K_hat_1";
      c.witness_x = x0;
    } else {
      c.margin = inf;
      bool ok = true;
      for (std::size_t i = 0; i < count; ++i) {
        if (!data[i].shifted_pd) {
          ok = false;
          c.margin = data[i].shifted_eigs(0);
          c.witness_x = report.samples[i];
          c.note = "f''(x) + K I is not positive definite";
          break;
        }
        // lambda_max of the inverse is 1 / lambda_min of the matrix.
        const double margin = 1.0 / gap - 1.0 / data[i].shifted_eigs(0);
        if (margin < c.margin) {
          c.margin = margin;
          c.witness_x = report.samples[i];
        }
      }
      c.holds = ok && c.margin >= -kOrderingTol;
    }
    report.conditions.push_back(std::move(c));
  }

  // Resolvent-Lipschitz product per sample:
  // |(f''(x)+K I)^{-1}| K_3 <= K_3 / |K - K_hat_1| = alpha_1 / 2.
  {
    ConditionResult c;
    c.id = "resolvent-lipschitz-product";
    c.margin = inf;
    const double bound = report.alpha_1 / 2.0;
    for (std::size_t i = 0; i < count; ++i) {
      // |A^{-1}| = 1 / min_i |a_i| for a symmetric A with eigenvalues a_i.
      const double min_abs = data[i].shifted_eigs.cwiseAbs().minCoeff();
      const double inv_norm = min_abs > 0.0 ? 1.0 / min_abs : inf;
      const double margin = bound - inv_norm * report.K_3;
      if (margin < c.margin) {
        c.margin = margin;
        c.witness_x = report.samples[i];
      }
    }
    if (report.K_3 == 0.0) {
      // 0 <= 0 regardless of the resolvent norm.
      c.margin = 0.0;
      c.witness_x = x0;
    }
    c.holds = c.margin >= -kOrderingTol;
    report.conditions.push_back(std::move(c));
  }

  // Advisory: first proximal step against the shrunken ball radius.
  report.shrunk_ball_radius = r * (1.0 - report.alpha_0);
  try {
    const SingleStepOutcome first = single_step(x0, p, K);
    report.first_step_norm = first.step_norm;
    report.first_step_in_shrunk_ball =
        first.step_norm <= report.shrunk_ball_radius;
  } catch (const Error&) {
    report.first_step_norm = std::numeric_limits<double>::quiet_NaN();
    report.first_step_in_shrunk_ball = false;
  }
}

DiagnosticsReport estimate_constants(const Problem& p, const Vec& x0, double r,
                                     double K, int n_samples, unsigned seed) {
  require_single_inequality(p);
  if (x0.size() != p.dim()) {
    throw DimensionMismatch("estimate_constants: x0 has wrong dimension");
  }
  if (n_samples < 2) {
    throw DimensionMismatch("estimate_constants requires n_samples >= 2");
  }
  if (r <= 0 || K <= 0) {
    throw DimensionMismatch("estimate_constants requires r > 0 and K > 0");
  }

  DiagnosticsReport report;
  report.r = r;
  report.K = K;
  report.n_samples = n_samples;
  report.seed = seed;
  report.samples = sample_ball(x0, r, n_samples, seed);

  report.lambda_sq.resize(report.samples.size(), 0.0);
  report.lambda_valid.resize(report.samples.size(), 1);

  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const Vec& x = report.samples[i];
    report.K_hat_1 =
        std::max(report.K_hat_1, operator_norm(p.objective().hessian(x)));
    report.sup_g_grad =
        std::max(report.sup_g_grad, p.inequality(0).gradient(x).norm());
    try {
      report.lambda_sq[i] = multiplier_single(x, p, K).second;
    } catch (const DegenerateConstraintGradient&) {
      report.lambda_valid[i] = 0;
      ++report.degenerate_samples;
    }
  }

  if (2 * report.degenerate_samples > n_samples) {
    throw InsufficientSamples(
        std::to_string(report.degenerate_samples) + " of " +
        std::to_string(n_samples) +
        " samples hit a degenerate constraint gradient");
  }

  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    if (!report.lambda_valid[i]) continue;
    for (std::size_t j = i + 1; j < report.samples.size(); ++j) {
      if (!report.lambda_valid[j]) continue;
      const double dist = (report.samples[i] - report.samples[j]).norm();
      if (dist < 1e-12) continue;
      const double ratio =
          std::abs(report.lambda_sq[i] - report.lambda_sq[j]) / dist;
      report.K_hat_3 = std::max(report.K_hat_3, ratio);
    }
  }

  report.K_3 = report.K_hat_3 * report.sup_g_grad;
  const double gap = std::abs(K - report.K_hat_1);
  report.alpha_1 = gap > 0.0 ? 2.0 * report.K_3 / gap
                             : std::numeric_limits<double>::infinity();
  report.alpha_0 = 1.0 - report.alpha_1 / 4.0;

  check_conditions(p, x0, r, K, report);
  return report;
}

double suggest_K(const Problem& p, const Vec& x0, double r, int n_samples,
                 unsigned seed) {
  if (x0.size() != p.dim()) {
    throw DimensionMismatch("suggest_K: x0 has wrong dimension");
  }
  double k_hat_1 = 0.0;
  for (const Vec& x : sample_ball(x0, r, n_samples, seed)) {
    k_hat_1 = std::max(k_hat_1, operator_norm(p.objective().hessian(x)));
  }
  return std::max(10.0 * k_hat_1, 1.0);
}

}  // namespace proxkkt
