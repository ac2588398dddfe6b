#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "proxkkt/dense_linalg.hpp"

namespace proxkkt {

/// Central-difference gradient of a scalar function, per-coordinate step
/// h = 1e-6 (1 + |x_i|).
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x);

/// Central differences of a vector-valued gradient, per-coordinate step
/// h = 1e-4 (1 + |x_i|). Result is symmetrized.
SymMatrix fd_hessian_of_gradient(const std::function<Vec(const Vec&)>& grad,
                                 const Vec& x);

/// Value/gradient/Hessian evaluator for one scalar C^2 function on R^n.
/// Missing derivatives are synthesized by central finite differences.
/// Every result is finiteness-checked; NaN/Inf raises EvaluationFailure
/// tagged with the oracle's label.
class FunctionOracle {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<SymMatrix(const Vec&)>;

  FunctionOracle(Eigen::Index dim, ValueFn value, GradFn gradient = nullptr,
                 HessFn hessian = nullptr, std::string label = "f");

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  SymMatrix hessian(const Vec& x) const;

  bool has_explicit_gradient() const { return static_cast<bool>(grad_); }
  bool has_explicit_hessian() const { return static_cast<bool>(hess_); }

  Eigen::Index dim() const { return dim_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  void check_dim(const Vec& x) const;

  Eigen::Index dim_;
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  std::string label_;
};

/// Minimize objective(x) subject to equalities h_j(x) = 0 and
/// inequalities g_l(x) <= 0.
class Problem {
 public:
  Problem(FunctionOracle objective, std::vector<FunctionOracle> equalities = {},
          std::vector<FunctionOracle> inequalities = {});

  Eigen::Index dim() const { return objective_.dim(); }
  Eigen::Index num_equalities() const {
    return static_cast<Eigen::Index>(equalities_.size());
  }
  Eigen::Index num_inequalities() const {
    return static_cast<Eigen::Index>(inequalities_.size());
  }

  const FunctionOracle& objective() const { return objective_; }
  const FunctionOracle& equality(Eigen::Index j) const { return equalities_[j]; }
  const FunctionOracle& inequality(Eigen::Index l) const {
    return inequalities_[l];
  }

  /// Non-empty when m1 + m2 >= n. The multiplier systems may still be
  /// solvable, so this is reported rather than rejected.
  const std::optional<std::string>& constraint_count_warning() const {
    return warning_;
  }

 private:
  FunctionOracle objective_;
  std::vector<FunctionOracle> equalities_;
  std::vector<FunctionOracle> inequalities_;
  std::optional<std::string> warning_;
};

/// All objective and constraint data at one point, each piece computed
/// exactly once. Constraint Hessians are filled lazily on first request;
/// a bundle is therefore not safe to share across threads while being
/// filled.
class EvaluationBundle {
 public:
  EvaluationBundle(const Problem& p, Vec x);

  const Vec& x() const { return x_; }
  double f() const { return f_; }
  const Vec& f_grad() const { return f_grad_; }
  const SymMatrix& f_hess() const { return f_hess_; }

  double eq_value(Eigen::Index j) const { return eq_values_[j]; }
  const Vec& eq_grad(Eigen::Index j) const { return eq_grads_[j]; }
  double ineq_value(Eigen::Index l) const { return ineq_values_[l]; }
  const Vec& ineq_grad(Eigen::Index l) const { return ineq_grads_[l]; }

  const SymMatrix& eq_hess(Eigen::Index j) const;
  const SymMatrix& ineq_hess(Eigen::Index l) const;

 private:
  const Problem* problem_;
  Vec x_;
  double f_;
  Vec f_grad_;
  SymMatrix f_hess_;
  std::vector<double> eq_values_, ineq_values_;
  std::vector<Vec> eq_grads_, ineq_grads_;
  mutable std::vector<std::optional<SymMatrix>> eq_hess_, ineq_hess_;
};

EvaluationBundle evaluate_all(const Problem& p, const Vec& x);

struct DerivativeCheckEntry {
  std::string label;
  std::string kind;  // "gradient" or "hessian"
  double deviation = 0.0;
  bool passed = true;
  bool skipped_synthesized = false;
};

struct DerivativeReport {
  std::vector<DerivativeCheckEntry> entries;
  bool all_passed() const;
};

/// Compares every explicit gradient/Hessian against finite differences
/// at x. Oracles without explicit derivatives are reported as skipped.
DerivativeReport check_derivatives(const Problem& p, const Vec& x, double tol);

}  // namespace proxkkt
