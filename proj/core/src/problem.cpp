#include "proxkkt/problem.hpp"

#include <cmath>
#include <sstream>

namespace proxkkt {

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return g;
}

SymMatrix fd_hessian_of_gradient(const std::function<Vec(const Vec&)>& grad,
                                 const Vec& x) {
  Eigen::MatrixXd h_mat(x.size(), x.size());
  Vec xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-4 * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    h_mat.col(i) = (grad(xp) - grad(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return SymMatrix(h_mat);
}

FunctionOracle::FunctionOracle(Eigen::Index dim, ValueFn value, GradFn gradient,
                               HessFn hessian, std::string label)
    : dim_(dim),
      value_(std::move(value)),
      grad_(std::move(gradient)),
      hess_(std::move(hessian)),
      label_(std::move(label)) {
  if (dim_ < 1) {
    throw DimensionMismatch("oracle dimension must be >= 1");
  }
  if (!value_) {
    throw DimensionMismatch("oracle '" + label_ + "' has no value function");
  }
}

void FunctionOracle::check_dim(const Vec& x) const {
  if (x.size() != dim_) {
    throw DimensionMismatch("point of dimension " + std::to_string(x.size()) +
                            " passed to oracle '" + label_ + "' of dimension " +
                            std::to_string(dim_));
  }
}

namespace {

std::string point_string(const Vec& x) {
  std::ostringstream os;
  os << "[" << x.transpose() << "]";
  return os.str();
}

}  // namespace

double FunctionOracle::value(const Vec& x) const {
  check_dim(x);
  const double v = value_(x);
  if (!std::isfinite(v)) {
    throw EvaluationFailure(label_, "non-finite value at " + point_string(x));
  }
  return v;
}

Vec FunctionOracle::gradient(const Vec& x) const {
  check_dim(x);
  Vec g = grad_ ? grad_(x) : fd_gradient([this](const Vec& y) { return value(y); }, x);
  if (g.size() != dim_) {
    throw DimensionMismatch("gradient of '" + label_ + "' has wrong dimension");
  }
  if (!g.allFinite()) {
    throw EvaluationFailure(label_, "non-finite gradient at " + point_string(x));
  }
  return g;
}

SymMatrix FunctionOracle::hessian(const Vec& x) const {
  check_dim(x);
  if (hess_) {
    SymMatrix h = hess_(x);
    if (h.order() != dim_) {
      throw DimensionMismatch("hessian of '" + label_ + "' has wrong order");
    }
    if (!h.mat().allFinite()) {
      throw EvaluationFailure(label_, "non-finite hessian at " + point_string(x));
    }
    return h;
  }
  SymMatrix h = fd_hessian_of_gradient(
      [this](const Vec& y) { return gradient(y); }, x);
  if (!h.mat().allFinite()) {
    throw EvaluationFailure(label_, "non-finite hessian at " + point_string(x));
  }
  return h;
}

Problem::Problem(FunctionOracle objective, std::vector<FunctionOracle> equalities,
                 std::vector<FunctionOracle> inequalities)
    : objective_(std::move(objective)),
      equalities_(std::move(equalities)),
      inequalities_(std::move(inequalities)) {
  const Eigen::Index n = objective_.dim();
  for (const auto& h : equalities_) {
    if (h.dim() != n) {
      throw DimensionMismatch("equality '" + h.label() +
                              "' does not share the problem dimension");
    }
  }
  for (const auto& g : inequalities_) {
    if (g.dim() != n) {
      throw DimensionMismatch("inequality '" + g.label() +
                              "' does not share the problem dimension");
    }
  }
  const Eigen::Index m = num_equalities() + num_inequalities();
  if (m >= n) {
    warning_ = "m1 + m2 = " + std::to_string(m) +
               " is not below the dimension n = " + std::to_string(n) +
               "; multiplier systems may be rank-deficient";
  }
}

EvaluationBundle::EvaluationBundle(const Problem& p, Vec x)
    : problem_(&p),
      x_(std::move(x)),
      f_(p.objective().value(x_)),
      f_grad_(p.objective().gradient(x_)),
      f_hess_(p.objective().hessian(x_)) {
  const auto m1 = p.num_equalities();
  const auto m2 = p.num_inequalities();
  eq_values_.reserve(m1);
  eq_grads_.reserve(m1);
  for (Eigen::Index j = 0; j < m1; ++j) {
    eq_values_.push_back(p.equality(j).value(x_));
    eq_grads_.push_back(p.equality(j).gradient(x_));
  }
  ineq_values_.reserve(m2);
  ineq_grads_.reserve(m2);
  for (Eigen::Index l = 0; l < m2; ++l) {
    ineq_values_.push_back(p.inequality(l).value(x_));
    ineq_grads_.push_back(p.inequality(l).gradient(x_));
  }
  eq_hess_.resize(m1);
  ineq_hess_.resize(m2);
}

const SymMatrix& EvaluationBundle::eq_hess(Eigen::Index j) const {
  if (!eq_hess_[j]) {
    eq_hess_[j] = problem_->equality(j).hessian(x_);
  }
  return *eq_hess_[j];
}

const SymMatrix& EvaluationBundle::ineq_hess(Eigen::Index l) const {
  if (!ineq_hess_[l]) {
    ineq_hess_[l] = problem_->inequality(l).hessian(x_);
  }
  return *ineq_hess_[l];
}

EvaluationBundle evaluate_all(const Problem& p, const Vec& x) {
  if (x.size() != p.dim()) {
    throw DimensionMismatch("evaluate_all: point dimension " +
                            std::to_string(x.size()) + " != problem dimension " +
                            std::to_string(p.dim()));
  }
  return EvaluationBundle(p, x);
}

bool DerivativeReport::all_passed() const {
  for (const auto& e : entries) {
    if (!e.skipped_synthesized && !e.passed) return false;
  }
  return true;
}

namespace {

double relative_deviation(const Vec& exact, const Vec& fd) {
  const double denom = fd.lpNorm<Eigen::Infinity>();
  const double diff = (exact - fd).lpNorm<Eigen::Infinity>();
  return diff / (denom > 1e-8 ? denom : 1.0);
}

double relative_deviation(const Eigen::MatrixXd& exact, const Eigen::MatrixXd& fd) {
  const double denom = fd.cwiseAbs().maxCoeff();
  const double diff = (exact - fd).cwiseAbs().maxCoeff();
  return diff / (denom > 1e-8 ? denom : 1.0);
}

void check_oracle(const FunctionOracle& o, const Vec& x, double tol,
                  DerivativeReport& report) {
  if (o.has_explicit_gradient()) {
    const Vec fd = fd_gradient([&o](const Vec& y) { return o.value(y); }, x);
    const double dev = relative_deviation(o.gradient(x), fd);
    report.entries.push_back({o.label(), "gradient", dev, dev <= tol, false});
  } else {
    report.entries.push_back({o.label(), "gradient", 0.0, true, true});
  }
  if (o.has_explicit_hessian()) {
    const SymMatrix fd = fd_hessian_of_gradient(
        [&o](const Vec& y) { return o.gradient(y); }, x);
    const double dev = relative_deviation(o.hessian(x).mat(), fd.mat());
    report.entries.push_back({o.label(), "hessian", dev, dev <= tol, false});
  } else {
    report.entries.push_back({o.label(), "hessian", 0.0, true, true});
  }
}

}  // namespace

DerivativeReport check_derivatives(const Problem& p, const Vec& x, double tol) {
  if (x.size() != p.dim()) {
    throw DimensionMismatch("check_derivatives: wrong point dimension");
  }
  if (tol <= 0) {
    throw DimensionMismatch("check_derivatives: tol must be positive");
  }
  DerivativeReport report;
  check_oracle(p.objective(), x, tol, report);
  for (Eigen::Index j = 0; j < p.num_equalities(); ++j) {
    check_oracle(p.equality(j), x, tol, report);
  }
  for (Eigen::Index l = 0; l < p.num_inequalities(); ++l) {
    check_oracle(p.inequality(l), x, tol, report);
  }
  return report;
}

}  // namespace proxkkt
