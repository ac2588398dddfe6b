#include "proxkkt/dense_linalg.hpp"

#include <cmath>
#include <string>

namespace proxkkt {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionMismatch("SymMatrix requires a square matrix of order >= 1, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  mat_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::zero(Eigen::Index n) {
  return SymMatrix(Eigen::MatrixXd::Zero(n, n));
}

ShiftedFactorization::ShiftedFactorization(const SymMatrix& h, double shift) {
  const Eigen::Index n = h.order();
  shifted_ = h.mat() + shift * Eigen::MatrixXd::Identity(n, n);
  const double max_abs = shifted_.cwiseAbs().maxCoeff();
  if (!all_finite(shifted_)) {
    throw SingularSystem("shifted matrix contains non-finite entries");
  }
  if (max_abs == 0.0) {
    throw SingularSystem("shifted matrix is identically zero");
  }
  pivot_threshold_ = 1e-14 * max_abs;

  llt_.compute(shifted_);
  if (llt_.info() == Eigen::Success) {
    mode_ = Mode::Cholesky;
    return;
  }
  ldlt_.compute(shifted_);
  if (ldlt_.info() == Eigen::Success &&
      ldlt_.vectorD().cwiseAbs().minCoeff() >= pivot_threshold_) {
    mode_ = Mode::Ldlt;
    return;
  }
  mode_ = Mode::Lu;
  factor_lu();
}

void ShiftedFactorization::factor_lu() const {
  lu_.compute(shifted_);
  const Eigen::MatrixXd& u = lu_.matrixLU();
  const double min_pivot = u.diagonal().cwiseAbs().minCoeff();
  if (min_pivot < pivot_threshold_) {
    throw SingularSystem("pivot " + std::to_string(min_pivot) +
                         " below threshold " + std::to_string(pivot_threshold_));
  }
  lu_ready_ = true;
}

Vec ShiftedFactorization::attempt(const Vec& b) const {
  switch (mode_) {
    case Mode::Cholesky:
      return llt_.solve(b);
    case Mode::Ldlt:
      return ldlt_.solve(b);
    case Mode::Lu:
      if (!lu_ready_) factor_lu();
      return lu_.solve(b);
  }
  return Vec();
}

Vec ShiftedFactorization::solve(const Vec& b) const {
  if (b.size() != shifted_.rows()) {
    throw DimensionMismatch("rhs dimension " + std::to_string(b.size()) +
                            " does not match system order " +
                            std::to_string(shifted_.rows()));
  }
  const double bound = 1e-10 * (1.0 + b.norm());
  Vec d = attempt(b);
  if (d.allFinite() && (shifted_ * d - b).norm() <= bound) {
    return d;
  }
  if (mode_ != Mode::Lu) {
    mode_ = Mode::Lu;
    factor_lu();
    d = attempt(b);
    if (d.allFinite() && (shifted_ * d - b).norm() <= bound) {
      return d;
    }
  }
  throw SingularSystem("no factorization met the residual bound");
}

Vec regularized_solve(const SymMatrix& h, double k, const Vec& b) {
  return ShiftedFactorization(h, k).solve(b);
}

std::pair<double, double> extreme_eigenvalues(const SymMatrix& h) {
  if (!all_finite(h.mat())) {
    throw NoConvergence("eigenvalue iteration failed: non-finite input");
  }
  if (h.order() == 1) {
    return {h(0, 0), h(0, 0)};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("eigenvalue iteration exceeded its sweep cap");
  }
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

double operator_norm(const SymMatrix& h) {
  auto [lo, hi] = extreme_eigenvalues(h);
  return std::max(std::abs(lo), std::abs(hi));
}

}  // namespace proxkkt
