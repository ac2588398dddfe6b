#pragma once

#include <Eigen/Dense>
#include <utility>

#include "proxkkt/errors.hpp"

namespace proxkkt {

using Vec = Eigen::VectorXd;

/// Dense symmetric matrix. Construction symmetrizes the input as
/// (A + A^T)/2, so Hessians that are symmetric only up to truncation
/// error (finite differences) stay usable downstream.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& a);

  static SymMatrix identity(Eigen::Index n);
  static SymMatrix zero(Eigen::Index n);

  Eigen::Index order() const { return mat_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }
  const Eigen::MatrixXd& mat() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

/// Factorization of H + shift*I, reusable across right-hand sides.
///
/// Tries a Cholesky factorization first; if the shifted matrix is not
/// positive definite, falls back to pivoted LDL^T and then to a fully
/// pivoted LU. Every solve is residual-checked against
/// |Ad - b| <= 1e-10 (1 + |b|) and escalates to the LU path once if the
/// cheaper factorization turns out inaccurate.
class ShiftedFactorization {
 public:
  ShiftedFactorization(const SymMatrix& h, double shift);

  /// Solves (H + shift*I) d = b. Throws SingularSystem when no
  /// factorization meets the residual bound.
  Vec solve(const Vec& b) const;

  Eigen::Index order() const { return shifted_.rows(); }
  const Eigen::MatrixXd& shifted() const { return shifted_; }

 private:
  enum class Mode { Cholesky, Ldlt, Lu };

  void factor_lu() const;
  Vec attempt(const Vec& b) const;

  Eigen::MatrixXd shifted_;
  double pivot_threshold_ = 0;
  mutable Mode mode_ = Mode::Cholesky;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  mutable Eigen::FullPivLU<Eigen::MatrixXd> lu_;
  mutable bool lu_ready_ = false;
};

/// Solves (H + K*I) d = b with the fallback chain above.
Vec regularized_solve(const SymMatrix& h, double k, const Vec& b);

/// Returns (lambda_min, lambda_max) of a symmetric matrix. Throws
/// NoConvergence when the eigenvalue iteration fails (non-finite input).
std::pair<double, double> extreme_eigenvalues(const SymMatrix& h);

/// Spectral norm: max(|lambda_min|, |lambda_max|).
double operator_norm(const SymMatrix& h);

}  // namespace proxkkt
