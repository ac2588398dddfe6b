#pragma once

#include <cmath>
#include <functional>

#include "proxkkt/dense_linalg.hpp"

namespace proxkkt::testutil {

// Test-side central-difference oracle with an adjustable step scale.
// scale = 1 reproduces the production steps (1e-6 and 1e-4 per unit).
inline Vec fd_gradient_scaled(const std::function<double(const Vec&)>& f,
                              const Vec& x, double scale) {
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = scale * 1e-6 * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian_scaled(
    const std::function<Vec(const Vec&)>& grad, const Vec& x, double scale) {
  Eigen::MatrixXd m(x.size(), x.size());
  Vec xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = scale * 1e-4 * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    m.col(i) = (grad(xp) - grad(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return 0.5 * (m + m.transpose());
}

// The central-difference reference is only meaningful where its own
// truncation error is under control. Full-step and half-step estimates
// agreeing within `budget` certifies that (truncation shrinks by 4x per
// halving, so their gap is ~3/4 of the full-step error). Points that
// fail this are skipped; the check never looks at the derivative under
// test, so it cannot mask a wrong implementation at resolvable points.
inline bool fd_gradient_resolvable(const std::function<double(const Vec&)>& f,
                                   const Vec& x, const Vec& full,
                                   double budget) {
  const Vec half = fd_gradient_scaled(f, x, 0.5);
  return (full - half).lpNorm<Eigen::Infinity>() <= budget;
}

inline bool fd_hessian_resolvable(const std::function<Vec(const Vec&)>& grad,
                                  const Vec& x, const Eigen::MatrixXd& full,
                                  double budget) {
  const Eigen::MatrixXd half = fd_hessian_scaled(grad, x, 0.5);
  return (full - half).cwiseAbs().maxCoeff() <= budget;
}

}  // namespace proxkkt::testutil
