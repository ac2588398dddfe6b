#include <cmath>

#include "proxkkt/expr.hpp"

namespace proxkkt {

Dual2 Dual2::constant(double c, Eigen::Index n) {
  return {c, Vec::Zero(n), Eigen::MatrixXd::Zero(n, n)};
}

Dual2 Dual2::variable(Eigen::Index i, double value, Eigen::Index n) {
  Vec g = Vec::Zero(n);
  g(i) = 1.0;
  return {value, std::move(g), Eigen::MatrixXd::Zero(n, n)};
}

namespace {

[[noreturn]] void fail(const std::string& detail) {
  throw EvaluationFailure("expression", detail);
}

Dual2 add(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.g + b.g, a.h + b.h}; }

Dual2 sub(const Dual2& a, const Dual2& b) { return {a.v - b.v, a.g - b.g, a.h - b.h}; }

Dual2 neg(const Dual2& a) { return {-a.v, -a.g, -a.h}; }

Dual2 mul(const Dual2& a, const Dual2& b) {
  return {a.v * b.v, a.g * b.v + a.v * b.g,
          a.h * b.v + a.v * b.h + a.g * b.g.transpose() + b.g * a.g.transpose()};
}

Dual2 div(const Dual2& a, const Dual2& b) {
  if (b.v == 0.0) fail("division by zero");
  Dual2 w{a.v / b.v, Vec(), Eigen::MatrixXd()};
  w.g = (a.g - w.v * b.g) / b.v;
  w.h = (a.h - w.g * b.g.transpose() - b.g * w.g.transpose() - w.v * b.h) / b.v;
  return w;
}

// Chain rule for a scalar map with first/second derivatives d1, d2.
Dual2 compose(const Dual2& u, double value, double d1, double d2) {
  return {value, d1 * u.g, d1 * u.h + d2 * u.g * u.g.transpose()};
}

Dual2 call(ExprFunc f, const Dual2& u) {
  switch (f) {
    case ExprFunc::Sin:
      return compose(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v));
    case ExprFunc::Cos:
      return compose(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v));
    case ExprFunc::Exp: {
      const double e = std::exp(u.v);
      return compose(u, e, e, e);
    }
    case ExprFunc::Log:
      if (u.v <= 0.0) fail("log of non-positive argument");
      return compose(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
    case ExprFunc::Sqrt: {
      if (u.v <= 0.0) fail("sqrt of non-positive argument");
      const double s = std::sqrt(u.v);
      return compose(u, s, 0.5 / s, -0.25 / (s * u.v));
    }
  }
  fail("unknown function");
}

// Integer power by repeated multiplication (binary powering), so that
// polynomial derivatives stay exact.
Dual2 powi(const Dual2& base, long long k, Eigen::Index n) {
  if (k == 0) return Dual2::constant(1.0, n);
  if (k < 0) {
    if (base.v == 0.0) fail("zero raised to a negative power");
    return div(Dual2::constant(1.0, n), powi(base, -k, n));
  }
  Dual2 acc = Dual2::constant(1.0, n);
  Dual2 sq = base;
  long long e = k;
  bool acc_used = false;
  while (e > 0) {
    if (e & 1) {
      acc = acc_used ? mul(acc, sq) : sq;
      acc_used = true;
    }
    e >>= 1;
    if (e > 0) sq = mul(sq, sq);
  }
  return acc;
}

bool integral_exponent(const Expr& e, long long& out) {
  if (e.kind != ExprKind::Constant) return false;
  const double c = e.constant;
  if (!std::isfinite(c) || std::abs(c) > 1e9 || std::floor(c) != c) return false;
  out = static_cast<long long>(c);
  return true;
}

Dual2 eval(const Expr& e, const Vec& x) {
  const Eigen::Index n = x.size();
  switch (e.kind) {
    case ExprKind::Constant:
      return Dual2::constant(e.constant, n);
    case ExprKind::Variable:
      return Dual2::variable(e.var_index - 1, x(e.var_index - 1), n);
    case ExprKind::Add:
      return add(eval(*e.children[0], x), eval(*e.children[1], x));
    case ExprKind::Sub:
      return sub(eval(*e.children[0], x), eval(*e.children[1], x));
    case ExprKind::Mul:
      return mul(eval(*e.children[0], x), eval(*e.children[1], x));
    case ExprKind::Div:
      return div(eval(*e.children[0], x), eval(*e.children[1], x));
    case ExprKind::Neg:
      return neg(eval(*e.children[0], x));
    case ExprKind::Call:
      return call(e.func, eval(*e.children[0], x));
    case ExprKind::Pow: {
      long long k = 0;
      if (integral_exponent(*e.children[1], k)) {
        return powi(eval(*e.children[0], x), k, n);
      }
      // Non-integer or variable exponent: base^expo = exp(expo * log(base)),
      // defined for positive base only.
      Dual2 base = eval(*e.children[0], x);
      if (base.v <= 0.0) {
        fail("power with non-integer exponent requires positive base");
      }
      Dual2 expo = eval(*e.children[1], x);
      return call(ExprFunc::Exp, mul(expo, call(ExprFunc::Log, base)));
    }
  }
  fail("malformed expression node");
}

double eval_plain(const Expr& e, const Vec& x);

double powi_plain(double base, long long k) {
  if (k == 0) return 1.0;
  if (k < 0) {
    if (base == 0.0) fail("zero raised to a negative power");
    return 1.0 / powi_plain(base, -k);
  }
  double acc = 1.0;
  double sq = base;
  long long ex = k;
  bool acc_used = false;
  while (ex > 0) {
    if (ex & 1) {
      acc = acc_used ? acc * sq : sq;
      acc_used = true;
    }
    ex >>= 1;
    if (ex > 0) sq = sq * sq;
  }
  return acc;
}

double eval_plain(const Expr& e, const Vec& x) {
  switch (e.kind) {
    case ExprKind::Constant: return e.constant;
    case ExprKind::Variable: return x(e.var_index - 1);
    case ExprKind::Add: return eval_plain(*e.children[0], x) + eval_plain(*e.children[1], x);
    case ExprKind::Sub: return eval_plain(*e.children[0], x) - eval_plain(*e.children[1], x);
    case ExprKind::Mul: return eval_plain(*e.children[0], x) * eval_plain(*e.children[1], x);
    case ExprKind::Div: {
      const double d = eval_plain(*e.children[1], x);
      if (d == 0.0) fail("division by zero");
      return eval_plain(*e.children[0], x) / d;
    }
    case ExprKind::Neg: return -eval_plain(*e.children[0], x);
    case ExprKind::Call: {
      const double u = eval_plain(*e.children[0], x);
      switch (e.func) {
        case ExprFunc::Sin: return std::sin(u);
        case ExprFunc::Cos: return std::cos(u);
        case ExprFunc::Exp: return std::exp(u);
        case ExprFunc::Log:
          if (u <= 0.0) fail("log of non-positive argument");
          return std::log(u);
        case ExprFunc::Sqrt:
          if (u <= 0.0) fail("sqrt of non-positive argument");
          return std::sqrt(u);
      }
      fail("unknown function");
    }
    case ExprKind::Pow: {
      long long k = 0;
      if (integral_exponent(*e.children[1], k)) {
        return powi_plain(eval_plain(*e.children[0], x), k);
      }
      const double base = eval_plain(*e.children[0], x);
      if (base <= 0.0) {
        fail("power with non-integer exponent requires positive base");
      }
      return std::exp(eval_plain(*e.children[1], x) * std::log(base));
    }
  }
  fail("malformed expression node");
}

void check_point(const Expr& e, const Vec& x) {
  if (x.size() != e.dim) {
    throw DimensionMismatch("expression of dimension " + std::to_string(e.dim) +
                            " evaluated at point of dimension " +
                            std::to_string(x.size()));
  }
}

}  // namespace

std::tuple<double, Vec, SymMatrix> eval_with_derivatives(const Expr& e,
                                                         const Vec& x) {
  check_point(e, x);
  Dual2 d = eval(e, x);
  if (!std::isfinite(d.v) || !d.g.allFinite() || !d.h.allFinite()) {
    fail("non-finite result");
  }
  return {d.v, std::move(d.g), SymMatrix(d.h)};
}

FunctionOracle make_expression_oracle(ExprPtr ast, std::string label) {
  const Eigen::Index n = ast->dim;
  const std::string lbl = label;
  auto rewrap = [lbl](const EvaluationFailure& ef) -> EvaluationFailure {
    return EvaluationFailure(lbl, ef.what());
  };
  auto value = [ast, rewrap](const Vec& x) -> double {
    check_point(*ast, x);
    try {
      return eval_plain(*ast, x);
    } catch (const EvaluationFailure& ef) {
      throw rewrap(ef);
    }
  };
  auto grad = [ast, rewrap](const Vec& x) -> Vec {
    try {
      return std::get<1>(eval_with_derivatives(*ast, x));
    } catch (const EvaluationFailure& ef) {
      throw rewrap(ef);
    }
  };
  auto hess = [ast, rewrap](const Vec& x) -> SymMatrix {
    try {
      return std::get<2>(eval_with_derivatives(*ast, x));
    } catch (const EvaluationFailure& ef) {
      throw rewrap(ef);
    }
  };
  return FunctionOracle(n, value, grad, hess, std::move(label));
}

}  // namespace proxkkt
