#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "proxkkt/problem.hpp"

namespace proxkkt {

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class ExprFunc { Sin, Cos, Exp, Log, Sqrt };

std::string_view func_name(ExprFunc f);

/// Immutable expression tree node. Variables are 1-based (x1..xn).
struct Expr {
  ExprKind kind;
  double constant = 0.0;   // Constant
  int var_index = 0;       // Variable
  ExprFunc func{};         // Call
  std::vector<std::shared_ptr<const Expr>> children;

  int dim = 0;  // declared dimension the tree was parsed against
};

using ExprPtr = std::shared_ptr<const Expr>;

bool operator==(const Expr& a, const Expr& b);

/// Recursive-descent parse with precedence
///   ^ (right-assoc) > unary - > * / (left) > + - (left),
/// parentheses, identifiers x1..xn, decimal literals, and calls to
/// sin, cos, exp, log, sqrt. Throws ParseError / UnknownVariable /
/// UnknownFunction with the 0-based character offset.
ExprPtr parse_expression(std::string_view text, int n);

/// Canonical printer with minimal parentheses; parse(unparse(t)) == t.
std::string unparse_expression(const Expr& e);

/// Second-order forward-mode value: f, grad f, hess f propagated
/// together through each arithmetic operation.
struct Dual2 {
  double v;
  Vec g;
  Eigen::MatrixXd h;

  static Dual2 constant(double c, Eigen::Index n);
  static Dual2 variable(Eigen::Index i, double value, Eigen::Index n);
};

/// Exact value/gradient/Hessian at x. The Hessian is exactly symmetric.
/// Throws EvaluationFailure on log/sqrt of a non-positive argument,
/// division by zero, or 0 raised to a negative power.
std::tuple<double, Vec, SymMatrix> eval_with_derivatives(const Expr& e,
                                                         const Vec& x);

/// Wraps an expression tree as a FunctionOracle with exact derivatives.
FunctionOracle make_expression_oracle(ExprPtr ast, std::string label);

struct LoadedProblem {
  Problem problem;
  std::optional<Vec> start;  // x0 line, when present
};

/// Parses a line-oriented problem file:
///   n = <positive integer>
///   minimize = <expression>
///   eq = <expression>        (zero or more)
///   ineq = <expression>      (zero or more)
///   x0 = <comma-separated reals, length n>
/// '#' starts a comment; blank lines are ignored; '=' may be surrounded
/// by whitespace. Order of eq/ineq lines defines multiplier indices.
LoadedProblem load_problem_file(const std::string& path);

}  // namespace proxkkt
