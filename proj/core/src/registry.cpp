#include "proxkkt/registry.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "proxkkt/solver_general.hpp"

namespace proxkkt {

namespace {

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

SymMatrix const_hess(const Eigen::MatrixXd& m) { return SymMatrix(m); }

// f(x) = 0.5 (x1 - c)^2 in one variable.
FunctionOracle shifted_quadratic_1d(double c, std::string label) {
  return FunctionOracle(
      1, [c](const Vec& x) { return 0.5 * (x(0) - c) * (x(0) - c); },
      [c](const Vec& x) { return vec1(x(0) - c); },
      [](const Vec&) { return const_hess(Eigen::MatrixXd::Identity(1, 1)); },
      std::move(label));
}

// g(x) = x_i - c, any dimension.
FunctionOracle affine_bound(Eigen::Index dim, Eigen::Index i, double c,
                            std::string label) {
  return FunctionOracle(
      dim, [i, c](const Vec& x) { return x(i) - c; },
      [dim, i](const Vec&) {
        Vec g = Vec::Zero(dim);
        g(i) = 1.0;
        return g;
      },
      [dim](const Vec&) { return SymMatrix::zero(dim); }, std::move(label));
}

void validate_known_solution(const RegistryEntry& e) {
  if (!e.known) return;
  MultiplierState ms;
  ms.lambda_h = e.known->lambda_h;
  ms.lambda_g_sq = e.known->lambda_g_sq;
  for (Eigen::Index l = 0; l < ms.lambda_g_sq.size(); ++l) {
    if (ms.lambda_g_sq(l) > 0.0) ms.active.push_back(static_cast<int>(l) + 1);
  }
  const KktResiduals r = general_residuals(e.problem, e.known->x, ms);
  const double worst = std::max(std::max(r.stationarity, r.equality),
                                std::max(r.feasibility, r.complementarity));
  if (worst > 1e-9) {
    throw std::logic_error("registry entry '" + e.name +
                           "' has an invalid known solution (residual " +
                           std::to_string(worst) + ")");
  }
}

std::vector<RegistryEntry> build_registry() {
  std::vector<RegistryEntry> entries;

  // min 0.5 (x1-2)^2  s.t.  x1 - 1 <= 0; constraint active at x* = 1.
  entries.push_back(RegistryEntry{
      "quad-active",
      Problem(shifted_quadratic_1d(2.0, "objective"), {},
              {affine_bound(1, 0, 1.0, "ineq[1]")}),
      vec1(0.0),
      KnownSolution{vec1(1.0), Vec(0), vec1(1.0)},
      "shifted 1-d quadratic with the bound active at the optimum"});

  // min 0.5 x1^2  s.t.  x1 - 1 <= 0; unconstrained minimum is interior.
  entries.push_back(RegistryEntry{
      "quad-inactive",
      Problem(shifted_quadratic_1d(0.0, "objective"), {},
              {affine_bound(1, 0, 1.0, "ineq[1]")}),
      vec1(-0.5),
      KnownSolution{vec1(0.0), Vec(0), vec1(0.0)},
      "1-d quadratic whose minimum lies strictly inside the feasible set"});

  // min x1 + x2  s.t.  x1^2 + x2^2 = 2; optimum (-1,-1), multiplier 1/2.
  entries.push_back(RegistryEntry{
      "circle-eq",
      Problem(FunctionOracle(
                  2, [](const Vec& x) { return x(0) + x(1); },
                  [](const Vec&) { return vec2(1.0, 1.0); },
                  [](const Vec&) { return SymMatrix::zero(2); }, "objective"),
              {FunctionOracle(
                  2,
                  [](const Vec& x) { return x(0) * x(0) + x(1) * x(1) - 2.0; },
                  [](const Vec& x) { return vec2(2.0 * x(0), 2.0 * x(1)); },
                  [](const Vec&) {
                    return const_hess(2.0 * Eigen::MatrixXd::Identity(2, 2));
                  },
                  "eq[1]")},
              {}),
      vec2(-1.2, -0.8),
      KnownSolution{vec2(-1.0, -1.0), vec1(0.5), Vec(0)},
      "linear objective on a circle, equality constrained"});

  // min 0.5 ((x1-2)^2 + x2^2)  s.t.  x2 = 0, x1 - 1 <= 0.
  entries.push_back(RegistryEntry{
      "mixed-2d",
      Problem(FunctionOracle(
                  2,
                  [](const Vec& x) {
                    return 0.5 * ((x(0) - 2.0) * (x(0) - 2.0) + x(1) * x(1));
                  },
                  [](const Vec& x) { return vec2(x(0) - 2.0, x(1)); },
                  [](const Vec&) {
                    return const_hess(Eigen::MatrixXd::Identity(2, 2));
                  },
                  "objective"),
              {FunctionOracle(
                  2, [](const Vec& x) { return x(1); },
                  [](const Vec&) { return vec2(0.0, 1.0); },
                  [](const Vec&) { return SymMatrix::zero(2); }, "eq[1]")},
              {affine_bound(2, 0, 1.0, "ineq[1]")}),
      vec2(0.0, 0.5),
      KnownSolution{vec2(1.0, 0.0), vec1(0.0), vec1(1.0)},
      "one equality and one active inequality in two variables"});

  // min 0.5 |x - (2,2)|^2  s.t.  x1 <= 1, x2 <= 1; both bounds active.
  entries.push_back(RegistryEntry{
      "box-2d",
      Problem(FunctionOracle(
                  2,
                  [](const Vec& x) {
                    return 0.5 * ((x(0) - 2.0) * (x(0) - 2.0) +
                                  (x(1) - 2.0) * (x(1) - 2.0));
                  },
                  [](const Vec& x) { return vec2(x(0) - 2.0, x(1) - 2.0); },
                  [](const Vec&) {
                    return const_hess(Eigen::MatrixXd::Identity(2, 2));
                  },
                  "objective"),
              {},
              {affine_bound(2, 0, 1.0, "ineq[1]"),
               affine_bound(2, 1, 1.0, "ineq[2]")}),
      vec2(0.5, 0.5),
      KnownSolution{vec2(1.0, 1.0), Vec(0), vec2(1.0, 1.0)},
      "separable quadratic pulled into the corner of a box"});

  // Rosenbrock objective inside a disc; no closed-form solution recorded,
  // so only residual-based checks apply.
  entries.push_back(RegistryEntry{
      "rosenbrock-ineq",
      Problem(FunctionOracle(
                  2,
                  [](const Vec& x) {
                    const double a = x(1) - x(0) * x(0);
                    const double b = 1.0 - x(0);
                    return 100.0 * a * a + b * b;
                  },
                  [](const Vec& x) {
                    const double a = x(1) - x(0) * x(0);
                    return vec2(-400.0 * a * x(0) - 2.0 * (1.0 - x(0)),
                                200.0 * a);
                  },
                  [](const Vec& x) {
                    Eigen::MatrixXd h(2, 2);
                    h << -400.0 * (x(1) - 3.0 * x(0) * x(0)) + 2.0,
                        -400.0 * x(0), -400.0 * x(0), 200.0;
                    return const_hess(h);
                  },
                  "objective"),
              {},
              {FunctionOracle(
                  2,
                  [](const Vec& x) {
                    return x(0) * x(0) + x(1) * x(1) - 1.5;
                  },
                  [](const Vec& x) { return vec2(2.0 * x(0), 2.0 * x(1)); },
                  [](const Vec&) {
                    return const_hess(2.0 * Eigen::MatrixXd::Identity(2, 2));
                  },
                  "ineq[1]")}),
      vec2(0.5, 0.5),
      std::nullopt,
      "Rosenbrock valley truncated by a disc; no analytic optimum recorded"});

  for (const auto& e : entries) {
    validate_known_solution(e);
  }
  return entries;
}

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = build_registry();
  return entries;
}

}  // namespace

const RegistryEntry& registry_get(const std::string& name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  throw UnknownProblem("no registry entry named '" + name + "'");
}

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  names.reserve(registry().size());
  for (const auto& e : registry()) names.push_back(e.name);
  return names;
}

Vec brute_force_minimize(const Problem& p, const Vec& lo, const Vec& hi,
                         int grid_points_per_axis) {
  const Eigen::Index n = p.dim();
  if (n > 3) {
    throw DimensionMismatch("brute_force_minimize is capped at dimension 3");
  }
  if (lo.size() != n || hi.size() != n) {
    throw DimensionMismatch("brute_force_minimize: box has wrong dimension");
  }
  if (grid_points_per_axis < 2) {
    throw DimensionMismatch("brute_force_minimize needs >= 2 points per axis");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lo(i) < hi(i))) {
      throw DimensionMismatch("brute_force_minimize: lo must be below hi");
    }
  }

  Vec spacing(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    spacing(i) = (hi(i) - lo(i)) / (grid_points_per_axis - 1);
  }
  const double eq_band = spacing.maxCoeff();

  bool found = false;
  double best = 0.0;
  Vec best_x(n);

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vec x(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i) = lo(i) + spacing(i) * idx[static_cast<std::size_t>(i)];
    }

    bool feasible = true;
    const double ineq_tol = 1e-9 * (1.0 + x.lpNorm<Eigen::Infinity>());
    for (Eigen::Index l = 0; feasible && l < p.num_inequalities(); ++l) {
      feasible = p.inequality(l).value(x) <= ineq_tol;
    }
    for (Eigen::Index j = 0; feasible && j < p.num_equalities(); ++j) {
      feasible = std::abs(p.equality(j).value(x)) <= eq_band;
    }
    if (feasible) {
      const double f = p.objective().value(x);
      // Strict comparison keeps the lexicographically first grid index
      // on ties (loop order is lexicographic).
      if (!found || f < best) {
        found = true;
        best = f;
        best_x = x;
      }
    }

    // Advance the mixed-radix counter, last axis fastest.
    Eigen::Index axis = n - 1;
    while (axis >= 0) {
      if (++idx[static_cast<std::size_t>(axis)] < grid_points_per_axis) break;
      idx[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }

  if (!found) {
    throw NoFeasiblePoint("no grid point satisfies the constraints");
  }
  return best_x;
}

}  // namespace proxkkt
