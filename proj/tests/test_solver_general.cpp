#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxkkt/solver_general.hpp"
#include "proxkkt/solver_single.hpp"
#include "test_util.hpp"

using namespace proxkkt;
using testutil::quad_with_bound;
using testutil::vec;

namespace {

// f = |x|^2 / 2 in n variables with exact derivatives.
FunctionOracle half_norm_sq(Eigen::Index n) {
  return FunctionOracle(
      n, [](const Vec& x) { return 0.5 * x.squaredNorm(); },
      [](const Vec& x) { return Vec(x); },
      [n](const Vec&) { return SymMatrix::identity(n); }, "objective");
}

FunctionOracle coordinate_bound(Eigen::Index n, Eigen::Index i, double c,
                                std::string label) {
  return FunctionOracle(
      n, [i, c](const Vec& x) { return x(i) - c; },
      [n, i](const Vec&) {
        Vec g = Vec::Zero(n);
        g(i) = 1.0;
        return g;
      },
      [n](const Vec&) { return SymMatrix::zero(n); }, std::move(label));
}

// min |x|^2/2 s.t. x1 = 1 in two variables.
Problem equality_fixture() {
  return Problem(half_norm_sq(2), {coordinate_bound(2, 0, 1.0, "eq[1]")}, {});
}

// min |x|^2/2 s.t. x1 <= 1, x2 <= 1.
Problem two_inequality_fixture() {
  return Problem(half_norm_sq(2), {},
                 {coordinate_bound(2, 0, 1.0, "ineq[1]"),
                  coordinate_bound(2, 1, 1.0, "ineq[2]")});
}

// min (x1-2)^2/2 + x2^2/2 s.t. x2 = 0, x1 - 1 <= 0.
Problem mixed_fixture() {
  FunctionOracle f(
      2,
      [](const Vec& x) {
        return 0.5 * ((x(0) - 2.0) * (x(0) - 2.0) + x(1) * x(1));
      },
      [](const Vec& x) { return vec({x(0) - 2.0, x(1)}); },
      [](const Vec&) { return SymMatrix::identity(2); }, "objective");
  return Problem(std::move(f), {coordinate_bound(2, 1, 0.0, "eq[1]")},
                 {coordinate_bound(2, 0, 1.0, "ineq[1]")});
}

}  // namespace

TEST_CASE("multiplier_system solves the equality example") {
  const MultiplierState ms =
      multiplier_system(vec({2.0, 0.0}), equality_fixture(), 9.0, {});
  REQUIRE(ms.lambda_h.size() == 1);
  CHECK(ms.lambda_h(0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(!ms.least_squares_fallback);
}

TEST_CASE("multiplier_system restricted to one inequality matches the closed form") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const MultiplierState ms = multiplier_system(vec({2.0}), p, 9.0, {1});
  auto [raw, clamped] = multiplier_single(vec({2.0}), p, 9.0);
  CHECK(ms.lambda_g_sq(0) == doctest::Approx(raw).epsilon(1e-13));
  CHECK(ms.lambda_g_sq(0) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("multiplier_system on the two-inequality example") {
  const MultiplierState ms = multiplier_system(
      vec({0.5, 0.5}), two_inequality_fixture(), 9.0, {1, 2});
  CHECK(ms.lambda_g_sq(0) == doctest::Approx(-5.5).epsilon(1e-12));
  CHECK(ms.lambda_g_sq(1) == doctest::Approx(-5.5).epsilon(1e-12));
}

TEST_CASE("assembled multiplier matrix is symmetric") {
  // Random smooth objective, three constraints in R^4.
  FunctionOracle f(
      4,
      [](const Vec& x) {
        return 0.5 * x.squaredNorm() + 0.3 * x(0) * x(1) + std::sin(x(2));
      },
      nullptr, nullptr, "objective");
  Problem p(std::move(f),
            {FunctionOracle(4, [](const Vec& x) { return x(0) + 2.0 * x(3); })},
            {FunctionOracle(4, [](const Vec& x) { return x(1) - x(2); }),
             FunctionOracle(4, [](const Vec& x) { return x(0) * x(1) - 1.0; })});
  const Vec x = vec({0.4, -0.7, 1.1, 0.2});

  const auto sys = assemble_multiplier_system(x, p, 9.0, {1, 2});
  REQUIRE(sys.matrix.rows() == 3);
  for (Eigen::Index a = 0; a < 3; ++a) {
    for (Eigen::Index b = 0; b < 3; ++b) {
      CHECK(std::abs(sys.matrix(a, b) - sys.matrix(b, a)) <= 1e-12);
    }
  }
}

TEST_CASE("active_set_resolve drops both negative multipliers") {
  const ActiveSetResolution res =
      active_set_resolve(vec({0.5, 0.5}), two_inequality_fixture(), 9.0);
  CHECK(res.lambda_g_sq_raw(0) == doctest::Approx(-5.5).epsilon(1e-12));
  CHECK(res.lambda_g_sq_raw(1) == doctest::Approx(-5.5).epsilon(1e-12));
  CHECK(res.state.active.empty());
  CHECK(res.state.lambda_g_sq(0) == 0.0);
  CHECK(res.state.lambda_g_sq(1) == 0.0);

  // The step is then the pure proximal gradient step.
  const Vec step =
      general_step(vec({0.5, 0.5}), res.state, two_inequality_fixture(), 9.0);
  CHECK(step(0) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(step(1) == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("active_set_resolve on a padded 1-active fixture") {
  // f = (x1-2)^2/2 + x2^2/2, g = x1 - 1, at the origin the multiplier
  // solves (1/10)(-2 + l) + 1 = 0, l = -8, so the set empties.
  const ActiveSetResolution res =
      active_set_resolve(vec({0.0, 0.0}), mixed_fixture(), 9.0);
  CHECK(res.lambda_g_sq_raw(0) == doctest::Approx(-8.0).epsilon(1e-12));
  CHECK(res.state.active.empty());
}

TEST_CASE("equalities only need a single pass") {
  const ActiveSetResolution res =
      active_set_resolve(vec({2.0, 0.0}), equality_fixture(), 9.0);
  CHECK(res.passes == 1);
  CHECK(res.state.active.empty());
  CHECK(res.state.lambda_h(0) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("general_step on the equality example lands on the constraint") {
  MultiplierState ms;
  ms.lambda_h = vec({8.0});
  ms.lambda_g_sq = Vec(0);
  const Vec x1 = general_step(vec({2.0, 0.0}), ms, equality_fixture(), 9.0);
  CHECK(x1(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x1(1) == 0.0);
}

TEST_CASE("general_step with zero multipliers and zero gradient is a fixed point") {
  MultiplierState ms;
  ms.lambda_h = Vec(0);
  ms.lambda_g_sq = vec({0.0, 0.0});
  const Vec x = general_step(vec({0.0, 0.0}), ms, two_inequality_fixture(), 9.0);
  CHECK(x(0) == 0.0);
  CHECK(x(1) == 0.0);
}

TEST_CASE("solve_general on the equality fixture") {
  SolverConfig cfg{9.0};
  cfg.e1 = 1e-10;
  const GeneralSolveReport report =
      solve_general(equality_fixture(), vec({2.0, 0.0}), cfg);
  CHECK(report.termination == Termination::StepTolerance);
  CHECK(std::abs(report.x_tilde(0) - 1.0) <= 1e-8);
  CHECK(std::abs(report.x_tilde(1)) <= 1e-12);
  CHECK(report.multipliers.lambda_h(0) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(report.kkt.equality <= 1e-8);
  CHECK(report.kkt.stationarity <= 1e-6);
}

TEST_CASE("solve_general on the mixed fixture") {
  SolverConfig cfg{9.0};
  cfg.e1 = 1e-10;
  const GeneralSolveReport report =
      solve_general(mixed_fixture(), vec({0.0, 0.5}), cfg);
  CHECK(report.termination == Termination::StepTolerance);
  CHECK((report.x_tilde - vec({1.0, 0.0})).norm() <= 1e-6);
  CHECK(report.multipliers.lambda_g_sq(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(report.multipliers.lambda_h(0)) <= 1e-6);
  CHECK(report.kkt.stationarity <= 1e-6);
  CHECK(report.kkt.equality <= 1e-8);
  CHECK(report.kkt.feasibility <= 1e-8);
  CHECK(report.kkt.complementarity <= 1e-6);
}

TEST_CASE("solve_general keeps inactive constraints inactive") {
  SolverConfig cfg{9.0};
  cfg.e1 = 1e-10;
  const GeneralSolveReport report =
      solve_general(two_inequality_fixture(), vec({0.5, 0.5}), cfg);
  CHECK(report.termination == Termination::StepTolerance);
  CHECK(report.x_tilde.norm() <= 1e-6);
  CHECK(report.multipliers.active.empty());
  // Both constraints end strictly feasible.
  const Problem p = two_inequality_fixture();
  CHECK(p.inequality(0).value(report.x_tilde) < -0.9);
  CHECK(p.inequality(1).value(report.x_tilde) < -0.9);
}

TEST_CASE("active-set soundness at termination") {
  SolverConfig cfg{9.0};
  cfg.e1 = 1e-10;
  Problem box(half_norm_sq(2), {},
              {coordinate_bound(2, 0, -1.0, "ineq[1]"),
               coordinate_bound(2, 1, 1.0, "ineq[2]")});
  // Minimum of |x|^2/2 with x1 <= -1: first constraint active.
  const GeneralSolveReport report = solve_general(box, vec({-2.0, 0.2}), cfg);
  REQUIRE(report.termination == Termination::StepTolerance);
  for (Eigen::Index l = 0; l < 2; ++l) {
    const bool in_active =
        std::find(report.multipliers.active.begin(),
                  report.multipliers.active.end(),
                  static_cast<int>(l) + 1) != report.multipliers.active.end();
    if (in_active) {
      CHECK(report.multipliers.lambda_g_sq(l) > 0.0);
    } else {
      CHECK(report.multipliers.lambda_g_sq(l) == 0.0);
    }
  }
}

TEST_CASE("reduction: the general path reproduces the single path") {
  for (double c : {2.0, 0.0}) {
    const Problem p = quad_with_bound(c, 1.0);
    SolverConfig cfg{9.0};
    cfg.e1 = 1e-12;
    cfg.k_max = 50;
    const SolveReport single = solve_single(p, vec({-0.7}), cfg);
    const GeneralSolveReport general = solve_general(p, vec({-0.7}), cfg);
    REQUIRE(single.iterations() == general.iterations());
    for (int k = 0; k < single.iterations(); ++k) {
      CHECK(std::abs(single.iterates[k].x(0) - general.iterates[k].x(0)) <=
            1e-12);
      CHECK(std::abs(single.iterates[k].lambda_g_sq(0) -
                     general.iterates[k].lambda_g_sq(0)) <= 1e-12);
      CHECK(std::abs(single.iterates[k].lambda_g_sq_raw(0) -
                     general.iterates[k].lambda_g_sq_raw(0)) <= 1e-12);
    }
  }
}

TEST_CASE("dependent constraint gradients fall back to least squares") {
  // Two copies of the same constraint in R^3.
  Problem p(half_norm_sq(3), {},
            {coordinate_bound(3, 0, 1.0, "ineq[1]"),
             coordinate_bound(3, 0, 1.0, "ineq[2]")});
  const MultiplierState ms = multiplier_system(vec({2.0, 0.0, 0.0}), p, 9.0, {1, 2});
  CHECK(ms.least_squares_fallback);
  CHECK(std::isfinite(ms.lambda_g_sq(0)));
  CHECK(std::isfinite(ms.lambda_g_sq(1)));
  // Minimum-norm splits the single-constraint multiplier evenly.
  CHECK(ms.lambda_g_sq(0) == doctest::Approx(ms.lambda_g_sq(1)).epsilon(1e-10));
  CHECK(ms.lambda_g_sq(0) + ms.lambda_g_sq(1) ==
        doctest::Approx(8.0).epsilon(1e-10));

  // A pull past the duplicated bound keeps it active at the optimum.
  FunctionOracle pulled(
      3,
      [](const Vec& x) {
        return 0.5 * ((x(0) - 2.0) * (x(0) - 2.0) + x(1) * x(1) +
                      x(2) * x(2));
      },
      [](const Vec& x) { return vec({x(0) - 2.0, x(1), x(2)}); },
      [](const Vec&) { return SymMatrix::identity(3); }, "objective");
  Problem active(std::move(pulled), {},
                 {coordinate_bound(3, 0, 1.0, "ineq[1]"),
                  coordinate_bound(3, 0, 1.0, "ineq[2]")});
  SolverConfig cfg{9.0};
  cfg.e1 = 1e-10;
  const GeneralSolveReport report =
      solve_general(active, vec({2.0, 0.3, -0.4}), cfg);
  CHECK(report.least_squares_fallback_used);
  CHECK(report.termination == Termination::StepTolerance);
  CHECK(std::abs(report.x_tilde(0) - 1.0) <= 1e-6);
  // The shared multiplier mass adds to the single-constraint value 1.
  CHECK(report.multipliers.lambda_g_sq.sum() ==
        doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("unconstrained problems run as pure proximal Newton") {
  Problem p(half_norm_sq(2), {}, {});
  SolverConfig cfg{9.0};
  cfg.e1 = 1e-10;
  const GeneralSolveReport report = solve_general(p, vec({1.0, -1.0}), cfg);
  CHECK(report.termination == Termination::StepTolerance);
  CHECK(report.x_tilde.norm() <= 1e-8);
  CHECK(report.kkt.stationarity <= 1e-8);
}
