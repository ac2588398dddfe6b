#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxkkt/diagnostics.hpp"
#include "proxkkt/solver_single.hpp"
#include "test_util.hpp"

using namespace proxkkt;
using testutil::quad_with_bound;
using testutil::vec;

TEST_CASE("constant curvature is estimated exactly") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const DiagnosticsReport rep =
      estimate_constants(p, vec({-0.5}), 0.25, 9.0, 64, 42);
  CHECK(rep.K_hat_1 == 1.0);
}

TEST_CASE("inactive ball: zero Lipschitz constant, degenerate rates") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const DiagnosticsReport rep =
      estimate_constants(p, vec({-0.5}), 0.25, 9.0, 256, 42);
  CHECK(rep.K_hat_3 == 0.0);
  CHECK(rep.K_3 == 0.0);
  CHECK(rep.alpha_1 == 0.0);
  CHECK(rep.alpha_0 == 1.0);
  CHECK(rep.degenerate_samples == 0);
  CHECK(rep.all_conditions_hold());

  const ConditionResult* resolvent = rep.find("resolvent-norm-bound");
  REQUIRE(resolvent != nullptr);
  CHECK(resolvent->holds);
  // 1/(9-1) - 1/(1+9) = 0.025, exact because the Hessian is constant.
  CHECK(resolvent->margin == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("active ball: the rate estimate exceeds one and the range check fails") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const DiagnosticsReport rep =
      estimate_constants(p, vec({2.0}), 0.25, 9.0, 256, 42);
  // lambda^2(x) = 9x - 10 on this ball, so the pairwise slope is 9.
  CHECK(rep.K_hat_3 == doctest::Approx(9.0).epsilon(1e-6));
  CHECK(rep.K_3 == doctest::Approx(9.0).epsilon(1e-6));
  CHECK(rep.alpha_1 == doctest::Approx(2.25).epsilon(1e-6));

  const ConditionResult* range = rep.find("contraction-rate-in-range");
  REQUIRE(range != nullptr);
  CHECK(!range->holds);
  CHECK(range->margin == doctest::Approx(1.0 - 2.25).epsilon(1e-6));
  CHECK(!rep.all_conditions_hold());
}

TEST_CASE("K below the curvature bound fails with margin K - K_hat_1") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const DiagnosticsReport rep =
      estimate_constants(p, vec({-0.5}), 0.25, 0.5, 64, 42);
  const ConditionResult* c = rep.find("prox-exceeds-curvature");
  REQUIRE(c != nullptr);
  CHECK(!c->holds);
  CHECK(c->margin == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("zero multiplier reduces the curvature lower bound to f'' >= 0") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const DiagnosticsReport rep =
      estimate_constants(p, vec({-0.5}), 0.25, 9.0, 128, 42);
  const ConditionResult* c = rep.find("lagrangian-curvature-lower-bound");
  REQUIRE(c != nullptr);
  CHECK(c->holds);
  // alpha_1 = 0, g'' = 0: margin is min eig f'' = 1.
  CHECK(c->margin == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reports are deterministic in the seed") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const DiagnosticsReport a =
      estimate_constants(p, vec({2.0}), 0.25, 9.0, 64, 7);
  const DiagnosticsReport b =
      estimate_constants(p, vec({2.0}), 0.25, 9.0, 64, 7);
  CHECK(a.K_hat_1 == b.K_hat_1);
  CHECK(a.K_hat_3 == b.K_hat_3);
  CHECK(a.alpha_1 == b.alpha_1);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i] == b.samples[i]);
    CHECK(a.lambda_sq[i] == b.lambda_sq[i]);
  }
  REQUIRE(a.conditions.size() == b.conditions.size());
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    CHECK(a.conditions[i].holds == b.conditions[i].holds);
    CHECK(a.conditions[i].margin == b.conditions[i].margin);
  }

  const DiagnosticsReport c =
      estimate_constants(p, vec({2.0}), 0.25, 9.0, 64, 8);
  CHECK(c.samples[0] != a.samples[0]);
}

TEST_CASE("resolvent-bound margin shrinks as K grows") {
  // 1/(K - 1) - 1/(K + 1) is strictly decreasing in K for K > 1.
  const Problem p = quad_with_bound(0.0, 1.0);
  double previous = std::numeric_limits<double>::infinity();
  for (double K : {5.0, 9.0, 20.0, 50.0}) {
    const DiagnosticsReport rep =
        estimate_constants(p, vec({-0.5}), 0.25, K, 64, 42);
    const ConditionResult* c = rep.find("resolvent-norm-bound");
    REQUIRE(c != nullptr);
    CHECK(c->holds);
    CHECK(c->margin < previous);
    previous = c->margin;
  }
}

TEST_CASE("when every condition holds the run contracts at alpha_0") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const Vec x0 = vec({-0.5});
  const DiagnosticsReport rep = estimate_constants(p, x0, 0.25, 9.0, 256, 42);
  REQUIRE(rep.all_conditions_hold());

  SolverConfig cfg{9.0};
  cfg.e1 = 1e-9;
  const SolveReport run = solve_single(p, x0, cfg);
  for (std::size_t k = 1; k + 1 < run.iterates.size(); ++k) {
    const double ratio =
        run.iterates[k + 1].step_norm / run.iterates[k].step_norm;
    CHECK(ratio <= rep.alpha_0 + 0.05);
  }
}

TEST_CASE("scalar problems: eigenvalue path equals direct arithmetic") {
  // Nonconstant curvature: f = x^2/2 + x^4/12, f'' = 1 + x^2.
  FunctionOracle f(
      1,
      [](const Vec& x) {
        const double t = x(0);
        return 0.5 * t * t + t * t * t * t / 12.0;
      },
      [](const Vec& x) {
        const double t = x(0);
        return vec({t + t * t * t / 3.0});
      },
      [](const Vec& x) {
        return SymMatrix(
            Eigen::MatrixXd::Constant(1, 1, 1.0 + x(0) * x(0)));
      });
  FunctionOracle g(1, [](const Vec& x) { return x(0) - 3.0; },
                   [](const Vec&) { return vec({1.0}); },
                   [](const Vec&) { return SymMatrix::zero(1); });
  const Problem p(std::move(f), {}, {std::move(g)});
  const double K = 30.0;
  const DiagnosticsReport rep =
      estimate_constants(p, vec({0.5}), 0.5, K, 64, 42);

  // Re-derive every margin with plain double arithmetic.
  auto fpp = [](double x) { return 1.0 + x * x; };
  const double khat1 = rep.K_hat_1;

  double lower_bound_margin = std::numeric_limits<double>::infinity();
  double ratio_margin = std::numeric_limits<double>::infinity();
  double scaled_margin = std::numeric_limits<double>::infinity();
  double resolvent_margin = std::numeric_limits<double>::infinity();
  double product_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const double xi = rep.samples[i](0);
    const double ai = fpp(xi) + K;
    resolvent_margin =
        std::min(resolvent_margin, 1.0 / (K - khat1) - 1.0 / ai);
    product_margin = std::min(
        product_margin, rep.alpha_1 / 2.0 - (1.0 / std::abs(ai)) * rep.K_3);
    for (std::size_t j = 0; j < rep.samples.size(); ++j) {
      const double xj = rep.samples[j](0);
      // g'' = 0, so the multiplier drops out of the curvature conditions.
      lower_bound_margin =
          std::min(lower_bound_margin,
                   fpp(xi) - rep.alpha_1 * (khat1 + K));
      const double h = (fpp(xj) + K) / ai;
      ratio_margin = std::min(
          ratio_margin, std::min(h - (1.0 - rep.alpha_1 / 4.0),
                                 (1.0 + rep.alpha_1 / 4.0) - h));
      const double scaled = fpp(xi) / (K - khat1);
      scaled_margin = std::min(
          scaled_margin,
          std::min(scaled - 0.0, (1.0 - rep.alpha_1 / 2.0) - scaled));
    }
  }
  if (rep.K_3 == 0.0) product_margin = 0.0;

  CHECK(rep.find("lagrangian-curvature-lower-bound")->margin ==
        doctest::Approx(lower_bound_margin).epsilon(1e-12));
  CHECK(rep.find("hessian-ratio-near-identity")->margin ==
        doctest::Approx(ratio_margin).epsilon(1e-12));
  CHECK(rep.find("scaled-curvature-upper-bound")->margin ==
        doctest::Approx(scaled_margin).epsilon(1e-12));
  CHECK(rep.find("resolvent-norm-bound")->margin ==
        doctest::Approx(resolvent_margin).epsilon(1e-12));
  CHECK(rep.find("resolvent-lipschitz-product")->margin ==
        doctest::Approx(product_margin).epsilon(1e-12));
}

TEST_CASE("suggest_K") {
  CHECK(suggest_K(quad_with_bound(0.0, 1.0), vec({0.0}), 1.0) ==
        doctest::Approx(10.0).epsilon(1e-12));

  // Linear objective: zero curvature, floor kicks in.
  Problem linear(FunctionOracle(1, [](const Vec& x) { return 2.0 * x(0); },
                                [](const Vec&) { return vec({2.0}); },
                                [](const Vec&) { return SymMatrix::zero(1); }),
                 {}, {FunctionOracle(1, [](const Vec& x) { return x(0); })});
  CHECK(suggest_K(linear, vec({0.0}), 1.0) == 1.0);

  // f = 50 x^2 has curvature 100.
  Problem stiff(FunctionOracle(
                    1, [](const Vec& x) { return 50.0 * x(0) * x(0); },
                    [](const Vec& x) { return vec({100.0 * x(0)}); },
                    [](const Vec&) {
                      return SymMatrix(Eigen::MatrixXd::Constant(1, 1, 100.0));
                    }),
                {}, {FunctionOracle(1, [](const Vec& x) { return x(0); })});
  CHECK(suggest_K(stiff, vec({0.0}), 1.0) == doctest::Approx(1000.0));
}

TEST_CASE("degenerate samples are counted and can disqualify the estimate") {
  // Constant constraint: gradient vanishes everywhere.
  Problem p(
      FunctionOracle(1, [](const Vec& x) { return 0.5 * x(0) * x(0); }),
      {},
      {FunctionOracle(1, [](const Vec&) { return -1.0; })});
  CHECK_THROWS_AS(estimate_constants(p, vec({0.0}), 0.5, 9.0, 32, 42),
                  InsufficientSamples);
}

TEST_CASE("first-step advisory against the shrunken ball") {
  const Problem p = quad_with_bound(0.0, 1.0);
  const DiagnosticsReport rep =
      estimate_constants(p, vec({-0.5}), 0.25, 9.0, 64, 42);
  // alpha_0 = 1 here, so the shrunken ball has radius zero and the
  // (nonzero) first step cannot lie inside it.
  CHECK(rep.shrunk_ball_radius == 0.0);
  CHECK(rep.first_step_norm == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(!rep.first_step_in_shrunk_ball);
}

TEST_CASE("preconditions") {
  const Problem p = quad_with_bound(0.0, 1.0);
  CHECK_THROWS_AS(estimate_constants(p, vec({0.0}), 0.5, 9.0, 1, 42),
                  DimensionMismatch);
  CHECK_THROWS_AS(estimate_constants(p, vec({0.0}), -1.0, 9.0, 16, 42),
                  DimensionMismatch);
  Problem eq(FunctionOracle(2, [](const Vec& x) { return x.squaredNorm(); }),
             {FunctionOracle(2, [](const Vec& x) { return x(0); })}, {});
  CHECK_THROWS_AS(estimate_constants(eq, vec({0.0, 0.0}), 0.5, 9.0, 16, 42),
                  DimensionMismatch);
}
