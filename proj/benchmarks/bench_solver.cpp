#include <benchmark/benchmark.h>

#include <random>

#include "proxkkt/expr.hpp"
#include "proxkkt/registry.hpp"
#include "proxkkt/solver_general.hpp"
#include "proxkkt/solver_single.hpp"

namespace {

using namespace proxkkt;

void BM_RegularizedSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(gen);
  const SymMatrix h(a.transpose() * a);
  Vec b(n);
  for (int i = 0; i < n; ++i) b(i) = u(gen);

  for (auto _ : state) {
    benchmark::DoNotOptimize(regularized_solve(h, 2.5, b));
  }
}
BENCHMARK(BM_RegularizedSolve)->Arg(4)->Arg(16)->Arg(64);

void BM_DualEval(benchmark::State& state) {
  const ExprPtr e = parse_expression(
      "100*(x2 - x1^2)^2 + (1 - x1)^2 + sin(x1*x2) + exp(0.1*x3)", 3);
  Vec x(3);
  x << 0.4, -0.3, 1.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_with_derivatives(*e, x));
  }
}
BENCHMARK(BM_DualEval);

void BM_SolveSingleQuad(benchmark::State& state) {
  const RegistryEntry& e = registry_get("quad-active");
  SolverConfig cfg{9.0};
  cfg.e1 = 1e-10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_single(e.problem, e.x0, cfg));
  }
}
BENCHMARK(BM_SolveSingleQuad);

void BM_ActiveSetResolve(benchmark::State& state) {
  const RegistryEntry& e = registry_get("box-2d");
  Vec x(2);
  x << 0.5, 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(active_set_resolve(x, e.problem, 9.0));
  }
}
BENCHMARK(BM_ActiveSetResolve);

}  // namespace

BENCHMARK_MAIN();
