#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxkkt/problem.hpp"

namespace proxkkt {

struct KnownSolution {
  Vec x;
  Vec lambda_h;
  Vec lambda_g_sq;
};

/// Built-in analytic test problem. When `known` is present its KKT
/// residuals are validated to <= 1e-9 at registration time.
struct RegistryEntry {
  std::string name;
  Problem problem;
  Vec x0;
  std::optional<KnownSolution> known;
  std::string note;
};

/// Looks up a built-in problem by name. Throws UnknownProblem.
const RegistryEntry& registry_get(const std::string& name);

std::vector<std::string> registry_names();

/// Feasible grid point minimizing the objective over the box [lo, hi]
/// with `grid_points_per_axis` points per axis. Inequalities must
/// satisfy g_l(x) <= 1e-9 (1 + |x|_inf); equalities are accepted within
/// one grid spacing. Ties break toward the lexicographically smallest
/// grid index. Dimension is capped at 3.
Vec brute_force_minimize(const Problem& p, const Vec& lo, const Vec& hi,
                         int grid_points_per_axis);

}  // namespace proxkkt
