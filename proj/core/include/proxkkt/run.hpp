#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "proxkkt/dense_linalg.hpp"

namespace proxkkt {

enum class OutputFormat { Text, Json };

/// One solve invocation. `problem` is a file path or "registry:<name>".
/// K empty means "auto": pick max(10 * K_hat_1 estimate, 1) on B_r(x0).
struct RunConfig {
  std::string problem;
  std::optional<double> K;  // nullopt = auto
  double e1 = 1e-5;
  int k_max = 500;
  std::optional<Vec> x0_override;
  bool diagnostics = false;
  double r = 1.0;
  unsigned seed = 42;
  std::optional<std::string> trace_path;
  OutputFormat format = OutputFormat::Text;
  bool force_general = false;
};

/// Loads the problem, dispatches to the single-inequality or general
/// solver, prints a summary (and the diagnostics condition table on
/// request), and writes the iteration trace when asked.
///
/// Exit status: 0 step-tolerance, 2 iteration cap, 3 solver error,
/// 1 usage or problem-file error.
int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace proxkkt
