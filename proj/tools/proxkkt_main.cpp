#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "proxkkt/run.hpp"

namespace {

bool parse_vector_flag(const std::string& text, proxkkt::Vec& out) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  if (values.empty()) return false;
  out.resize(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = values[i];
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "proxkkt: proximal linearized-Lagrangian solver for constrained "
      "minimization with squared inequality multipliers"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand(
      "solve", "Solve a problem file or a built-in registry problem");

  std::string problem;
  solve->add_option("file", problem,
                    "Problem file path, or registry:<name> for a built-in")
      ->required();

  std::string k_text = "auto";
  solve->add_option("--K", k_text, "Proximal constant, or 'auto' (default)");

  proxkkt::RunConfig cfg;
  solve->add_option("--e1", cfg.e1, "Step-norm stopping tolerance");
  solve->add_option("--kmax", cfg.k_max, "Iteration cap");

  std::string x0_text;
  solve->add_option("--x0", x0_text, "Start point, comma-separated");

  solve->add_flag("--diagnostics", cfg.diagnostics,
                  "Estimate the convergence-condition constants and print a "
                  "verdict per condition (single-inequality problems)");
  solve->add_option("--r", cfg.r, "Diagnostics ball radius");
  solve->add_option("--seed", cfg.seed, "Diagnostics sampling seed");

  std::string trace;
  solve->add_option("--trace", trace, "Write a JSON-lines iteration trace");

  std::string format = "text";
  solve->add_option("--format", format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  solve->add_flag("--force-general", cfg.force_general,
                  "Route single-inequality problems through the general "
                  "active-set algorithm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  cfg.problem = problem;
  if (k_text != "auto") {
    try {
      std::size_t used = 0;
      cfg.K = std::stod(k_text, &used);
      if (used != k_text.size()) throw std::invalid_argument(k_text);
    } catch (const std::exception&) {
      std::cerr << "error: --K expects a real number or 'auto', got '"
                << k_text << "'\n";
      return 1;
    }
  }
  if (!x0_text.empty()) {
    proxkkt::Vec x0;
    if (!parse_vector_flag(x0_text, x0)) {
      std::cerr << "error: --x0 expects comma-separated reals, got '"
                << x0_text << "'\n";
      return 1;
    }
    cfg.x0_override = x0;
  }
  if (!trace.empty()) cfg.trace_path = trace;
  cfg.format = format == "json" ? proxkkt::OutputFormat::Json
                                : proxkkt::OutputFormat::Text;

  return proxkkt::run_solve(cfg, std::cout, std::cerr);
}
