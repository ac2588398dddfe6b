#include "proxkkt/run.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "proxkkt/diagnostics.hpp"
#include "proxkkt/errors.hpp"
#include "proxkkt/expr.hpp"
#include "proxkkt/registry.hpp"
#include "proxkkt/solver_general.hpp"
#include "proxkkt/solver_single.hpp"
#include "proxkkt/trace.hpp"

namespace proxkkt {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v(i));
  }
  return s + "]";
}

std::string json_vec(const Vec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v(i));
  }
  return s + "]";
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

struct Summary {
  std::string problem;
  Eigen::Index n = 0, m1 = 0, m2 = 0;
  double K = 0.0;
  bool auto_K = false;
  double e1 = 0.0;
  int k_max = 0;
  std::string solver;
  Termination termination = Termination::IterationCap;
  int iterations = 0;
  Vec x_tilde;
  Vec lambda_h;
  Vec lambda_g_sq;
  std::vector<int> active;
  KktResiduals kkt;
  std::vector<std::string> warnings;
  bool least_squares_fallback = false;
};

void print_text(std::ostream& out, const Summary& s,
                const std::optional<DiagnosticsReport>& diag) {
  out << "problem: " << s.problem << " (n=" << s.n << ", m1=" << s.m1
      << ", m2=" << s.m2 << ")\n";
  out << "solver: " << s.solver << ", K=" << fmt(s.K)
      << (s.auto_K ? " (auto)" : "") << ", e1=" << fmt(s.e1)
      << ", kmax=" << s.k_max << "\n";
  for (const auto& w : s.warnings) {
    out << "warning: " << w << "\n";
  }
  if (s.least_squares_fallback) {
    out << "note: dependent constraint gradients, multiplier system solved "
           "in the least-squares sense\n";
  }
  out << "termination: " << to_string(s.termination) << " after "
      << s.iterations << " iterations\n";
  out << "x_tilde: " << fmt_vec(s.x_tilde) << "\n";
  if (s.m1 > 0) out << "lambda_h: " << fmt_vec(s.lambda_h) << "\n";
  if (s.m2 > 0) {
    out << "lambda_g_sq: " << fmt_vec(s.lambda_g_sq) << " active: [";
    for (std::size_t i = 0; i < s.active.size(); ++i) {
      if (i) out << ", ";
      out << s.active[i];
    }
    out << "]\n";
  }
  out << "kkt: stationarity=" << fmt(s.kkt.stationarity)
      << " equality=" << fmt(s.kkt.equality)
      << " feasibility=" << fmt(s.kkt.feasibility)
      << " complementarity=" << fmt(s.kkt.complementarity) << "\n";

  if (diag) {
    out << "diagnostics (r=" << fmt(diag->r) << ", samples=" << diag->n_samples
        << ", seed=" << diag->seed << ", degenerate=" << diag->degenerate_samples
        << ")\n";
    out << "  K_hat_1=" << fmt(diag->K_hat_1) << " K_hat_3=" << fmt(diag->K_hat_3)
        << " K_3=" << fmt(diag->K_3) << " alpha_1=" << fmt(diag->alpha_1)
        << " alpha_0=" << fmt(diag->alpha_0) << "\n";
    out << "  first step " << fmt(diag->first_step_norm)
        << " vs shrunk-ball radius " << fmt(diag->shrunk_ball_radius)
        << (diag->first_step_in_shrunk_ball ? " -> inside" : " -> outside")
        << " (advisory)\n";
    for (const auto& c : diag->conditions) {
      out << "  [" << (c.holds ? "pass" : "FAIL") << "] " << c.id
          << "  margin=" << fmt(c.margin);
      if (!c.note.empty()) out << "  (" << c.note << ")";
      out << "\n";
    }
  }
}

void print_json(std::ostream& out, const Summary& s,
                const std::optional<DiagnosticsReport>& diag) {
  std::string j = "{";
  j += "\"problem\":\"" + json_escape(s.problem) + "\"";
  j += ",\"n\":" + std::to_string(s.n);
  j += ",\"m1\":" + std::to_string(s.m1);
  j += ",\"m2\":" + std::to_string(s.m2);
  j += ",\"solver\":\"" + s.solver + "\"";
  j += ",\"K\":" + format_double(s.K);
  j += ",\"auto_K\":" + std::string(s.auto_K ? "true" : "false");
  j += ",\"e1\":" + format_double(s.e1);
  j += ",\"k_max\":" + std::to_string(s.k_max);
  j += ",\"termination\":\"" + std::string(to_string(s.termination)) + "\"";
  j += ",\"iterations\":" + std::to_string(s.iterations);
  j += ",\"x_tilde\":" + json_vec(s.x_tilde);
  j += ",\"lambda_h\":" + json_vec(s.lambda_h);
  j += ",\"lambda_g_sq\":" + json_vec(s.lambda_g_sq);
  j += ",\"active\":[";
  for (std::size_t i = 0; i < s.active.size(); ++i) {
    if (i) j += ',';
    j += std::to_string(s.active[i]);
  }
  j += "]";
  j += ",\"kkt\":{\"stationarity\":" + format_double(s.kkt.stationarity) +
       ",\"equality\":" + format_double(s.kkt.equality) +
       ",\"feasibility\":" + format_double(s.kkt.feasibility) +
       ",\"complementarity\":" + format_double(s.kkt.complementarity) + "}";
  j += ",\"least_squares_fallback\":" +
       std::string(s.least_squares_fallback ? "true" : "false");
  j += ",\"warnings\":[";
  for (std::size_t i = 0; i < s.warnings.size(); ++i) {
    if (i) j += ',';
    j += "\"" + json_escape(s.warnings[i]) + "\"";
  }
  j += "]";
  if (diag) {
    j += ",\"diagnostics\":{";
    j += "\"r\":" + format_double(diag->r);
    j += ",\"samples\":" + std::to_string(diag->n_samples);
    j += ",\"seed\":" + std::to_string(diag->seed);
    j += ",\"degenerate_samples\":" + std::to_string(diag->degenerate_samples);
    j += ",\"K_hat_1\":" + format_double(diag->K_hat_1);
    j += ",\"K_hat_3\":" + format_double(diag->K_hat_3);
    j += ",\"K_3\":" + format_double(diag->K_3);
    j += ",\"alpha_1\":" + format_double(diag->alpha_1);
    j += ",\"alpha_0\":" + format_double(diag->alpha_0);
    j += ",\"first_step_norm\":" + format_double(diag->first_step_norm);
    j += ",\"shrunk_ball_radius\":" + format_double(diag->shrunk_ball_radius);
    j += ",\"first_step_in_shrunk_ball\":" +
         std::string(diag->first_step_in_shrunk_ball ? "true" : "false");
    j += ",\"conditions\":[";
    for (std::size_t i = 0; i < diag->conditions.size(); ++i) {
      const auto& c = diag->conditions[i];
      if (i) j += ',';
      j += "{\"id\":\"" + c.id + "\",\"holds\":" +
           std::string(c.holds ? "true" : "false") +
           ",\"margin\":" + format_double(c.margin);
      j += ",\"witness_x\":" + json_vec(c.witness_x);
      if (c.witness_y) j += ",\"witness_y\":" + json_vec(*c.witness_y);
      if (!c.note.empty()) j += ",\"note\":\"" + json_escape(c.note) + "\"";
      j += "}";
    }
    j += "]}";
  }
  j += "}";
  out << j << "\n";
}

struct Loaded {
  Problem problem;
  std::optional<Vec> start;
  std::string display_name;
};

Loaded load(const std::string& spec) {
  constexpr std::string_view prefix = "registry:";
  if (spec.rfind(prefix, 0) == 0) {
    const RegistryEntry& entry = registry_get(spec.substr(prefix.size()));
    return {entry.problem, entry.x0, spec};
  }
  LoadedProblem lp = load_problem_file(spec);
  return {std::move(lp.problem), std::move(lp.start), spec};
}

}  // namespace

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Loaded> loaded;
  try {
    loaded = load(cfg.problem);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  const Problem& p = loaded->problem;

  Vec x0;
  if (cfg.x0_override) {
    x0 = *cfg.x0_override;
  } else if (loaded->start) {
    x0 = *loaded->start;
  } else {
    err << "error: no start point: the problem file has no x0 line and no "
           "--x0 was given\n";
    return 1;
  }
  if (x0.size() != p.dim()) {
    err << "error: x0 has " << x0.size() << " components but the problem has "
        << p.dim() << "\n";
    return 1;
  }
  if (cfg.e1 <= 0 || cfg.k_max < 1 || (cfg.K && *cfg.K <= 0) || cfg.r <= 0) {
    err << "error: e1, K and r must be positive and kmax >= 1\n";
    return 1;
  }

  Summary s;
  s.problem = loaded->display_name;
  s.n = p.dim();
  s.m1 = p.num_equalities();
  s.m2 = p.num_inequalities();
  s.e1 = cfg.e1;
  s.k_max = cfg.k_max;
  s.auto_K = !cfg.K.has_value();

  SolverConfig solver_cfg{0.0};
  solver_cfg.e1 = cfg.e1;
  solver_cfg.k_max = cfg.k_max;
  solver_cfg.diagnostics_radius = cfg.r;
  solver_cfg.seed = cfg.seed;

  try {
    solver_cfg.K = cfg.K ? *cfg.K : suggest_K(p, x0, cfg.r);
    s.K = solver_cfg.K;

    const bool single_route =
        p.num_equalities() == 0 && p.num_inequalities() == 1 && !cfg.force_general;

    std::optional<DiagnosticsReport> diag;
    if (cfg.diagnostics) {
      if (p.num_equalities() == 0 && p.num_inequalities() == 1) {
        diag = estimate_constants(p, x0, cfg.r, solver_cfg.K,
                                  solver_cfg.diagnostics_samples, cfg.seed);
      } else {
        err << "note: diagnostics apply to single-inequality problems only, "
               "skipping\n";
      }
    }

    if (single_route) {
      s.solver = "single-inequality proximal Newton";
      SolveReport report = solve_single(p, x0, solver_cfg);
      s.termination = report.termination;
      s.iterations = report.iterations();
      s.x_tilde = report.x_tilde;
      s.lambda_h = Vec(0);
      s.lambda_g_sq = Vec::Constant(1, report.lambda_tilde_sq);
      if (report.lambda_tilde_sq > 0) s.active = {1};
      s.kkt = report.kkt;
      s.warnings = report.warnings;
      if (cfg.trace_path) write_trace(*cfg.trace_path, report);
    } else {
      s.solver = "general active-set proximal Newton";
      GeneralSolveReport report = solve_general(p, x0, solver_cfg);
      s.termination = report.termination;
      s.iterations = report.iterations();
      s.x_tilde = report.x_tilde;
      s.lambda_h = report.multipliers.lambda_h;
      s.lambda_g_sq = report.multipliers.lambda_g_sq;
      s.active = report.multipliers.active;
      s.kkt = report.kkt;
      s.warnings = report.warnings;
      s.least_squares_fallback = report.least_squares_fallback_used;
      if (cfg.trace_path) write_trace(*cfg.trace_path, report);
    }

    if (cfg.format == OutputFormat::Json) {
      print_json(out, s, diag);
    } else {
      print_text(out, s, diag);
    }
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    // Coarse classification for the report; the message carries detail.
    Termination reason = Termination::SingularSystem;
    if (dynamic_cast<const EvaluationFailure*>(&e)) {
      reason = Termination::EvaluationFailure;
    } else if (dynamic_cast<const ActiveSetCycle*>(&e)) {
      reason = Termination::ActiveSetCycle;
    }
    err << "solver error (" << to_string(reason) << "): " << e.what() << "\n";
    if (cfg.format == OutputFormat::Json) {
      out << "{\"error\":\"" << json_escape(e.what()) << "\",\"termination\":\""
          << to_string(reason) << "\"}\n";
    }
    return 3;
  }

  switch (s.termination) {
    case Termination::StepTolerance: return 0;
    case Termination::IterationCap: return 2;
    default: return 3;
  }
}

}  // namespace proxkkt
