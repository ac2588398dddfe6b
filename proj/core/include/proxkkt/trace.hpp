#pragma once

#include <ostream>
#include <string>

#include "proxkkt/solver_types.hpp"

namespace proxkkt {

/// Writes one JSON object per line, one line per iteration:
///   {"k":.., "x":[..], "lambda_h":[..], "lambda_g_sq":[..],
///    "lambda_g_sq_raw":[..], "active":[..], "step_norm":..,
///    "stationarity":.., "feasibility":.., "complementarity":..}
/// followed by a summary line {"termination":"..","iterations":..}.
/// Numbers carry 17 significant digits.
void write_trace(std::ostream& out, const SolveReport& report);
void write_trace(std::ostream& out, const GeneralSolveReport& report);

/// Same, to a file. Throws IoFailure when the file cannot be written.
void write_trace(const std::string& path, const SolveReport& report);
void write_trace(const std::string& path, const GeneralSolveReport& report);

/// %.17g rendering used for every number in traces and JSON output.
std::string format_double(double v);

}  // namespace proxkkt
