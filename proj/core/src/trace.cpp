#include "proxkkt/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace proxkkt {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";  // JSON has no non-finite numbers
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_array(std::string& line, const Vec& v) {
  line += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) line += ',';
    line += format_double(v(i));
  }
  line += ']';
}

void append_array(std::string& line, const std::vector<int>& v) {
  line += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) line += ',';
    line += std::to_string(v[i]);
  }
  line += ']';
}

void write_records(std::ostream& out, const std::vector<IterateRecord>& records,
                   Termination termination) {
  std::string line;
  for (const auto& rec : records) {
    line.clear();
    line += "{\"k\":" + std::to_string(rec.k);
    line += ",\"x\":";
    append_array(line, rec.x);
    line += ",\"lambda_h\":";
    append_array(line, rec.lambda_h);
    line += ",\"lambda_g_sq\":";
    append_array(line, rec.lambda_g_sq);
    line += ",\"lambda_g_sq_raw\":";
    append_array(line, rec.lambda_g_sq_raw);
    line += ",\"active\":";
    append_array(line, rec.active);
    line += ",\"step_norm\":" + format_double(rec.step_norm);
    line += ",\"stationarity\":" + format_double(rec.kkt.stationarity);
    line += ",\"feasibility\":" + format_double(rec.kkt.feasibility);
    line += ",\"complementarity\":" + format_double(rec.kkt.complementarity);
    line += "}\n";
    out << line;
  }
  out << "{\"termination\":\"" << to_string(termination)
      << "\",\"iterations\":" << records.size() << "}\n";
}

template <typename Report>
void write_to_file(const std::string& path, const Report& report) {
  std::ofstream out(path);
  if (!out) {
    throw IoFailure("cannot open trace file '" + path + "' for writing");
  }
  write_trace(out, report);
  out.flush();
  if (!out) {
    throw IoFailure("failed writing trace file '" + path + "'");
  }
}

}  // namespace

void write_trace(std::ostream& out, const SolveReport& report) {
  write_records(out, report.iterates, report.termination);
}

void write_trace(std::ostream& out, const GeneralSolveReport& report) {
  write_records(out, report.iterates, report.termination);
}

void write_trace(const std::string& path, const SolveReport& report) {
  write_to_file(path, report);
}

void write_trace(const std::string& path, const GeneralSolveReport& report) {
  write_to_file(path, report);
}

}  // namespace proxkkt
