#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "proxkkt/expr.hpp"

namespace proxkkt {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Vec parse_vector(const std::string& text, int line) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = trim(text.substr(pos, comma - pos));
    if (item.empty()) {
      throw ParseError(pos, "empty vector component", line);
    }
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') {
      throw ParseError(pos, "malformed number '" + item + "'", line);
    }
    values.push_back(v);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  Vec x(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) x(static_cast<Eigen::Index>(i)) = values[i];
  return x;
}

}  // namespace

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoFailure("cannot open problem file '" + path + "'");
  }

  int n = 0;
  ExprPtr objective;
  std::vector<ExprPtr> eqs, ineqs;
  std::optional<Vec> start;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq_pos = line.find('=');
    if (eq_pos == std::string::npos) {
      throw ParseError(0, "expected 'key = value'", line_no);
    }
    const std::string key = trim(line.substr(0, eq_pos));
    const std::string value = trim(line.substr(eq_pos + 1));
    if (value.empty()) {
      throw ParseError(eq_pos + 1, "missing value for '" + key + "'", line_no);
    }

    auto parse_line_expression = [&](const std::string& text) -> ExprPtr {
      if (n < 1) {
        throw ParseError(0, "'n = <dim>' must precede expressions", line_no);
      }
      try {
        return parse_expression(text, n);
      } catch (const UnknownVariable& uv) {
        throw UnknownVariable(uv.offset(), uv.index(), n);
      } catch (const UnknownFunction&) {
        throw;
      } catch (const ParseError& pe) {
        throw ParseError(pe.offset(), pe.what(), line_no);
      }
    };

    if (key == "n") {
      int parsed = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
      if (ec != std::errc() || ptr != value.data() + value.size() || parsed < 1) {
        throw ParseError(eq_pos + 1, "n must be a positive integer", line_no);
      }
      n = parsed;
    } else if (key == "minimize") {
      if (objective) {
        throw ParseError(0, "duplicate 'minimize' line", line_no);
      }
      objective = parse_line_expression(value);
    } else if (key == "eq") {
      eqs.push_back(parse_line_expression(value));
    } else if (key == "ineq") {
      ineqs.push_back(parse_line_expression(value));
    } else if (key == "x0") {
      if (n < 1) {
        throw ParseError(0, "'n = <dim>' must precede x0", line_no);
      }
      Vec x0 = parse_vector(value, line_no);
      if (x0.size() != n) {
        throw DimensionMismatch("x0 has " + std::to_string(x0.size()) +
                                " components but n = " + std::to_string(n));
      }
      start = std::move(x0);
    } else {
      throw ParseError(0, "unknown key '" + key + "'", line_no);
    }
  }

  if (n < 1) {
    throw ParseError(0, "problem file must declare 'n = <dim>'", line_no);
  }
  if (!objective) {
    throw ParseError(0, "problem file must declare 'minimize = <expression>'", line_no);
  }

  std::vector<FunctionOracle> eq_oracles, ineq_oracles;
  eq_oracles.reserve(eqs.size());
  for (std::size_t j = 0; j < eqs.size(); ++j) {
    eq_oracles.push_back(
        make_expression_oracle(eqs[j], "eq[" + std::to_string(j + 1) + "]"));
  }
  ineq_oracles.reserve(ineqs.size());
  for (std::size_t l = 0; l < ineqs.size(); ++l) {
    ineq_oracles.push_back(
        make_expression_oracle(ineqs[l], "ineq[" + std::to_string(l + 1) + "]"));
  }

  return LoadedProblem{
      Problem(make_expression_oracle(objective, "objective"),
              std::move(eq_oracles), std::move(ineq_oracles)),
      std::move(start)};
}

}  // namespace proxkkt
