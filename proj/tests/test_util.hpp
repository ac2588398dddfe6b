#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

#include "proxkkt/problem.hpp"

namespace proxkkt::testutil {

inline Vec vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

// min 0.5 (x1-c)^2 s.t. x1 - bound <= 0, with exact derivatives.
inline Problem quad_with_bound(double c, double bound) {
  FunctionOracle f(
      1, [c](const Vec& x) { return 0.5 * (x(0) - c) * (x(0) - c); },
      [c](const Vec& x) { return vec({x(0) - c}); },
      [](const Vec&) { return SymMatrix(Eigen::MatrixXd::Identity(1, 1)); },
      "objective");
  FunctionOracle g(
      1, [bound](const Vec& x) { return x(0) - bound; },
      [](const Vec&) { return vec({1.0}); },
      [](const Vec&) { return SymMatrix::zero(1); }, "ineq[1]");
  return Problem(std::move(f), {}, {std::move(g)});
}

// RAII temp file holding the given problem text.
class TempProblemFile {
 public:
  explicit TempProblemFile(const std::string& contents) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("proxkkt_test_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++) + ".prob"))
                .string();
    std::ofstream out(path_);
    out << contents;
  }
  ~TempProblemFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace proxkkt::testutil
