#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mf {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EvaluationError : std::runtime_error {
  EvaluationError(const std::string& what, double x, double t)
      : std::runtime_error(what + " at (x=" + std::to_string(x) + ", t=" + std::to_string(t) + ")"),
        x(x), t(t) {}
  double x, t;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonconvergenceError : std::runtime_error {
  NonconvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
  int slice = -1;
  int step = -1;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mf
