#pragma once

#include <stdexcept>
#include <string>

namespace cuspke {

// Bad configuration or violated precondition. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Any failure of a numerical method. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MetricDegenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonContraction : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The Calabi ODE with b < 0 cannot be continued past a finite t.
class CalabiBreakdown : public NumericalError {
 public:
  CalabiBreakdown(const std::string& what, double t_barrier, double t_reached)
      : NumericalError(what), t_barrier(t_barrier), t_reached(t_reached) {}
  double t_barrier;
  double t_reached;
};

}  // namespace cuspke
