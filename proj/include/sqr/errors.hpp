#pragma once

#include <stdexcept>
#include <string>

namespace sqr {

// Invalid configuration, bad preconditions, malformed input files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A run reached t_end without the reflection measurement settling.
// Carries the partial reading at t_end.
class UnsettledRunError : public std::runtime_error {
 public:
  UnsettledRunError(const std::string& what, double partial_r)
      : std::runtime_error(what), partial_r_(partial_r) {}
  double partial_r() const { return partial_r_; }

 private:
  double partial_r_;
};

// Solver blow-up, collapse guard, failed calibration, singular matrix chain.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqr
