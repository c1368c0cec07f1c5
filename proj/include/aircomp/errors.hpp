#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace aircomp {

// A requested design cannot satisfy its constraint set. Carries whichever
// diagnostic applies: the smallest reachable MSE requirement for scaling
// designs, or the index of the user whose power budget is violated.
class InfeasibleDesign : public std::runtime_error {
 public:
  explicit InfeasibleDesign(const std::string& what,
                            double mu_floor = std::numeric_limits<double>::quiet_NaN(),
                            int violating_user = -1)
      : std::runtime_error(what), mu_floor_(mu_floor), violating_user_(violating_user) {}

  // Smallest feasible MSE requirement, NaN if not applicable.
  double mu_floor() const { return mu_floor_; }
  // 0-based user index whose budget went negative, -1 if not applicable.
  int violating_user() const { return violating_user_; }

 private:
  double mu_floor_;
  int violating_user_;
};

// A covariance that must be inverted is singular (e.g. zero signal and
// zero noise at the same time).
class DegenerateDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration input (file syntax, missing keys, bad values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aircomp
