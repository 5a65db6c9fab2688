#pragma once

#include <stdexcept>

namespace wavecount {

/// An enumeration would visit more candidates than the configured budget allows.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computed result failed one of its own consistency checks.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wavecount
