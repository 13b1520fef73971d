#pragma once

#include <stdexcept>

namespace senseopt {

/// The P3 feasible interval (tau_min, T) is empty.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cost surface handed to the gradient-flow solver returned a
/// non-finite derivative.
struct NonFiniteCostError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace senseopt
