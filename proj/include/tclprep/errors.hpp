// errors.hpp — Error types shared across modules

#pragma once

#include <stdexcept>
#include <string>

namespace tclprep {

// quadrature / step-halving / integration tolerance failures
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tclprep
