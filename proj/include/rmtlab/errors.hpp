#pragma once

#include <stdexcept>
#include <string>

namespace rmtlab {

/// A numerical procedure failed to converge or produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmtlab
