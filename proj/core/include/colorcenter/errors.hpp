#pragma once

#include <stdexcept>
#include <string>

namespace colorcenter {

/// Bad caller input: malformed files, violated preconditions, impossible geometry.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to produce a usable answer (non-convergence,
/// unidentifiable parameters).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace colorcenter
