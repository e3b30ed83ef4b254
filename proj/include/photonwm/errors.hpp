#pragma once

#include <stdexcept>
#include <string>

namespace photonwm {

/// A wave vector on (or too close to) the k = 0 point or the polar axis,
/// where the spherical frame and the position operator are singular.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two fields, a field and a basis, or a state and a basis live on different grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wave-function labels (alpha, helicity, time) do not pair up as required.
class LabelMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested computation exceeds a configured size guard.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace photonwm
