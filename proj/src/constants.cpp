#include "photonwm/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace photonwm {

PhysicalConstants::PhysicalConstants(double c, double hbar, double eps0, double mu0)
    : c_(c), hbar_(hbar), eps0_(eps0), mu0_(mu0) {
  if (!(c > 0.0 && hbar > 0.0 && eps0 > 0.0 && mu0 > 0.0)) {
    throw std::invalid_argument("physical constants must be positive");
  }
  if (std::abs(c * c * eps0 * mu0 - 1.0) > 1e-12) {
    throw std::invalid_argument("physical constants violate c^2 eps0 mu0 = 1");
  }
}

PhysicalConstants PhysicalConstants::natural() { return {1.0, 1.0, 1.0, 1.0}; }

PhysicalConstants PhysicalConstants::si() {
  constexpr double c = 299792458.0;
  constexpr double eps0 = 8.8541878128e-12;
  return {c, 1.054571817e-34, eps0, 1.0 / (eps0 * c * c)};
}

PhysicalConstants PhysicalConstants::from_name(const std::string& units) {
  if (units == "natural") return natural();
  if (units == "si") return si();
  throw std::invalid_argument("unknown unit system '" + units + "' (expected natural or si)");
}

}  // namespace photonwm
