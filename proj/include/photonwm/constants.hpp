#pragma once

#include <string>

namespace photonwm {

/// Speed of light, reduced Planck constant, vacuum permittivity and permeability.
/// Construction enforces c^2 eps0 mu0 = 1 to 1e-12.
class PhysicalConstants {
 public:
  PhysicalConstants(double c, double hbar, double eps0, double mu0);

  /// c = hbar = eps0 = mu0 = 1.
  static PhysicalConstants natural();
  /// SI values; mu0 is derived from c and eps0 so the invariant holds exactly.
  static PhysicalConstants si();
  /// "natural" or "si".
  static PhysicalConstants from_name(const std::string& units);

  double c() const { return c_; }
  double hbar() const { return hbar_; }
  double eps0() const { return eps0_; }
  double mu0() const { return mu0_; }

  bool operator==(const PhysicalConstants&) const = default;

 private:
  double c_;
  double hbar_;
  double eps0_;
  double mu0_;
};

}  // namespace photonwm
