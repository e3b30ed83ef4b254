#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "photonwm/constants.hpp"
#include "photonwm/kspace.hpp"

namespace photonwm {

/// Bessel function of the first kind J_n(x) for integer n and real x: ascending series for
/// |x| <= 1, Miller downward recurrence normalized by J0 + 2 Sum J_2k = 1 otherwise.
double bessel_j(int n, double x);

/// Radial envelope of a paraxial beam.
struct RadialEnvelope {
  enum class Kind { gaussian, flat_top, ring };
  Kind kind = Kind::gaussian;
  double amplitude = 1.0;
  /// 1/e field radius of the Gaussian (and of the flat-top taper)
  double waist = 1.0;
  /// flat-top: |u| = amplitude for r <= flat_radius
  double flat_radius = 0.0;
  /// hard truncation radius (infinite when <= 0)
  double aperture = 0.0;

  double operator()(double r) const;
  /// radius beyond which the envelope is negligible; radial grids extend to 8 waists past it
  double extent() const;
};

std::string to_string(RadialEnvelope::Kind k);
RadialEnvelope::Kind envelope_kind_from_string(const std::string& s);

struct BeamSpec {
  enum class Kind { bessel, paraxial };
  Kind kind = Kind::paraxial;
  double omega = 1.0;
  double k_z = 1.0;
  int l_z = 0;
  int sigma = 1;
  RadialEnvelope envelope;
  PhysicalConstants constants = PhysicalConstants::natural();

  /// sqrt(omega^2/c^2 - k_z^2); throws for k_z outside (0, omega/c]
  double k_perp() const;
};

/// exp(-i omega t + i l phi + i k_z z) J_l(k_perp rho) at cylindrical points (rho, phi, z).
Eigen::VectorXcd bessel_mode(const BeamSpec& spec, const Eigen::Matrix3Xd& cylindrical, double t = 0.0);

/// max over points of |(lap + omega^2/c^2) mode| / (omega^2/c^2 max|mode|) with a fourth-order
/// finite-difference Laplacian in Cartesian coordinates, step h.
double bessel_helmholtz_residual(const BeamSpec& spec, const Eigen::Matrix3Xd& cartesian, double h);

/// Uniform radial grid of `points` samples on [0, extent + 8 waists].
Eigen::VectorXd radial_grid(const BeamSpec& spec, int points = 2048);

/// A+ = 1/2 (x + i sigma y) u(r) exp(i l phi + i k_z (z - c t)) at cylindrical points.
FieldMatrix paraxial_field(const BeamSpec& spec, const Eigen::Matrix3Xd& cylindrical, double t = 0.0);

/// n^(1/2) = conj(Psi^(1/2)) . Psi^(-1/2) with Psi^(-1/2) = sqrt(2 eps0/hbar) A and Psi^(1/2) = omega Psi^(-1/2).
Eigen::VectorXd paraxial_density(const BeamSpec& spec, const FieldMatrix& A);

struct AMProfile {
  Eigen::VectorXd r;
  Eigen::VectorXd u2;
  /// photon density eps0 omega |u|^2 / hbar
  Eigen::VectorXd n;
  /// eps0 omega l |u|^2
  Eigen::VectorXd orbital;
  /// -1/2 eps0 omega sigma r d|u|^2/dr
  Eigen::VectorXd spin;
  Eigen::VectorXd jz;
  /// running trapezoid integrals over 2 pi r dr
  Eigen::VectorXd cumulative_n;
  Eigen::VectorXd cumulative_jz;
  double total_n = 0.0;
  double total_orbital = 0.0;
  double total_spin = 0.0;
  double total_jz = 0.0;
  /// total_jz / (hbar total_n), in units of hbar
  double per_photon = 0.0;
};

AMProfile am_density(const BeamSpec& spec, const Eigen::VectorXd& r);

struct ApertureReport {
  double aperture_radius = 0.0;
  AMProfile before;
  AMProfile after;
  /// J_z of largest magnitude within two grid steps of the aperture, with its sign
  double edge_spike = 0.0;
  double edge_radius = 0.0;
  /// share of the transmitted total_jz carried by |r - a| <= 4 dr
  double edge_fraction = 0.0;
  double change_in_total = 0.0;
};

ApertureReport aperture_demo(const BeamSpec& spec, double aperture_radius, int points = 2048);

}  // namespace photonwm
