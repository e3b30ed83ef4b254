#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photonwm/kspace.hpp"
#include "photonwm/polarization.hpp"

namespace photonwm {

/// Exponent of omega_k weighting a wave function: -1/2 (potential-like), 0, +1/2 (field-like).
class Alpha {
 public:
  static Alpha minus_half() { return Alpha(-1); }
  static Alpha zero() { return Alpha(0); }
  static Alpha plus_half() { return Alpha(1); }
  /// Accepts exactly -0.5, 0 or 0.5; throws LabelMismatch otherwise.
  static Alpha from_value(double v);

  double value() const { return 0.5 * twice_; }
  Alpha operator-() const { return Alpha(-twice_); }
  bool operator==(const Alpha&) const = default;
  std::string str() const;

 private:
  explicit Alpha(int twice) : twice_(twice) {}
  int twice_;
};

inline const std::array<Alpha, 3> kAllAlphas{Alpha::minus_half(), Alpha::zero(), Alpha::plus_half()};

/// omega_k^alpha at every grid point.
Eigen::VectorXd omega_power(const KGrid& grid, double exponent);

/// How the k-space gradient is discretized.
///  rotated_frame: D_chi w^a i grad_h (w^-a D_chi^-1 F); differences act on the factor that
///                 carries the position phase, so eigenvectors and commutators are sharp.
///  four_term:     i grad_h F + M(k) F with the pointwise matrix M of the operator.
enum class Discretization { rotated_frame, four_term };

std::string to_string(Discretization d);

/// Pointwise matrix M_axis(k) in r_axis = i d/dk_axis + M_axis(k):
///   -i alpha k_hat/k + (k_hat x S)/k - S_k phi_hat cot(theta)/k - S_k grad(chi).
Eigen::Matrix3cd position_operator_coefficients(const PolarizationBasis& basis, Alpha alpha, Index p, Axis axis);

class PositionOperator {
 public:
  PositionOperator(PolarizationBasis basis, Alpha alpha, Discretization d = Discretization::rotated_frame);

  VectorField3 apply(const VectorField3& field, Axis axis) const;

  const PolarizationBasis& basis() const { return basis_; }
  Alpha alpha() const { return alpha_; }
  Discretization discretization() const { return disc_; }

 private:
  PolarizationBasis basis_;
  Alpha alpha_;
  Discretization disc_;
  std::vector<Eigen::Matrix3cd> rot_;
  Eigen::VectorXd w_alpha_;
};

VectorField3 apply_position_operator(const VectorField3& field, const PolarizationBasis& basis, Alpha alpha,
                                     Axis axis, Discretization d = Discretization::rotated_frame);

/// Localized state omega^alpha e^(chi)_{k,sigma} exp(-i k.r + i omega t)/sqrt(V), sampled on the grid.
struct PositionEigenstate {
  Eigen::Vector3d r;
  int sigma;
  Alpha alpha;
  double t;
  VectorField3 samples;
};

PositionEigenstate position_eigenstate(const PolarizationBasis& basis, const Eigen::Vector3d& r, int sigma,
                                       Alpha alpha, double t = 0.0);

/// || r_axis psi - r psi || / ||psi|| per axis over interior points (outermost layer excluded).
Eigen::Vector3d eigenvector_residual(const PositionEigenstate& state, const PolarizationBasis& basis,
                                     Discretization d = Discretization::rotated_frame);

/// max |k_hat . F| / max |F|
double longitudinal_fraction(const VectorField3& field);
VectorField3 transverse_projection(const VectorField3& field);

enum class TransversePolicy { project, reject };

struct CommutatorResult {
  double residual = 0.0;
  bool projected = false;
  std::vector<std::string> warnings;
};

/// || (r_i r_j - r_j r_i) F || / ||F|| over interior points.
CommutatorResult commutator_check(const PolarizationBasis& basis, Alpha alpha, const VectorField3& field, Axis i,
                                  Axis j, TransversePolicy policy = TransversePolicy::reject,
                                  Discretization d = Discretization::rotated_frame);

enum class ProductMode { lp, biorthonormal };

/// Sum over points and components of conj(bra) . ket.
Complex inner_product(const VectorField3& bra, const VectorField3& ket, ProductMode mode = ProductMode::lp);

/// The same sum, with the labels checked: the ket must carry -alpha of the bra.
Complex biorthonormal_product(const VectorField3& bra, Alpha bra_alpha, const VectorField3& ket, Alpha ket_alpha);

/// Sum of conj(bra) . ket / k. Diagnostic only; it makes the alpha = 1/2 operator Hermitian.
Complex field_theory_product(const VectorField3& bra, const VectorField3& ket);

/// Multiplies by omega_k^(to - from).
VectorField3 similarity_map(const VectorField3& field, Alpha from, Alpha to);

struct AdjointReport {
  /// max over axes of |<F|r0 G> - <r0 F|G>| / (|F||r0 G| + |r0 F||G|)
  double hermitian_defect = 0.0;
  /// the same for <F|r(+1/2) G> against <r(-1/2) F|G>
  double pair_defect = 0.0;
  /// max over axes of |Im <F|r0 F>| / (|F||r0 F|)
  double expectation_imag = 0.0;
  std::vector<std::string> warnings;
};

AdjointReport adjoint_check(const PolarizationBasis& basis, const VectorField3& f, const VectorField3& g,
                            Discretization d = Discretization::rotated_frame);

struct RandomFieldOptions {
  int terms = 6;
  /// envelope exp(-k^2/k0^2) with k0 = envelope_fraction * k_max
  double envelope_fraction = 0.25;
  /// source positions uniform in a cube of half-width position_spread / k0
  double position_spread = 2.0;
};

/// Smooth seeded transverse test field: sum of random complex amplitudes times exp(-i k.r_j),
/// enveloped and projected. Depends only on the seed and k_max, not on the grid spacing.
VectorField3 random_transverse_field(const KGrid& grid, std::uint64_t seed, const RandomFieldOptions& opt = {});

struct ConvergenceOrder {
  double coarse = 0.0;
  double fine = 0.0;
  double order = 0.0;
  /// both values below the round-off floor
  bool exact = false;
  bool passes(double min_order) const { return exact || order >= min_order; }
};

ConvergenceOrder convergence_order(double coarse, double fine, double refinement = 2.0, double floor = 1e-12);

}  // namespace photonwm
