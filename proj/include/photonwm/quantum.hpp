#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "photonwm/kspace.hpp"
#include "photonwm/polarization.hpp"
#include "photonwm/posop.hpp"

namespace photonwm {

/// One photon mode: grid point index and helicity.
struct ModeKey {
  Index k = 0;
  int sigma = 1;
  auto operator<=>(const ModeKey&) const = default;
};

/// Unordered pair of modes, stored with first <= second.
struct PairKey {
  ModeKey first;
  ModeKey second;
  PairKey(ModeKey a, ModeKey b) : first(std::min(a, b)), second(std::max(a, b)) {}
  bool doubly_occupied() const { return first == second; }
  auto operator<=>(const PairKey&) const = default;
};

/// State truncated at two photons:
///   c0 |0> + Sum_q c1_q |1_q> + Sum_{q <= q'} c2_{qq'} |1_q 1_q'>   (|2_q> when q = q'),
/// every Fock vector normalized. The symmetric two-photon amplitude entering wave functions
/// is C_{qq'} = sqrt(1 + delta_{qq'}) c2_{qq'}.
class PhotonState {
 public:
  explicit PhotonState(KGrid grid);

  const KGrid& grid() const { return grid_; }

  Complex c0() const { return c0_; }
  void set_c0(Complex v) { c0_ = v; }

  /// Dense one-photon coefficients for one helicity.
  const Eigen::VectorXcd& c1(int sigma) const;
  Eigen::VectorXcd& c1(int sigma);
  Complex c1(ModeKey q) const { return c1(q.sigma)(q.k); }
  void set_c1(ModeKey q, Complex v);

  const std::map<PairKey, Complex>& c2() const { return c2_; }
  /// Symmetric lookup; zero for absent pairs.
  Complex c2(ModeKey a, ModeKey b) const;
  void set_c2(ModeKey a, ModeKey b, Complex v);

  /// |c0|^2 + Sum |c1|^2 + Sum' |c2|^2
  double norm_squared() const;
  double one_photon_weight() const;
  double two_photon_weight() const;
  /// Sum |c1|^2 + 2 Sum' |c2|^2
  double photon_number() const;
  void normalize();

 private:
  KGrid grid_;
  Complex c0_{0.0, 0.0};
  Eigen::VectorXcd plus_, minus_;
  std::map<PairKey, Complex> c2_;
};

/// Multiplies one-photon amplitudes by exp(-i w dt) and pair amplitudes by exp(-i (w + w') dt).
PhotonState evolve(const PhotonState& state, double dt);

PhotonState single_mode(const KGrid& grid, const std::array<int, 3>& k_index, int sigma);

/// Radial weighting of localized states.
struct Envelope {
  enum class Kind { none, gaussian, shell };
  Kind kind = Kind::none;
  /// gaussian: exp(-k^2 / (width k_max)^2); shell: exp(-(k - center k_max)^2 / (2 (width k_max)^2))
  double center = 0.5;
  double width = 0.5;

  static Envelope none() { return {}; }
  static Envelope gaussian(double width = 0.5) { return {Kind::gaussian, 0.0, width}; }
  static Envelope shell(double center = 0.5, double width = 0.125) { return {Kind::shell, center, width}; }
  double operator()(double k, double k_max) const;
};

/// c_{k,sigma} proportional to envelope(k) exp(-i k.r0), normalized: the one-photon state
/// localized at r0 (an r eigenstate when the envelope is flat).
PhotonState localized(const KGrid& grid, const Eigen::Vector3d& r0, int sigma, const Envelope& env = {});

/// Gaussian packet about mean wave vector k0: amplitude
///   exp(-(k_par - |k0|)^2 / (4 sigma_long^2) - k_perp^2 / (4 sigma_perp^2)) exp(-i k.r0)
/// with k_par along k0. forward_only drops modes with k.k0 <= 0.
struct PacketSpec {
  Eigen::Vector3d k0 = Eigen::Vector3d::UnitZ();
  double sigma_long = 1.0;
  double sigma_perp = 1.0;
  Eigen::Vector3d r0 = Eigen::Vector3d::Zero();
  int sigma = 1;
  bool forward_only = true;
};

PhotonState gaussian_packet(const KGrid& grid, const PacketSpec& spec);

struct Bandwidth {
  double omega_bar = 0.0;
  /// std(omega) / mean(omega) over |c1|^2 weights
  double relative = 0.0;
};

Bandwidth spectral_bandwidth(const PhotonState& state);

struct BandwidthPacket {
  PhotonState state;
  double sigma_long;
  Bandwidth bandwidth;
};

/// Bisects sigma_long so the realized relative bandwidth matches target.
BandwidthPacket packet_with_bandwidth(const KGrid& grid, PacketSpec spec, double target);

/// |1_a 1_b> (or |2_a> when a == b).
PhotonState two_mode_pair(const KGrid& grid, ModeKey a, ModeKey b);

/// Normalized a^dag(f) a^dag(g)|0> from the one-photon parts of f and g. Amplitudes below
/// cutoff times the largest one are dropped before pairing.
PhotonState product_state(const PhotonState& f, const PhotonState& g, double cutoff = 1e-10);

/// Complex 3-vector field on the real-space grid with its labels.
struct WaveField {
  VectorField3 field;
  Alpha alpha;
  int sigma;
  double t;
};

/// k-space coefficients c_{k,sigma} e_{k,sigma} omega^alpha exp(-i omega t).
VectorField3 one_photon_coefficients(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, int sigma,
                                     double t);

WaveField synthesize_one_photon(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, int sigma,
                                double t);

/// Spectral derivatives of real-space fields on a grid (exact for the grid's mode set).
VectorField3 spectral_curl(const VectorField3& rfield);
Eigen::VectorXcd spectral_divergence(const VectorField3& rfield);
VectorField3 spectral_derivative(const VectorField3& rfield, Axis axis);
/// d/dt of a positive-frequency field: -i omega_k per mode.
VectorField3 time_derivative(const VectorField3& rfield);

/// ||i dPsi/dt - sigma c curl Psi|| / ||i dPsi/dt||
double wave_equation_residual(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, int sigma, double t);

/// ||i dPsi(-1/2)/dt - Psi(+1/2)|| / ||Psi(+1/2)||
double field_potential_residual(const PhotonState& state, const PolarizationBasis& basis, int sigma, double t);

/// Positive-frequency vacuum fields of one helicity.
struct FieldSet {
  int sigma;
  double t;
  PhysicalConstants constants;
  VectorField3 A, D, B, E, H;
  /// Riemann-Silberstein combination D/sqrt(2 eps0) + i sigma B/sqrt(2 mu0)
  VectorField3 F;
};

FieldSet field_identifications(const WaveField& psi_minus, const WaveField& psi_plus, const PhysicalConstants& constants);

/// All relative: divergences against the matching curl norm, curl equations against ||curl E||, ||curl H||.
struct MaxwellResiduals {
  double div_D = 0.0;
  double div_B = 0.0;
  double faraday = 0.0;
  double ampere = 0.0;
  /// ||D/sqrt(eps0) - i sigma B/sqrt(mu0)|| / ||D/sqrt(eps0)||
  double helicity = 0.0;
  /// ||F - sqrt2 D/sqrt(eps0)|| / ||F||
  double riemann_silberstein = 0.0;
  double max() const;
};

MaxwellResiduals maxwell_residuals(const FieldSet& fields);

/// Sum of the fields of a state over both helicities.
FieldSet total_fields(const PhotonState& state, const PolarizationBasis& basis, double t);

}  // namespace photonwm
