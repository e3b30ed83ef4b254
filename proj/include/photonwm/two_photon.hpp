#pragma once

#include <array>
#include <vector>

#include "photonwm/quantum.hpp"

namespace photonwm {

/// Symmetric pair amplitudes restricted to one helicity per slot:
/// C(a, b) = sqrt(1 + delta) c2 for rows[a] (helicity sigma) and cols[b] (helicity sigma2).
struct PairAmplitudes {
  int sigma = 1;
  int sigma2 = 1;
  std::vector<Index> rows;
  std::vector<Index> cols;
  Eigen::MatrixXcd C;
};

PairAmplitudes pair_amplitudes(const PhotonState& state, int sigma, int sigma2);

/// Psi_{sigma sigma2; j j2}(r, r2) on the product of a coarsened real-space grid with itself.
struct TwoPhotonWaveField {
  Alpha alpha;
  int sigma;
  int sigma2;
  double t;
  int coarsening;
  /// coarse real-space points (every coarsening-th base point per axis)
  Eigen::Matrix3Xd points;
  /// quadrature weight per coarse point
  double cell_volume;
  /// values[3 j + j2](a, b) = Psi_{j j2}(points[a], points[b])
  std::array<Eigen::MatrixXcd, 9> values;

  const Eigen::MatrixXcd& component(int j, int j2) const { return values[static_cast<std::size_t>(3 * j + j2)]; }
};

/// Default guard on stored complex entries (9 P^2).
inline constexpr Index kDefaultTwoPhotonEntries = Index(1) << 26;

/// Sum_{q,q'} C_{qq'} u_q(r) u_q'(r2) with u_q = omega^alpha e_q exp(i k.r - i omega t)/sqrt(V).
/// Throws CapacityError when 9 P^2 exceeds max_entries.
TwoPhotonWaveField synthesize_two_photon(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha,
                                         int sigma, int sigma2, double t, int coarsening = 4,
                                         Index max_entries = kDefaultTwoPhotonEntries);

/// max |Psi_{s s2; j j2}(a, b) - Psi_{s2 s; j2 j}(b, a)| relative to max |Psi|; pass the same
/// field twice when sigma == sigma2.
double exchange_asymmetry(const TwoPhotonWaveField& psi, const TwoPhotonWaveField& swapped);

}  // namespace photonwm
