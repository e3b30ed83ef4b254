#pragma once

#include <string>
#include <vector>

#include "photonwm/quantum.hpp"
#include "photonwm/two_photon.hpp"

namespace photonwm {

struct DensityReport {
  Alpha alpha = Alpha::zero();
  /// n(r) = Sum_sigma conj(Psi^a) . Psi^-a
  Eigen::VectorXcd n;
  /// j(r) = -i c Sum_sigma sigma conj(Psi^a) x Psi^-a
  FieldMatrix j;
  Complex total_n;
  Eigen::Vector3cd total_j;
  double max_imag_n = 0.0;
  double min_real_n = 0.0;

  Eigen::VectorXd real_n() const { return n.real(); }
};

/// psi_a and psi_ma hold one wave field per helicity, matched by sigma.
DensityReport density(const std::vector<WaveField>& psi_a, const std::vector<WaveField>& psi_ma);

/// Convenience: synthesizes both helicities of the state at time t.
DensityReport density(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, double t);

/// || a - b ||_1 / || b ||_1 over grid points.
double relative_l1(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct ContinuityReport {
  int oversampling = 2;
  /// dn/dt + div j on the refined grid
  Eigen::VectorXcd residual;
  /// ||residual|| / ||dn/dt||
  double relative = 0.0;
  double dn_dt_norm = 0.0;
  double div_j_norm = 0.0;
  /// central difference (n(t+dt) - n(t-dt))/(2dt) against the spectral dn/dt (relative); 0 if dt_probe <= 0
  double probe_defect = 0.0;
};

/// dn/dt from the mode-wise time derivative, div j from the exact lattice divergence of the
/// current sampled on a 2x refined grid (the product of two band-limited fields is band-limited
/// there, so both terms are exact up to round-off).
ContinuityReport continuity_residual(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, double t,
                                     double dt_probe = 0.0);

struct MarginalReport {
  Eigen::Matrix3Xd points;
  double cell_volume = 0.0;
  /// per helicity of the observed photon: index 0 sigma = +1, 1 sigma = -1
  std::array<Eigen::VectorXcd, 2> n_sigma;
  Eigen::VectorXcd n;
  Complex total;
};

/// psi_a and psi_ma hold the (sigma, sigma2) two-photon fields for alpha and -alpha.
MarginalReport two_photon_marginal(const std::vector<TwoPhotonWaveField>& psi_a,
                                   const std::vector<TwoPhotonWaveField>& psi_ma);

MarginalReport two_photon_marginal(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, double t,
                                   int coarsening = 4);

struct VectorFunctional {
  Eigen::Vector3d value = Eigen::Vector3d::Zero();
  Eigen::Vector3d imag_defect = Eigen::Vector3d::Zero();
};

/// P = 2 Int conj(D) . grad A (spectral gradient): hbar k per photon.
VectorFunctional momentum_functional(const VectorField3& A, const VectorField3& D);

struct AngularMomentum {
  VectorFunctional total;
  Eigen::Vector3d orbital = Eigen::Vector3d::Zero();
  Eigen::Vector3d spin = Eigen::Vector3d::Zero();
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
};

/// J = 2 Int conj(D_i) ((r - origin) x grad) A_i + 2 Int conj(D) x A.
AngularMomentum angular_momentum_functional(const VectorField3& A, const VectorField3& D,
                                            const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

/// Real-field route eps0 < Int E_i (r x grad) A_i + E x A > averaged over four equally spaced
/// times in one period. The state must be monochromatic (all populated modes at one omega).
Eigen::Vector3d ct_angular_momentum(const PhotonState& state, const PolarizationBasis& basis, double t0 = 0.0,
                                    const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

/// Hbar Sum_sigma Sum_k k |c_{k,sigma}|^2
Eigen::Vector3d momentum_mode_sum(const PhotonState& state);

struct Detector {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  /// slab thickness along z and transverse area (square); zero selects the nearest cell only
  double dz = 0.0;
  double area = 0.0;
};

struct GlauberReport {
  double omega_bar = 0.0;
  double bandwidth = 0.0;
  /// Int_detector n_G / Int_detector Re n^(1/2), with n_G = 2 eps0 |E|^2 / (hbar omega_bar)
  double ratio = 0.0;
  double deviation = 0.0;
  double n_glauber = 0.0;
  double n_half = 0.0;
  Index cells = 0;
  std::vector<std::string> warnings;
};

GlauberReport glauber_comparison(const PhotonState& state, const PolarizationBasis& basis, const Detector& det,
                                 double t = 0.0);

struct SweepRow {
  double target = 0.0;
  double bandwidth = 0.0;
  double sigma_long = 0.0;
  GlauberReport report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// |ratio - 1| strictly increasing along the ladder (sorted by bandwidth)
  bool monotone = false;
};

SweepResult glauber_sweep(const KGrid& grid, const PolarizationBasis& basis, const PacketSpec& packet,
                          const std::vector<double>& ladder, const Detector& det);

}  // namespace photonwm
