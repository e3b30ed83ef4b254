#pragma once

#include <array>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "photonwm/kspace.hpp"

namespace photonwm {

template <typename Scalar>
using Matrix3c = Eigen::Matrix<std::complex<Scalar>, 3, 3>;
template <typename Scalar>
using Vector3c = Eigen::Matrix<std::complex<Scalar>, 3, 1>;

/// Spin-1 generator in the Cartesian representation, (S_i)_{jk} = -i eps_{ijk}.
template <typename Scalar = double>
Matrix3c<Scalar> spin_matrix(int i) {
  using C = std::complex<Scalar>;
  Matrix3c<Scalar> s = Matrix3c<Scalar>::Zero();
  const int j = (i + 1) % 3, k = (i + 2) % 3;
  s(j, k) = C(0, -1);
  s(k, j) = C(0, 1);
  return s;
}

template <typename Scalar = double>
struct SpinMatrices {
  Matrix3c<Scalar> x = spin_matrix<Scalar>(0);
  Matrix3c<Scalar> y = spin_matrix<Scalar>(1);
  Matrix3c<Scalar> z = spin_matrix<Scalar>(2);

  const Matrix3c<Scalar>& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  /// n . S
  Matrix3c<Scalar> along(const Eigen::Matrix<Scalar, 3, 1>& n) const {
    return n(0) * x + n(1) * y + n(2) * z;
  }
  /// Helicity matrix k_hat . S.
  Matrix3c<Scalar> helicity(const Eigen::Matrix<Scalar, 3, 1>& k_hat) const { return along(k_hat); }
};

/// exp(-i psi n.S) for a unit axis n, in closed form:
/// I - i sin(psi) (n.S) + (cos(psi) - 1) (n.S)^2.
template <typename Scalar = double>
Matrix3c<Scalar> spin1_exp(const Eigen::Matrix<Scalar, 3, 1>& n, Scalar psi) {
  using C = std::complex<Scalar>;
  const Matrix3c<Scalar> ns = SpinMatrices<Scalar>{}.along(n);
  return Matrix3c<Scalar>::Identity() + C(0, -std::sin(psi)) * ns + C(std::cos(psi) - Scalar(1)) * (ns * ns);
}

/// D = exp(-i S_z phi) exp(-i S_y theta): x -> theta_hat, y -> phi_hat, z -> k_hat.
template <typename Scalar = double>
Matrix3c<Scalar> rotation_D(Scalar theta, Scalar phi) {
  using V = Eigen::Matrix<Scalar, 3, 1>;
  return spin1_exp<Scalar>(V::UnitZ(), phi) * spin1_exp<Scalar>(V::UnitY(), theta);
}

/// D exp(-i S_z chi): the extra rotation about k_hat that defines e^(chi).
template <typename Scalar = double>
Matrix3c<Scalar> rotation_D(Scalar theta, Scalar phi, Scalar chi) {
  using V = Eigen::Matrix<Scalar, 3, 1>;
  return rotation_D<Scalar>(theta, phi) * spin1_exp<Scalar>(V::UnitZ(), chi);
}

/// Euler angle chi(theta, phi) of the extra rotation about k_hat.
class ChiMode {
 public:
  enum class Kind { zero, m_phi, custom };

  static ChiMode zero();
  /// chi = -m phi
  static ChiMode m_phi(int m);
  /// Arbitrary smooth chi(theta, phi); its gradient is taken numerically.
  static ChiMode custom(std::function<double(double, double)> chi, std::string label = "custom");

  Kind kind() const { return kind_; }
  int m() const { return m_; }
  const std::string& label() const { return label_; }

  double operator()(double theta, double phi) const;
  /// Gradient of chi with respect to k at a grid frame.
  Eigen::Vector3d gradient(const SphericalFrame& f) const;

 private:
  Kind kind_ = Kind::zero;
  int m_ = 0;
  std::string label_ = "zero";
  std::function<double(double, double)> fn_;
};

/// Helicity unit vector e^(chi)_{k,sigma} = exp(-i sigma chi) (theta_hat + i sigma phi_hat)/sqrt2.
Eigen::Vector3cd helicity_vector(const SphericalFrame& f, int sigma, double chi = 0.0);

/// sigma = 0: the longitudinal vector k_hat. Never part of a PolarizationBasis.
Eigen::Vector3cd longitudinal_vector(const SphericalFrame& f);

/// Transverse helicity basis over a grid, one column per grid point for each sigma.
class PolarizationBasis {
 public:
  PolarizationBasis(KGrid grid, ChiMode chi, FieldMatrix plus, FieldMatrix minus, Eigen::VectorXd chi_values);

  const KGrid& grid() const { return grid_; }
  const ChiMode& chi() const { return chi_; }
  const Eigen::VectorXd& chi_values() const { return chi_values_; }
  const FieldMatrix& vectors(int sigma) const;
  Eigen::Vector3cd vector(Index p, int sigma) const { return vectors(sigma).col(p); }

  /// D exp(-i S_z chi) at point p; maps (x + i sigma y)/sqrt2 onto this basis' vectors.
  Eigen::Matrix3cd rotation(Index p) const;

 private:
  KGrid grid_;
  ChiMode chi_;
  FieldMatrix plus_, minus_;
  Eigen::VectorXd chi_values_;
};

void require_sigma(int sigma);

PolarizationBasis helicity_vectors_e0(const KGrid& grid);

/// Multiplies each e^(0) vector by exp(-i sigma chi). The input must be the chi = 0 basis.
PolarizationBasis apply_chi(const PolarizationBasis& basis, const ChiMode& chi);
PolarizationBasis apply_chi(const PolarizationBasis& basis, int m);

/// Explicit three-term expansion of e^(-m phi) in the circular Cartesian vectors.
Eigen::Vector3cd em_expansion(double theta, double phi, int m, int sigma);

struct AMEntry {
  int s_z = 0;
  int l_z = 0;
  double amplitude = 0.0;
};

/// Spin/orbital content of e^(-m phi): entries ordered s_z = -1, 0, +1.
struct AMDecomposition {
  std::array<AMEntry, 3> entries;
  double weight_sum() const;
};

AMDecomposition am_decomposition(double theta, int m, int sigma);

/// Worst-case deviations of the basis invariants over all points and both helicities.
struct BasisReport {
  double transversality = 0.0;
  double helicity = 0.0;
  double normalization = 0.0;
  double curl = 0.0;
  double orthogonality = 0.0;
  double max() const;
};

BasisReport check_basis(const PolarizationBasis& basis);

}  // namespace photonwm
