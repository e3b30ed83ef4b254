#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "photonwm/constants.hpp"

namespace photonwm {

using Index = Eigen::Index;
using Complex = std::complex<double>;
/// One complex 3-vector per grid point, stored column-wise.
using FieldMatrix = Eigen::Matrix<Complex, 3, Eigen::Dynamic>;

enum class Axis : int { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::x, Axis::y, Axis::z};

inline int axis_index(Axis a) { return static_cast<int>(a); }

/// a x b without conjugation (Eigen's complex cross() conjugates its result).
inline Eigen::Vector3cd cross(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b) {
  return {a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0)};
}

/// Local spherical triad of a wave vector: k_hat = theta_hat x phi_hat.
struct SphericalFrame {
  Eigen::Vector3d k_hat;
  Eigen::Vector3d theta_hat;
  Eigen::Vector3d phi_hat;
  double theta = 0.0;
  double phi = 0.0;
  double k = 0.0;
};

/// Below this value of sin(theta) a wave vector counts as lying on the polar axis.
inline constexpr double kPoleTolerance = 1e-12;

/// Throws PoleError for k = 0 or sin(theta) < kPoleTolerance.
SphericalFrame spherical_frame(const Eigen::Vector3d& k);

/// Discrete Cartesian wave-vector grid of n^3 points, k = (m - floor(n/2) + 1/2) dk per
/// axis when offset (the default), with dk = 2 pi / L. The conjugate real-space grid has
/// spacing dr = L / n and points (p - floor(n/2)) dr, so the origin is the box centre.
///
/// All per-point geometry (frames, 1/k, cot theta, omega) is precomputed. The object is
/// immutable and copies share storage.
class KGrid {
 public:
  KGrid(int n, double box_length, PhysicalConstants constants = PhysicalConstants::natural(),
        bool offset = true);

  int n() const { return d_->n; }
  double box_length() const { return d_->box_length; }
  double volume() const { return d_->box_length * d_->box_length * d_->box_length; }
  double dk() const { return d_->dk; }
  double dr() const { return d_->box_length / d_->n; }
  double cell_volume() const { return dr() * dr() * dr(); }
  bool offset() const { return d_->offset; }
  Index size() const { return d_->size; }
  const PhysicalConstants& constants() const { return d_->constants; }

  /// Wave-vector component along one axis for integer coordinate m in [0, n).
  double k_coordinate(int m) const;
  /// Real-space coordinate along one axis for integer coordinate p in [0, n).
  double r_coordinate(int p) const;

  Index index(int i, int j, int l) const { return i + static_cast<Index>(d_->n) * (j + static_cast<Index>(d_->n) * l); }
  std::array<int, 3> coords(Index p) const;

  const Eigen::Matrix3Xd& k() const { return d_->k; }
  const Eigen::Matrix3Xd& k_hat() const { return d_->k_hat; }
  const Eigen::Matrix3Xd& theta_hat() const { return d_->theta_hat; }
  const Eigen::Matrix3Xd& phi_hat() const { return d_->phi_hat; }
  const Eigen::VectorXd& k_norm() const { return d_->k_norm; }
  const Eigen::VectorXd& inv_k() const { return d_->inv_k; }
  const Eigen::VectorXd& omega() const { return d_->omega; }
  const Eigen::VectorXd& theta() const { return d_->theta; }
  const Eigen::VectorXd& phi() const { return d_->phi; }
  const Eigen::VectorXd& sin_theta() const { return d_->sin_theta; }
  const Eigen::VectorXd& cot_theta() const { return d_->cot_theta; }

  SphericalFrame frame(Index p) const;

  /// Position of real-space point p (same linear indexing as k points).
  Eigen::Vector3d r_point(Index p) const;

  /// True when the point is at least `margin` layers away from every boundary face.
  bool interior(Index p, int margin = 1) const;

  /// Same n, L, offset and constants.
  bool same_as(const KGrid& other) const;

 private:
  struct Data {
    int n = 0;
    double box_length = 0.0;
    double dk = 0.0;
    bool offset = true;
    Index size = 0;
    PhysicalConstants constants = PhysicalConstants::natural();
    Eigen::Matrix3Xd k, k_hat, theta_hat, phi_hat;
    Eigen::VectorXd k_norm, inv_k, omega, theta, phi, sin_theta, cot_theta;
  };
  std::shared_ptr<const Data> d_;
};

/// build_grid with the pole-avoiding half-step offset always enabled.
KGrid build_grid(int n, double box_length, PhysicalConstants constants = PhysicalConstants::natural());

enum class Domain { kspace, rspace };

/// Complex 3-vector field on a KGrid (k-space) or on its conjugate real-space grid.
class VectorField3 {
 public:
  VectorField3(KGrid grid, Domain domain);
  VectorField3(KGrid grid, Domain domain, FieldMatrix values);

  const KGrid& grid() const { return grid_; }
  Domain domain() const { return domain_; }
  const FieldMatrix& values() const { return values_; }
  FieldMatrix& values() { return values_; }
  Index size() const { return values_.cols(); }

  auto operator()(Index p) const { return values_.col(p); }
  auto operator()(Index p) { return values_.col(p); }

 private:
  KGrid grid_;
  Domain domain_;
  FieldMatrix values_;
};

void require_same_grid(const KGrid& a, const KGrid& b, const char* what);

/// Central-difference derivative d/dk_axis, componentwise. Boundary faces use second-order
/// one-sided stencils (first order when n == 2). Exact on quadratics in the interior.
VectorField3 k_gradient(const VectorField3& field, Axis axis);

/// Sum_k F(k) e^{i k.r} / sqrt(V) on the conjugate real-space grid.
VectorField3 fourier_to_rspace(const VectorField3& field);

/// Exact inverse of fourier_to_rspace.
VectorField3 rspace_to_fourier(const VectorField3& field);

/// Direct O(N^2) evaluation of Sum_k F(k) e^{i k.r} / sqrt(V) at arbitrary points.
FieldMatrix synthesize_at(const VectorField3& field, const Eigen::Matrix3Xd& points);

/// Neumaier-compensated sums; the result does not depend on summation order to
/// within a few ulps of the total.
double compensated_sum(std::span<const double> values);
Complex compensated_sum(std::span<const Complex> values);

/// Sum over all points and components of conj(a) . b (compensated).
Complex dot(const FieldMatrix& a, const FieldMatrix& b);

/// sqrt(Sum |F|^2) restricted to interior points (margin layers excluded), or over all
/// points when margin == 0.
double field_norm(const VectorField3& field, int margin = 0);

}  // namespace photonwm
