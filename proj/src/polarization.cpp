#include "photonwm/polarization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "photonwm/errors.hpp"

namespace photonwm {

namespace {
const Complex I(0.0, 1.0);
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}  // namespace

ChiMode ChiMode::zero() { return ChiMode{}; }

ChiMode ChiMode::m_phi(int m) {
  ChiMode c;
  c.kind_ = Kind::m_phi;
  c.m_ = m;
  c.label_ = "m_phi(" + std::to_string(m) + ")";
  return c;
}

ChiMode ChiMode::custom(std::function<double(double, double)> chi, std::string label) {
  if (!chi) throw std::invalid_argument("custom chi needs a callable");
  ChiMode c;
  c.kind_ = Kind::custom;
  c.fn_ = std::move(chi);
  c.label_ = std::move(label);
  return c;
}

double ChiMode::operator()(double theta, double phi) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::m_phi:
      return -m_ * phi;
    case Kind::custom:
      return fn_(theta, phi);
  }
  return 0.0;
}

Eigen::Vector3d ChiMode::gradient(const SphericalFrame& f) const {
  const double st = std::sin(f.theta);
  if (kind_ == Kind::zero) return Eigen::Vector3d::Zero();
  if (kind_ == Kind::m_phi) return -m_ * f.phi_hat / (f.k * st);
  // fourth-order central differences in the angles
  const double h = 1e-4;
  auto d = [&](auto&& g) { return (8.0 * (g(h) - g(-h)) - (g(2 * h) - g(-2 * h))) / (12.0 * h); };
  const double dtheta = d([&](double e) { return fn_(f.theta + e, f.phi); });
  const double dphi = d([&](double e) { return fn_(f.theta, f.phi + e); });
  return f.theta_hat * dtheta / f.k + f.phi_hat * dphi / (f.k * st);
}

Eigen::Vector3cd helicity_vector(const SphericalFrame& f, int sigma, double chi) {
  require_sigma(sigma);
  const Eigen::Vector3cd e0 = (f.theta_hat.cast<Complex>() + I * double(sigma) * f.phi_hat.cast<Complex>()) * kInvSqrt2;
  if (chi == 0.0) return e0;
  return std::polar(1.0, -sigma * chi) * e0;
}

Eigen::Vector3cd longitudinal_vector(const SphericalFrame& f) { return f.k_hat.cast<Complex>(); }

void require_sigma(int sigma) {
  if (sigma != 1 && sigma != -1) throw LabelMismatch("helicity must be +1 or -1, got " + std::to_string(sigma));
}

PolarizationBasis::PolarizationBasis(KGrid grid, ChiMode chi, FieldMatrix plus, FieldMatrix minus,
                                     Eigen::VectorXd chi_values)
    : grid_(std::move(grid)),
      chi_(std::move(chi)),
      plus_(std::move(plus)),
      minus_(std::move(minus)),
      chi_values_(std::move(chi_values)) {
  if (plus_.cols() != grid_.size() || minus_.cols() != grid_.size() || chi_values_.size() != grid_.size()) {
    throw std::invalid_argument("polarization basis size does not match grid");
  }
}

const FieldMatrix& PolarizationBasis::vectors(int sigma) const {
  require_sigma(sigma);
  return sigma > 0 ? plus_ : minus_;
}

Eigen::Matrix3cd PolarizationBasis::rotation(Index p) const {
  return rotation_D<double>(grid_.theta()(p), grid_.phi()(p), chi_values_(p));
}

PolarizationBasis helicity_vectors_e0(const KGrid& grid) {
  const Index N = grid.size();
  FieldMatrix plus(3, N), minus(3, N);
#pragma omp parallel for
  for (Index p = 0; p < N; ++p) {
    const SphericalFrame f = grid.frame(p);
    plus.col(p) = helicity_vector(f, 1);
    minus.col(p) = helicity_vector(f, -1);
  }
  return {grid, ChiMode::zero(), std::move(plus), std::move(minus), Eigen::VectorXd::Zero(N)};
}

PolarizationBasis apply_chi(const PolarizationBasis& basis, const ChiMode& chi) {
  if (basis.chi().kind() != ChiMode::Kind::zero) {
    throw LabelMismatch("apply_chi expects the chi = 0 basis");
  }
  const KGrid& g = basis.grid();
  const Index N = g.size();
  FieldMatrix plus = basis.vectors(1), minus = basis.vectors(-1);
  Eigen::VectorXd values(N);
  for (Index p = 0; p < N; ++p) {
    const double c = chi(g.theta()(p), g.phi()(p));
    values(p) = c;
    plus.col(p) *= std::polar(1.0, -c);
    minus.col(p) *= std::polar(1.0, c);
  }
  return {g, chi, std::move(plus), std::move(minus), std::move(values)};
}

PolarizationBasis apply_chi(const PolarizationBasis& basis, int m) { return apply_chi(basis, ChiMode::m_phi(m)); }

Eigen::Vector3cd em_expansion(double theta, double phi, int m, int sigma) {
  require_sigma(sigma);
  const double ct = std::cos(theta), st = std::sin(theta);
  const Eigen::Vector3cd minus_c(1.0, -I, 0.0);  // x - i y
  const Eigen::Vector3cd plus_c(1.0, I, 0.0);    // x + i y
  const Eigen::Vector3cd z(0.0, 0.0, 1.0);
  const double r8 = 2.0 * std::numbers::sqrt2;
  return minus_c * ((ct - sigma) / r8) * std::polar(1.0, (m * sigma + 1) * phi) -
         z * (st * kInvSqrt2) * std::polar(1.0, m * sigma * phi) +
         plus_c * ((ct + sigma) / r8) * std::polar(1.0, (m * sigma - 1) * phi);
}

AMDecomposition am_decomposition(double theta, int m, int sigma) {
  require_sigma(sigma);
  const double ct = std::cos(theta), st = std::sin(theta);
  AMDecomposition d;
  d.entries[0] = {-1, m * sigma + 1, (ct - sigma) / 2.0};
  d.entries[1] = {0, m * sigma, st * kInvSqrt2};
  d.entries[2] = {1, m * sigma - 1, (ct + sigma) / 2.0};
  return d;
}

double AMDecomposition::weight_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.amplitude * e.amplitude;
  return s;
}

double BasisReport::max() const {
  return std::max({transversality, helicity, normalization, curl, orthogonality});
}

BasisReport check_basis(const PolarizationBasis& basis) {
  const KGrid& g = basis.grid();
  const SpinMatrices<double> S;
  BasisReport r;
  for (Index p = 0; p < g.size(); ++p) {
    const Eigen::Vector3d kh = g.k_hat().col(p);
    const Eigen::Vector3cd khc = kh.cast<Complex>();
    const Eigen::Matrix3cd hel = S.helicity(kh);
    for (int sigma : {1, -1}) {
      const Eigen::Vector3cd e = basis.vector(p, sigma);
      r.transversality = std::max(r.transversality, std::abs(khc.dot(e)));
      r.helicity = std::max(r.helicity, (hel * e - double(sigma) * e).norm());
      r.normalization = std::max(r.normalization, std::abs(e.squaredNorm() - 1.0));
      r.curl = std::max(r.curl, (I * cross(khc, e) - double(sigma) * e).norm());
    }
    r.orthogonality = std::max(r.orthogonality, std::abs(basis.vector(p, 1).dot(basis.vector(p, -1))));
  }
  return r;
}

}  // namespace photonwm
