#include "photonwm/beams.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "photonwm/polarization.hpp"

namespace photonwm {

namespace {

const Complex I(0.0, 1.0);

double trapezoid_2pi_r(const Eigen::VectorXd& r, const Eigen::VectorXd& f, Eigen::VectorXd* running = nullptr) {
  double acc = 0.0, comp = 0.0;
  if (running) {
    running->resize(r.size());
    (*running)(0) = 0.0;
  }
  for (Index i = 1; i < r.size(); ++i) {
    const double term = 0.5 * (r(i) - r(i - 1)) * (r(i - 1) * f(i - 1) + r(i) * f(i)) * 2.0 * std::numbers::pi;
    const double t = acc + term;
    comp += std::abs(acc) >= std::abs(term) ? (acc - t) + term : (term - t) + acc;
    acc = t;
    if (running) (*running)(i) = acc + comp;
  }
  return acc + comp;
}

// d f / d r on a uniform grid: central differences, second-order one-sided at the ends
Eigen::VectorXd radial_derivative(const Eigen::VectorXd& r, const Eigen::VectorXd& f) {
  const Index n = r.size();
  if (n < 3) throw std::invalid_argument("radial grid needs at least 3 points");
  const double h = r(1) - r(0);
  Eigen::VectorXd d(n);
  for (Index i = 1; i < n - 1; ++i) d(i) = (f(i + 1) - f(i - 1)) / (2.0 * h);
  d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
  return d;
}

}  // namespace

double bessel_j(int n, double x) {
  if (n < 0) return (n % 2 ? -1.0 : 1.0) * bessel_j(-n, x);
  if (x < 0.0) return (n % 2 ? -1.0 : 1.0) * bessel_j(n, -x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;

  if (x <= 1.0) {
    const double h = 0.5 * x;
    double lead = 1.0;
    for (int k = 1; k <= n; ++k) lead *= h / k;
    double term = lead, sum = lead;
    for (int k = 0; k < 60; ++k) {
      term *= -h * h / ((k + 1.0) * (n + k + 1.0));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }

  const double top = std::max(static_cast<double>(n), x);
  const int m = 2 * ((static_cast<int>(top) + 20 + static_cast<int>(std::sqrt(60.0 * top))) / 2);
  double jp1 = 0.0, j = 1.0, result = 0.0, norm = 0.0;
  for (int k = m; k >= 1; --k) {
    const double jm1 = (2.0 * k / x) * j - jp1;
    jp1 = j;
    j = jm1;  // J_{k-1}
    if (k - 1 == n) result = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm += j;
  return result / norm;
}

double RadialEnvelope::operator()(double r) const {
  if (aperture > 0.0 && r > aperture) return 0.0;
  const double w2 = waist * waist;
  switch (kind) {
    case Kind::gaussian:
      return amplitude * std::exp(-r * r / w2);
    case Kind::flat_top: {
      if (r <= flat_radius) return amplitude;
      const double d = r - flat_radius;
      return amplitude * std::exp(-d * d / w2);
    }
    case Kind::ring:
      return amplitude * (r * r / w2) * std::exp(-r * r / w2);
  }
  return 0.0;
}

double RadialEnvelope::extent() const { return kind == Kind::flat_top ? flat_radius : 0.0; }

std::string to_string(RadialEnvelope::Kind k) {
  switch (k) {
    case RadialEnvelope::Kind::gaussian:
      return "gaussian";
    case RadialEnvelope::Kind::flat_top:
      return "flat_top";
    case RadialEnvelope::Kind::ring:
      return "ring";
  }
  return "gaussian";
}

RadialEnvelope::Kind envelope_kind_from_string(const std::string& s) {
  if (s == "gaussian") return RadialEnvelope::Kind::gaussian;
  if (s == "flat_top") return RadialEnvelope::Kind::flat_top;
  if (s == "ring") return RadialEnvelope::Kind::ring;
  throw std::invalid_argument("unknown envelope '" + s + "' (gaussian, flat_top, ring)");
}

double BeamSpec::k_perp() const {
  const double k0 = omega / constants.c();
  if (!(k_z > 0.0) || k_z > k0) {
    std::ostringstream msg;
    msg << "axial wave number k_z = " << k_z << " must lie in (0, omega/c = " << k0 << "]";
    throw std::invalid_argument(msg.str());
  }
  return std::sqrt(std::max(0.0, k0 * k0 - k_z * k_z));
}

Eigen::VectorXcd bessel_mode(const BeamSpec& spec, const Eigen::Matrix3Xd& cyl, double t) {
  if (spec.kind != BeamSpec::Kind::bessel) throw std::invalid_argument("bessel_mode needs a bessel beam");
  const double kp = spec.k_perp();
  Eigen::VectorXcd out(cyl.cols());
  for (Index i = 0; i < cyl.cols(); ++i) {
    const double phase = -spec.omega * t + spec.l_z * cyl(1, i) + spec.k_z * cyl(2, i);
    out(i) = std::polar(bessel_j(spec.l_z, kp * cyl(0, i)), phase);
  }
  return out;
}

double bessel_helmholtz_residual(const BeamSpec& spec, const Eigen::Matrix3Xd& cart, double h) {
  const double kp = spec.k_perp();
  const double k2 = std::pow(spec.omega / spec.constants.c(), 2);
  auto mode = [&](const Eigen::Vector3d& x) {
    const double rho = std::hypot(x(0), x(1));
    const double phi = std::atan2(x(1), x(0));
    return std::polar(bessel_j(spec.l_z, kp * rho), spec.l_z * phi + spec.k_z * x(2));
  };
  double worst = 0.0, scale = 0.0;
  for (Index i = 0; i < cart.cols(); ++i) {
    const Eigen::Vector3d x = cart.col(i);
    const Complex f0 = mode(x);
    Complex lap = 0.0;
    for (int a = 0; a < 3; ++a) {
      Eigen::Vector3d e = Eigen::Vector3d::Zero();
      e(a) = h;
      lap += (-mode(x + 2 * e) + 16.0 * mode(x + e) - 30.0 * f0 + 16.0 * mode(x - e) - mode(x - 2 * e)) / (12.0 * h * h);
    }
    worst = std::max(worst, std::abs(lap + k2 * f0));
    scale = std::max(scale, std::abs(f0));
  }
  return worst / (k2 * scale);
}

Eigen::VectorXd radial_grid(const BeamSpec& spec, int points) {
  if (points < 3) throw std::invalid_argument("radial grid needs at least 3 points");
  const double R = spec.envelope.extent() + 8.0 * spec.envelope.waist;
  return Eigen::VectorXd::LinSpaced(points, 0.0, R);
}

FieldMatrix paraxial_field(const BeamSpec& spec, const Eigen::Matrix3Xd& cyl, double t) {
  if (spec.kind != BeamSpec::Kind::paraxial) throw std::invalid_argument("paraxial_field needs a paraxial beam");
  require_sigma(spec.sigma);
  const Eigen::Vector3cd pol(0.5, 0.5 * I * double(spec.sigma), 0.0);
  FieldMatrix out(3, cyl.cols());
  for (Index i = 0; i < cyl.cols(); ++i) {
    const double phase = spec.l_z * cyl(1, i) + spec.k_z * (cyl(2, i) - spec.constants.c() * t);
    out.col(i) = pol * std::polar(spec.envelope(cyl(0, i)), phase);
  }
  return out;
}

Eigen::VectorXd paraxial_density(const BeamSpec& spec, const FieldMatrix& A) {
  const PhysicalConstants& k = spec.constants;
  const double s = 2.0 * k.eps0() / k.hbar();
  Eigen::VectorXd n(A.cols());
  for (Index i = 0; i < A.cols(); ++i) {
    const Eigen::Vector3cd pm = std::sqrt(s) * A.col(i);
    const Eigen::Vector3cd pp = spec.omega * pm;
    n(i) = pp.dot(pm).real();
  }
  return n;
}

AMProfile am_density(const BeamSpec& spec, const Eigen::VectorXd& r) {
  if (spec.kind != BeamSpec::Kind::paraxial) throw std::invalid_argument("am_density needs a paraxial beam");
  require_sigma(spec.sigma);
  const PhysicalConstants& k = spec.constants;
  AMProfile p;
  p.r = r;
  p.u2.resize(r.size());
  for (Index i = 0; i < r.size(); ++i) p.u2(i) = std::pow(spec.envelope(r(i)), 2);
  const double peak = p.u2.maxCoeff();
  if (!(peak > 0.0)) throw std::invalid_argument("beam envelope vanishes on the radial grid");
  if (std::sqrt(p.u2(r.size() - 1) / peak) > 1e-8) {
    throw std::invalid_argument("beam envelope has not decayed to 1e-8 of its maximum at the radial grid edge");
  }
  const Eigen::VectorXd du2 = radial_derivative(r, p.u2);
  const double eo = k.eps0() * spec.omega;
  p.n = (eo / k.hbar()) * p.u2;
  p.orbital = (eo * spec.l_z) * p.u2;
  p.spin = (-0.5 * eo * spec.sigma) * r.cwiseProduct(du2);
  p.jz = p.orbital + p.spin;
  p.total_n = trapezoid_2pi_r(r, p.n, &p.cumulative_n);
  p.total_orbital = trapezoid_2pi_r(r, p.orbital);
  p.total_spin = trapezoid_2pi_r(r, p.spin);
  p.total_jz = trapezoid_2pi_r(r, p.jz, &p.cumulative_jz);
  p.per_photon = p.total_jz / (k.hbar() * p.total_n);
  return p;
}

ApertureReport aperture_demo(const BeamSpec& spec, double aperture_radius, int points) {
  const Eigen::VectorXd r = radial_grid(spec, points);
  if (!(aperture_radius > 0.0) || aperture_radius > r(r.size() - 1)) {
    throw std::invalid_argument("aperture radius must lie inside the radial grid");
  }
  ApertureReport rep;
  rep.aperture_radius = aperture_radius;
  rep.before = am_density(spec, r);
  BeamSpec cut = spec;
  cut.envelope.aperture = aperture_radius;
  rep.after = am_density(cut, r);

  const double h = r(1) - r(0);
  double best = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    const double d = std::abs(r(i) - aperture_radius);
    if (d <= 2.0 * h && std::abs(rep.after.jz(i)) > std::abs(best)) {
      best = rep.after.jz(i);
      rep.edge_radius = r(i);
    }
  }
  rep.edge_spike = best;
  Eigen::VectorXd masked = rep.after.jz;
  for (Index i = 0; i < r.size(); ++i) {
    if (std::abs(r(i) - aperture_radius) > 4.0 * h) masked(i) = 0.0;
  }
  rep.edge_fraction = rep.after.total_jz != 0.0 ? trapezoid_2pi_r(r, masked) / rep.after.total_jz : 0.0;
  rep.change_in_total = rep.after.total_jz - rep.before.total_jz;
  return rep;
}

}  // namespace photonwm
