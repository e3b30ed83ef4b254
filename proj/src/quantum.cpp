#include "photonwm/quantum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "photonwm/errors.hpp"

namespace photonwm {

namespace {

const Complex I(0.0, 1.0);

double l2(const FieldMatrix& v) { return std::sqrt(std::abs(dot(v, v))); }

void require_state_grid(const PhotonState& s, const PolarizationBasis& b, const char* what) {
  require_same_grid(s.grid(), b.grid(), what);
}

}  // namespace

PhotonState::PhotonState(KGrid grid)
    : grid_(std::move(grid)),
      plus_(Eigen::VectorXcd::Zero(grid_.size())),
      minus_(Eigen::VectorXcd::Zero(grid_.size())) {}

const Eigen::VectorXcd& PhotonState::c1(int sigma) const {
  require_sigma(sigma);
  return sigma > 0 ? plus_ : minus_;
}

Eigen::VectorXcd& PhotonState::c1(int sigma) {
  require_sigma(sigma);
  return sigma > 0 ? plus_ : minus_;
}

void PhotonState::set_c1(ModeKey q, Complex v) {
  if (q.k < 0 || q.k >= grid_.size()) throw std::out_of_range("mode index outside grid");
  c1(q.sigma)(q.k) = v;
}

Complex PhotonState::c2(ModeKey a, ModeKey b) const {
  const auto it = c2_.find(PairKey(a, b));
  return it == c2_.end() ? Complex(0.0, 0.0) : it->second;
}

void PhotonState::set_c2(ModeKey a, ModeKey b, Complex v) {
  for (const ModeKey& q : {a, b}) {
    require_sigma(q.sigma);
    if (q.k < 0 || q.k >= grid_.size()) throw std::out_of_range("mode index outside grid");
  }
  if (v == Complex(0.0, 0.0)) {
    c2_.erase(PairKey(a, b));
  } else {
    c2_[PairKey(a, b)] = v;
  }
}

double PhotonState::one_photon_weight() const { return plus_.squaredNorm() + minus_.squaredNorm(); }

double PhotonState::two_photon_weight() const {
  std::vector<double> w;
  w.reserve(c2_.size());
  for (const auto& [key, v] : c2_) w.push_back(std::norm(v));
  return compensated_sum(w);
}

double PhotonState::norm_squared() const { return std::norm(c0_) + one_photon_weight() + two_photon_weight(); }

double PhotonState::photon_number() const { return one_photon_weight() + 2.0 * two_photon_weight(); }

void PhotonState::normalize() {
  const double n = std::sqrt(norm_squared());
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize the zero state");
  c0_ /= n;
  plus_ /= n;
  minus_ /= n;
  for (auto& [key, v] : c2_) v /= n;
}

PhotonState evolve(const PhotonState& state, double dt) {
  PhotonState out = state;
  const Eigen::VectorXd& w = state.grid().omega();
  for (int sigma : {1, -1}) {
    Eigen::VectorXcd& c = out.c1(sigma);
    for (Index p = 0; p < c.size(); ++p) c(p) *= std::polar(1.0, -w(p) * dt);
  }
  for (const auto& [key, v] : state.c2()) {
    out.set_c2(key.first, key.second, v * std::polar(1.0, -(w(key.first.k) + w(key.second.k)) * dt));
  }
  return out;
}

PhotonState single_mode(const KGrid& grid, const std::array<int, 3>& k_index, int sigma) {
  for (int c : k_index) {
    if (c < 0 || c >= grid.n()) throw std::out_of_range("k_index outside grid");
  }
  PhotonState s(grid);
  s.set_c1({grid.index(k_index[0], k_index[1], k_index[2]), sigma}, 1.0);
  return s;
}

double Envelope::operator()(double k, double k_max) const {
  switch (kind) {
    case Kind::none:
      return 1.0;
    case Kind::gaussian: {
      const double w = width * k_max;
      return std::exp(-k * k / (w * w));
    }
    case Kind::shell: {
      const double w = width * k_max, d = k - center * k_max;
      return std::exp(-d * d / (2.0 * w * w));
    }
  }
  return 1.0;
}

PhotonState localized(const KGrid& grid, const Eigen::Vector3d& r0, int sigma, const Envelope& env) {
  require_sigma(sigma);
  PhotonState s(grid);
  const double k_max = 0.5 * grid.n() * grid.dk();
  Eigen::VectorXcd& c = s.c1(sigma);
  for (Index p = 0; p < grid.size(); ++p) {
    c(p) = std::polar(env(grid.k_norm()(p), k_max), -grid.k().col(p).dot(r0));
  }
  s.normalize();
  return s;
}

PhotonState gaussian_packet(const KGrid& grid, const PacketSpec& spec) {
  require_sigma(spec.sigma);
  if (!(spec.sigma_long > 0.0) || !(spec.sigma_perp > 0.0)) throw std::invalid_argument("packet widths must be > 0");
  const double k0 = spec.k0.norm();
  if (!(k0 > 0.0)) throw std::invalid_argument("packet mean wave vector must be nonzero");
  const Eigen::Vector3d dir = spec.k0 / k0;
  PhotonState s(grid);
  Eigen::VectorXcd& c = s.c1(spec.sigma);
  for (Index p = 0; p < grid.size(); ++p) {
    const Eigen::Vector3d k = grid.k().col(p);
    const double par = k.dot(dir);
    if (spec.forward_only && par <= 0.0) continue;
    const double perp2 = (k - par * dir).squaredNorm();
    const double dl = par - k0;
    const double amp =
        std::exp(-dl * dl / (4.0 * spec.sigma_long * spec.sigma_long) - perp2 / (4.0 * spec.sigma_perp * spec.sigma_perp));
    c(p) = std::polar(amp, -k.dot(spec.r0));
  }
  s.normalize();
  return s;
}

Bandwidth spectral_bandwidth(const PhotonState& state) {
  const Eigen::VectorXd& w = state.grid().omega();
  std::vector<double> wt, wm;
  for (int sigma : {1, -1}) {
    const Eigen::VectorXcd& c = state.c1(sigma);
    for (Index p = 0; p < c.size(); ++p) {
      const double a = std::norm(c(p));
      if (a == 0.0) continue;
      wt.push_back(a);
      wm.push_back(a * w(p));
    }
  }
  const double total = compensated_sum(wt);
  if (!(total > 0.0)) throw std::invalid_argument("bandwidth of a state without one-photon content");
  Bandwidth b;
  b.omega_bar = compensated_sum(wm) / total;
  std::vector<double> var;
  var.reserve(wt.size());
  for (int sigma : {1, -1}) {
    const Eigen::VectorXcd& c = state.c1(sigma);
    for (Index p = 0; p < c.size(); ++p) {
      const double a = std::norm(c(p));
      if (a == 0.0) continue;
      const double d = w(p) - b.omega_bar;
      var.push_back(a * d * d);
    }
  }
  b.relative = std::sqrt(compensated_sum(var) / total) / b.omega_bar;
  return b;
}

BandwidthPacket packet_with_bandwidth(const KGrid& grid, PacketSpec spec, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("target bandwidth must be > 0");
  auto at = [&](double s) {
    spec.sigma_long = s;
    return spectral_bandwidth(gaussian_packet(grid, spec)).relative;
  };
  double lo = 1e-4 * grid.dk(), hi = 400.0 * grid.dk();
  if (at(lo) > target || at(hi) < target) {
    std::ostringstream msg;
    msg << "relative bandwidth " << target << " is not reachable on this grid (range " << at(lo) << " .. " << at(hi)
        << ")";
    throw std::invalid_argument(msg.str());
  }
  while (hi / lo - 1.0 > 1e-13) {
    const double mid = std::sqrt(lo * hi);
    if (at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  spec.sigma_long = std::sqrt(lo * hi);
  PhotonState s = gaussian_packet(grid, spec);
  const Bandwidth b = spectral_bandwidth(s);
  return {std::move(s), spec.sigma_long, b};
}

PhotonState two_mode_pair(const KGrid& grid, ModeKey a, ModeKey b) {
  PhotonState s(grid);
  s.set_c2(a, b, 1.0);
  return s;
}

PhotonState product_state(const PhotonState& f, const PhotonState& g, double cutoff) {
  require_same_grid(f.grid(), g.grid(), "product_state");
  auto active = [&](const PhotonState& s) {
    double mx = 0.0;
    for (int sigma : {1, -1}) mx = std::max(mx, s.c1(sigma).cwiseAbs().maxCoeff());
    std::vector<std::pair<ModeKey, Complex>> out;
    for (int sigma : {1, -1}) {
      const Eigen::VectorXcd& c = s.c1(sigma);
      for (Index p = 0; p < c.size(); ++p) {
        if (std::abs(c(p)) > cutoff * mx) out.push_back({{p, sigma}, c(p)});
      }
    }
    return out;
  };
  const auto fa = active(f), ga = active(g);
  PhotonState out(f.grid());
  std::map<PairKey, Complex> acc;
  for (const auto& [qf, vf] : fa) {
    for (const auto& [qg, vg] : ga) acc[PairKey(qf, qg)] += vf * vg;
  }
  // acc holds f_q g_q' + f_q' g_q for q != q' and f_q g_q on the diagonal
  for (auto& [key, v] : acc) {
    out.set_c2(key.first, key.second, key.doubly_occupied() ? v * std::numbers::sqrt2 : v);
  }
  out.normalize();
  return out;
}

VectorField3 one_photon_coefficients(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, int sigma,
                                     double t) {
  require_state_grid(state, basis, "one-photon synthesis");
  const KGrid& g = basis.grid();
  const Eigen::VectorXd w = omega_power(g, alpha.value());
  const Eigen::VectorXcd& c = state.c1(sigma);
  const FieldMatrix& e = basis.vectors(sigma);
  FieldMatrix v(3, g.size());
  for (Index p = 0; p < g.size(); ++p) {
    v.col(p) = e.col(p) * (c(p) * w(p) * std::polar(1.0, -g.omega()(p) * t));
  }
  return {g, Domain::kspace, std::move(v)};
}

WaveField synthesize_one_photon(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, int sigma,
                                double t) {
  return {fourier_to_rspace(one_photon_coefficients(state, basis, alpha, sigma, t)), alpha, sigma, t};
}

VectorField3 spectral_curl(const VectorField3& rfield) {
  VectorField3 k = rspace_to_fourier(rfield);
  const KGrid& g = k.grid();
  for (Index p = 0; p < g.size(); ++p) {
    const Eigen::Vector3cd kv = g.k().col(p).cast<Complex>();
    k.values().col(p) = I * cross(kv, k.values().col(p));
  }
  return fourier_to_rspace(k);
}

Eigen::VectorXcd spectral_divergence(const VectorField3& rfield) {
  VectorField3 k = rspace_to_fourier(rfield);
  const KGrid& g = k.grid();
  FieldMatrix d = FieldMatrix::Zero(3, g.size());
  for (Index p = 0; p < g.size(); ++p) d(0, p) = I * g.k().col(p).cast<Complex>().dot(k.values().col(p));
  return fourier_to_rspace(VectorField3(g, Domain::kspace, std::move(d))).values().row(0).transpose();
}

VectorField3 spectral_derivative(const VectorField3& rfield, Axis axis) {
  VectorField3 k = rspace_to_fourier(rfield);
  const KGrid& g = k.grid();
  const int a = axis_index(axis);
  for (Index p = 0; p < g.size(); ++p) k.values().col(p) *= I * g.k()(a, p);
  return fourier_to_rspace(k);
}

VectorField3 time_derivative(const VectorField3& rfield) {
  VectorField3 k = rspace_to_fourier(rfield);
  const KGrid& g = k.grid();
  for (Index p = 0; p < g.size(); ++p) k.values().col(p) *= -I * g.omega()(p);
  return fourier_to_rspace(k);
}

double wave_equation_residual(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, int sigma,
                              double t) {
  const WaveField psi = synthesize_one_photon(state, basis, alpha, sigma, t);
  const FieldMatrix lhs = I * time_derivative(psi.field).values();
  const double c = basis.grid().constants().c();
  const FieldMatrix rhs = (sigma * c) * spectral_curl(psi.field).values();
  return l2(lhs - rhs) / l2(lhs);
}

double field_potential_residual(const PhotonState& state, const PolarizationBasis& basis, int sigma, double t) {
  const WaveField pm = synthesize_one_photon(state, basis, Alpha::minus_half(), sigma, t);
  const WaveField pp = synthesize_one_photon(state, basis, Alpha::plus_half(), sigma, t);
  const FieldMatrix lhs = I * time_derivative(pm.field).values();
  return l2(lhs - pp.field.values()) / l2(pp.field.values());
}

FieldSet field_identifications(const WaveField& psi_minus, const WaveField& psi_plus, const PhysicalConstants& k) {
  if (!(psi_minus.alpha == Alpha::minus_half()) || !(psi_plus.alpha == Alpha::plus_half())) {
    throw LabelMismatch("field identifications need alpha = -1/2 and +1/2 wave functions");
  }
  if (psi_minus.sigma != psi_plus.sigma) throw LabelMismatch("field identifications need equal helicities");
  if (psi_minus.t != psi_plus.t) throw LabelMismatch("field identifications need equal times");
  require_same_grid(psi_minus.field.grid(), psi_plus.field.grid(), "field_identifications");
  const KGrid& g = psi_minus.field.grid();
  auto scaled = [&](const VectorField3& f, Complex s) { return VectorField3(g, Domain::rspace, f.values() * s); };

  const VectorField3 A = scaled(psi_minus.field, std::sqrt(k.hbar() / (2.0 * k.eps0())));
  const VectorField3 D = scaled(psi_plus.field, I * std::sqrt(k.hbar() * k.eps0() / 2.0));
  const VectorField3 B = spectral_curl(A);
  const VectorField3 E = scaled(D, 1.0 / k.eps0());
  const VectorField3 H = scaled(B, 1.0 / k.mu0());
  const int s = psi_minus.sigma;
  VectorField3 F(g, Domain::rspace,
                 D.values() / std::sqrt(2.0 * k.eps0()) + (I * double(s) / std::sqrt(2.0 * k.mu0())) * B.values());
  return {s, psi_minus.t, k, A, D, B, E, H, std::move(F)};
}

double MaxwellResiduals::max() const { return std::max({div_D, div_B, faraday, ampere, helicity, riemann_silberstein}); }

MaxwellResiduals maxwell_residuals(const FieldSet& f) {
  MaxwellResiduals r;
  auto vnorm = [](const Eigen::VectorXcd& v) { return v.norm(); };
  const FieldMatrix curlD = spectral_curl(f.D).values();
  const FieldMatrix curlB = spectral_curl(f.B).values();
  r.div_D = vnorm(spectral_divergence(f.D)) / l2(curlD);
  r.div_B = vnorm(spectral_divergence(f.B)) / l2(curlB);
  const FieldMatrix curlE = spectral_curl(f.E).values();
  const FieldMatrix curlH = spectral_curl(f.H).values();
  r.faraday = l2(curlE + time_derivative(f.B).values()) / l2(curlE);
  r.ampere = l2(curlH - time_derivative(f.D).values()) / l2(curlH);
  if (f.sigma != 0) {
    const FieldMatrix d = f.D.values() / std::sqrt(f.constants.eps0());
    const FieldMatrix b = (I * double(f.sigma) / std::sqrt(f.constants.mu0())) * f.B.values();
    r.helicity = l2(d - b) / l2(d);
    r.riemann_silberstein = l2(f.F.values() - std::numbers::sqrt2 * d) / l2(f.F.values());
  }
  return r;
}

FieldSet total_fields(const PhotonState& state, const PolarizationBasis& basis, double t) {
  const KGrid& g = basis.grid();
  FieldMatrix A = FieldMatrix::Zero(3, g.size()), D = A, B = A;
  for (int sigma : {1, -1}) {
    if (state.c1(sigma).squaredNorm() == 0.0) continue;
    const FieldSet f =
        field_identifications(synthesize_one_photon(state, basis, Alpha::minus_half(), sigma, t),
                              synthesize_one_photon(state, basis, Alpha::plus_half(), sigma, t), g.constants());
    A += f.A.values();
    D += f.D.values();
    B += f.B.values();
  }
  const PhysicalConstants& k = g.constants();
  VectorField3 vA(g, Domain::rspace, A), vD(g, Domain::rspace, D), vB(g, Domain::rspace, B);
  VectorField3 vE(g, Domain::rspace, D / k.eps0()), vH(g, Domain::rspace, B / k.mu0());
  return {0, t, k, vA, vD, vB, vE, vH, VectorField3(g, Domain::rspace)};
}

}  // namespace photonwm
