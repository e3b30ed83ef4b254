#include "photonwm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "photonwm/errors.hpp"
#include "photonwm/spectral.hpp"

namespace photonwm {

namespace {

const Complex I(0.0, 1.0);

const WaveField& find_sigma(const std::vector<WaveField>& v, int sigma) {
  for (const auto& w : v) {
    if (w.sigma == sigma) return w;
  }
  throw LabelMismatch("no wave field with helicity " + std::to_string(sigma));
}

Complex sum_of(const Eigen::VectorXcd& v) { return compensated_sum(std::span<const Complex>(v.data(), v.size())); }

// 2 dV Sum conj(D) . X for a real-space FieldMatrix X
Complex weighted_dot(const FieldMatrix& D, const FieldMatrix& X, double dV) { return 2.0 * dV * dot(D, X); }

}  // namespace

DensityReport density(const std::vector<WaveField>& psi_a, const std::vector<WaveField>& psi_ma) {
  if (psi_a.empty() || psi_a.size() != psi_ma.size()) throw LabelMismatch("density needs matched helicity lists");
  const KGrid& g = psi_a.front().field.grid();
  const Alpha alpha = psi_a.front().alpha;
  DensityReport r;
  r.alpha = alpha;
  r.n = Eigen::VectorXcd::Zero(g.size());
  r.j = FieldMatrix::Zero(3, g.size());
  const double c = g.constants().c();
  for (const WaveField& a : psi_a) {
    const WaveField& b = find_sigma(psi_ma, a.sigma);
    if (!(a.alpha == alpha) || !(b.alpha == -alpha)) throw LabelMismatch("density pairs alpha with -alpha");
    if (a.t != b.t) throw LabelMismatch("density needs time-aligned wave fields");
    require_same_grid(a.field.grid(), g, "density");
    require_same_grid(b.field.grid(), g, "density");
    const FieldMatrix& x = a.field.values();
    const FieldMatrix& y = b.field.values();
    for (Index p = 0; p < g.size(); ++p) {
      r.n(p) += x.col(p).dot(y.col(p));
      const Eigen::Vector3cd xc = x.col(p).conjugate();
      r.j.col(p) += (-I * double(a.sigma) * c) * cross(xc, y.col(p));
    }
  }
  const double dV = g.cell_volume();
  r.total_n = sum_of(r.n) * dV;
  for (int a = 0; a < 3; ++a) r.total_j(a) = sum_of(r.j.row(a).transpose()) * dV;
  r.max_imag_n = r.n.imag().cwiseAbs().maxCoeff();
  r.min_real_n = r.n.real().minCoeff();
  return r;
}

DensityReport density(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, double t) {
  std::vector<WaveField> a, b;
  for (int sigma : {1, -1}) {
    a.push_back(synthesize_one_photon(state, basis, alpha, sigma, t));
    b.push_back(synthesize_one_photon(state, basis, -alpha, sigma, t));
  }
  return density(a, b);
}

double relative_l1(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().sum() / b.cwiseAbs().sum();
}

ContinuityReport continuity_residual(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, double t,
                                     double dt_probe) {
  require_same_grid(state.grid(), basis.grid(), "continuity_residual");
  const KGrid& g = basis.grid();
  const int s = 2;
  const int M = s * g.n();
  const Index NM = static_cast<Index>(M) * M * M;
  const double c = g.constants().c();

  auto kdot = [&](VectorField3 k) {
    for (Index p = 0; p < g.size(); ++p) k.values().col(p) *= -I * g.omega()(p);
    return k;
  };
  auto fine_density = [&](double time, Eigen::VectorXcd& n, Eigen::VectorXcd* dn, FieldMatrix* j) {
    n = Eigen::VectorXcd::Zero(NM);
    if (dn) *dn = Eigen::VectorXcd::Zero(NM);
    if (j) *j = FieldMatrix::Zero(3, NM);
    for (int sigma : {1, -1}) {
      if (state.c1(sigma).squaredNorm() == 0.0) continue;
      const VectorField3 ka = one_photon_coefficients(state, basis, alpha, sigma, time);
      const VectorField3 kb = one_photon_coefficients(state, basis, -alpha, sigma, time);
      const FieldMatrix a = spectral::synthesize_oversampled(ka, s);
      const FieldMatrix b = spectral::synthesize_oversampled(kb, s);
      FieldMatrix at, bt;
      if (dn) {
        at = spectral::synthesize_oversampled(kdot(ka), s);
        bt = spectral::synthesize_oversampled(kdot(kb), s);
      }
      for (Index q = 0; q < NM; ++q) {
        n(q) += a.col(q).dot(b.col(q));
        if (dn) (*dn)(q) += at.col(q).dot(b.col(q)) + a.col(q).dot(bt.col(q));
        if (j) {
          const Eigen::Vector3cd ac = a.col(q).conjugate();
          j->col(q) += (-I * double(sigma) * c) * cross(ac, b.col(q));
        }
      }
    }
  };

  Eigen::VectorXcd n, dn;
  FieldMatrix j;
  fine_density(t, n, &dn, &j);
  const Eigen::VectorXcd divj = spectral::lattice_divergence(j, g.box_length(), M);

  ContinuityReport r;
  r.oversampling = s;
  r.residual = dn + divj;
  r.dn_dt_norm = dn.norm();
  r.div_j_norm = divj.norm();
  const double scale = std::max(r.dn_dt_norm, r.div_j_norm);
  r.relative = scale > 0.0 ? r.residual.norm() / scale : r.residual.norm();
  if (dt_probe > 0.0) {
    Eigen::VectorXcd np, nm;
    fine_density(t + dt_probe, np, nullptr, nullptr);
    fine_density(t - dt_probe, nm, nullptr, nullptr);
    const Eigen::VectorXcd fd = (np - nm) / (2.0 * dt_probe);
    r.probe_defect = r.dn_dt_norm > 0.0 ? (fd - dn).norm() / r.dn_dt_norm : (fd - dn).norm();
  }
  return r;
}

MarginalReport two_photon_marginal(const std::vector<TwoPhotonWaveField>& psi_a,
                                   const std::vector<TwoPhotonWaveField>& psi_ma) {
  if (psi_a.empty() || psi_a.size() != psi_ma.size()) throw LabelMismatch("marginal needs matched field lists");
  MarginalReport r;
  r.points = psi_a.front().points;
  r.cell_volume = psi_a.front().cell_volume;
  const Index P = r.points.cols();
  for (auto& v : r.n_sigma) v = Eigen::VectorXcd::Zero(P);
  for (const auto& a : psi_a) {
    const TwoPhotonWaveField* b = nullptr;
    for (const auto& m : psi_ma) {
      if (m.sigma == a.sigma && m.sigma2 == a.sigma2) b = &m;
    }
    if (!b) throw LabelMismatch("marginal: missing -alpha partner field");
    if (!(b->alpha == -a.alpha) || b->t != a.t) throw LabelMismatch("marginal pairs alpha with -alpha at one time");
    if (b->coarsening != a.coarsening || a.points.cols() != P) throw GridMismatch("marginal: coarsening mismatch");
    Eigen::VectorXcd& ns = r.n_sigma[a.sigma > 0 ? 0 : 1];
    for (int j = 0; j < 3; ++j) {
      for (int j2 = 0; j2 < 3; ++j2) {
        ns += (a.component(j, j2).conjugate().cwiseProduct(b->component(j, j2))).rowwise().sum() * r.cell_volume;
      }
    }
  }
  r.n = r.n_sigma[0] + r.n_sigma[1];
  r.total = sum_of(r.n) * r.cell_volume;
  return r;
}

MarginalReport two_photon_marginal(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha, double t,
                                   int coarsening) {
  std::vector<TwoPhotonWaveField> a, b;
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      a.push_back(synthesize_two_photon(state, basis, alpha, s1, s2, t, coarsening));
      b.push_back(synthesize_two_photon(state, basis, -alpha, s1, s2, t, coarsening));
    }
  }
  return two_photon_marginal(a, b);
}

VectorFunctional momentum_functional(const VectorField3& A, const VectorField3& D) {
  require_same_grid(A.grid(), D.grid(), "momentum_functional");
  const double dV = A.grid().cell_volume();
  VectorFunctional f;
  for (Axis ax : kAllAxes) {
    const Complex v = weighted_dot(D.values(), spectral_derivative(A, ax).values(), dV);
    f.value(axis_index(ax)) = v.real();
    f.imag_defect(axis_index(ax)) = v.imag();
  }
  return f;
}

AngularMomentum angular_momentum_functional(const VectorField3& A, const VectorField3& D,
                                            const Eigen::Vector3d& origin) {
  require_same_grid(A.grid(), D.grid(), "angular_momentum_functional");
  const KGrid& g = A.grid();
  const double dV = g.cell_volume();
  std::array<FieldMatrix, 3> grad;
  for (Axis ax : kAllAxes) grad[static_cast<std::size_t>(axis_index(ax))] = spectral_derivative(A, ax).values();

  // ((r - o) x grad)_a A_i for each a
  std::array<FieldMatrix, 3> rot;
  for (auto& m : rot) m.resize(3, g.size());
  for (Index p = 0; p < g.size(); ++p) {
    const Eigen::Vector3d r = g.r_point(p) - origin;
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      rot[static_cast<std::size_t>(a)].col(p) = r(b) * grad[static_cast<std::size_t>(c)].col(p) -
                                               r(c) * grad[static_cast<std::size_t>(b)].col(p);
    }
  }
  AngularMomentum J;
  J.origin = origin;
  for (int a = 0; a < 3; ++a) {
    const Complex orb = weighted_dot(D.values(), rot[static_cast<std::size_t>(a)], dV);
    // (conj(D) x A)_a = conj(D_b) A_c - conj(D_c) A_b
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    std::vector<Complex> terms(static_cast<std::size_t>(g.size()));
    for (Index p = 0; p < g.size(); ++p) {
      terms[static_cast<std::size_t>(p)] =
          std::conj(D.values()(b, p)) * A.values()(c, p) - std::conj(D.values()(c, p)) * A.values()(b, p);
    }
    const Complex spin = 2.0 * dV * compensated_sum(terms);
    J.orbital(a) = orb.real();
    J.spin(a) = spin.real();
    J.total.value(a) = (orb + spin).real();
    J.total.imag_defect(a) = (orb + spin).imag();
  }
  return J;
}

Eigen::Vector3d ct_angular_momentum(const PhotonState& state, const PolarizationBasis& basis, double t0,
                                    const Eigen::Vector3d& origin) {
  const KGrid& g = basis.grid();
  double wmin = INFINITY, wmax = 0.0;
  for (int sigma : {1, -1}) {
    const Eigen::VectorXcd& c = state.c1(sigma);
    for (Index p = 0; p < c.size(); ++p) {
      if (c(p) == Complex(0.0, 0.0)) continue;
      wmin = std::min(wmin, g.omega()(p));
      wmax = std::max(wmax, g.omega()(p));
    }
  }
  if (!(wmax > 0.0)) throw std::invalid_argument("CT angular momentum of a state without one-photon content");
  if (wmax - wmin > 1e-12 * wmax) {
    throw std::invalid_argument("CT angular momentum needs a monochromatic state");
  }
  const double period = 2.0 * std::numbers::pi / wmax;
  const double eps0 = g.constants().eps0();
  const double dV = g.cell_volume();
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (int s = 0; s < 4; ++s) {
    const FieldSet f = total_fields(state, basis, t0 + s * period / 4.0);
    const Eigen::Matrix3Xd A = 2.0 * f.A.values().real();
    const Eigen::Matrix3Xd E = 2.0 * f.E.values().real();
    std::array<Eigen::Matrix3Xd, 3> grad;
    for (Axis ax : kAllAxes) grad[static_cast<std::size_t>(axis_index(ax))] = 2.0 * spectral_derivative(f.A, ax).values().real();
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      std::vector<double> terms(static_cast<std::size_t>(g.size()));
      for (Index p = 0; p < g.size(); ++p) {
        const Eigen::Vector3d r = g.r_point(p) - origin;
        const Eigen::Vector3d rot = r(b) * grad[static_cast<std::size_t>(c)].col(p) - r(c) * grad[static_cast<std::size_t>(b)].col(p);
        terms[static_cast<std::size_t>(p)] = E.col(p).dot(rot) + E(b, p) * A(c, p) - E(c, p) * A(b, p);
      }
      acc(a) += eps0 * dV * compensated_sum(terms);
    }
  }
  return acc / 4.0;
}

Eigen::Vector3d momentum_mode_sum(const PhotonState& state) {
  const KGrid& g = state.grid();
  Eigen::Vector3d out;
  for (int a = 0; a < 3; ++a) {
    std::vector<double> terms;
    for (int sigma : {1, -1}) {
      const Eigen::VectorXcd& c = state.c1(sigma);
      for (Index p = 0; p < c.size(); ++p) terms.push_back(g.k()(a, p) * std::norm(c(p)));
    }
    out(a) = g.constants().hbar() * compensated_sum(terms);
  }
  return out;
}

GlauberReport glauber_comparison(const PhotonState& state, const PolarizationBasis& basis, const Detector& det,
                                 double t) {
  const KGrid& g = basis.grid();
  const PhysicalConstants& k = g.constants();
  GlauberReport r;
  const Bandwidth bw = spectral_bandwidth(state);
  r.omega_bar = bw.omega_bar;
  r.bandwidth = bw.relative;
  if (bw.relative > 0.5) {
    std::ostringstream msg;
    msg << "relative bandwidth " << bw.relative << " exceeds 0.5; the narrow-band approximation does not apply";
    r.warnings.push_back(msg.str());
  }

  const DensityReport dh = density(state, basis, Alpha::plus_half(), t);
  const FieldSet f = total_fields(state, basis, t);

  std::vector<Index> cells;
  if (det.dz <= 0.0 && det.area <= 0.0) {
    Index best = 0;
    double bd = INFINITY;
    for (Index p = 0; p < g.size(); ++p) {
      const double d = (g.r_point(p) - det.position).squaredNorm();
      if (d < bd) {
        bd = d;
        best = p;
      }
    }
    cells.push_back(best);
  } else {
    const double half_side = 0.5 * std::sqrt(std::max(det.area, 0.0));
    for (Index p = 0; p < g.size(); ++p) {
      const Eigen::Vector3d d = g.r_point(p) - det.position;
      if (std::abs(d.z()) <= 0.5 * det.dz && std::abs(d.x()) <= half_side && std::abs(d.y()) <= half_side) {
        cells.push_back(p);
      }
    }
    if (cells.empty()) throw std::invalid_argument("detector volume contains no grid point");
  }
  std::vector<double> ng, nh;
  for (Index p : cells) {
    ng.push_back(2.0 * k.eps0() * f.E.values().col(p).squaredNorm() / (k.hbar() * r.omega_bar));
    nh.push_back(dh.n(p).real());
  }
  r.cells = static_cast<Index>(cells.size());
  r.n_glauber = compensated_sum(ng) * g.cell_volume();
  r.n_half = compensated_sum(nh) * g.cell_volume();
  r.ratio = r.n_glauber / r.n_half;
  r.deviation = std::abs(r.ratio - 1.0);
  return r;
}

SweepResult glauber_sweep(const KGrid& grid, const PolarizationBasis& basis, const PacketSpec& packet,
                          const std::vector<double>& ladder, const Detector& det) {
  SweepResult s;
  for (double target : ladder) {
    const BandwidthPacket bp = packet_with_bandwidth(grid, packet, target);
    s.rows.push_back({target, bp.bandwidth.relative, bp.sigma_long, glauber_comparison(bp.state, basis, det)});
  }
  std::sort(s.rows.begin(), s.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.bandwidth < b.bandwidth; });
  s.monotone = true;
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    if (!(s.rows[i].report.deviation > s.rows[i - 1].report.deviation)) s.monotone = false;
  }
  return s;
}

}  // namespace photonwm
