#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "photonwm/errors.hpp"
#include "photonwm/observables.hpp"
#include "support.hpp"

using namespace photonwm;
using std::numbers::pi;
using photonwm::testing::random_state;

namespace {

// Forward-travelling packet on a 32^3 grid used by the bandwidth comparisons.
struct PulseSetup {
  KGrid grid{32, 2 * pi * 4};
  PolarizationBasis basis = apply_chi(helicity_vectors_e0(grid), 1);
  PacketSpec spec;
  PulseSetup() {
    spec.k0 = Eigen::Vector3d(0, 0, 8.5 * grid.dk());
    spec.sigma_perp = 0.2 * grid.dk();
  }
};

const PulseSetup& pulse() {
  static const PulseSetup s;
  return s;
}

}  // namespace

TEST_CASE("LP density integrates to the photon number and is non-negative") {
  const KGrid g(10, 8.0);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  const PhotonState s = random_state(g, 1);
  const DensityReport d = density(s, basis, Alpha::zero(), 0.3);
  CHECK(std::abs(d.total_n - 1.0) < 1e-12);
  CHECK(d.min_real_n >= -1e-12);
  CHECK(d.max_imag_n < 1e-15);
}

TEST_CASE("real part of the field-like density is the average of the +-1/2 densities") {
  const KGrid g(8, 6.0);
  const auto basis = helicity_vectors_e0(g);
  const PhotonState s = random_state(g, 2);
  const DensityReport p = density(s, basis, Alpha::plus_half(), 0.1);
  const DensityReport m = density(s, basis, Alpha::minus_half(), 0.1);
  const Eigen::VectorXcd avg = 0.5 * (p.n + m.n);
  const double scale = p.n.cwiseAbs().maxCoeff();
  CHECK((p.real_n() - avg.real()).cwiseAbs().maxCoeff() < 1e-14 * scale);
  CHECK(avg.imag().cwiseAbs().maxCoeff() < 1e-14 * scale);
  CHECK(std::abs(p.total_n - 1.0) < 1e-12);
}

TEST_CASE("density rejects mismatched labels") {
  const KGrid g(4, 3.0);
  const auto basis = helicity_vectors_e0(g);
  const PhotonState s = random_state(g, 3);
  const auto a = synthesize_one_photon(s, basis, Alpha::plus_half(), 1, 0.0);
  const auto b = synthesize_one_photon(s, basis, Alpha::zero(), 1, 0.0);
  const auto b_late = synthesize_one_photon(s, basis, Alpha::minus_half(), 1, 0.5);
  CHECK_THROWS_AS(density({a}, {b}), LabelMismatch);
  CHECK_THROWS_AS(density({a}, {b_late}), LabelMismatch);
}

TEST_CASE("continuity holds to round-off for every alpha") {
  const KGrid g(10, 7.0);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  for (std::uint64_t seed : {4u, 5u}) {
    const PhotonState s = random_state(g, seed);
    for (Alpha a : kAllAlphas) {
      const ContinuityReport r = continuity_residual(s, basis, a, 0.7, 1e-4);
      CAPTURE(a.str());
      CHECK(r.relative < 1e-9);
      CHECK(r.dn_dt_norm > 0.0);
      CHECK(r.probe_defect < 1e-6);
    }
  }
}

TEST_CASE("a single plane wave has static density and divergence-free current") {
  const KGrid g(6, 5.0);
  const auto basis = helicity_vectors_e0(g);
  const PhotonState s = single_mode(g, {1, 3, 4}, -1);
  const DensityReport d = density(s, basis, Alpha::zero(), 0.0);
  const ContinuityReport r = continuity_residual(s, basis, Alpha::zero(), 0.0);
  const double n_scale = d.n.norm();
  CHECK(r.dn_dt_norm < 1e-12 * n_scale);
  CHECK(r.div_j_norm < 1e-12 * n_scale);
  CHECK((d.n.array() - 1.0 / g.volume()).abs().maxCoeff() < 1e-14);
}

TEST_CASE("field-like and LP densities agree for narrow bands and separate for broad ones") {
  const auto& P = pulse();
  auto distance = [&](double target) {
    const BandwidthPacket bp = packet_with_bandwidth(P.grid, P.spec, target);
    const DensityReport h = density(bp.state, P.basis, Alpha::plus_half(), 0.0);
    const DensityReport z = density(bp.state, P.basis, Alpha::zero(), 0.0);
    return relative_l1(h.real_n(), z.real_n());
  };
  CHECK(distance(0.05) < 0.01);
  CHECK(distance(0.5) > 0.05);
}

TEST_CASE("momentum: plane waves, opposed pairs, and the mode sum") {
  for (const auto& units : {PhysicalConstants::natural(), PhysicalConstants::si()}) {
    const double L = units == PhysicalConstants::natural() ? 6.0 : 1.5e-6;
    const KGrid g(8, L, units);
    const auto basis = apply_chi(helicity_vectors_e0(g), 1);
    const double hk = units.hbar() * g.dk();

    const PhotonState plane = single_mode(g, {2, 5, 6}, 1);
    const FieldSet f = total_fields(plane, basis, 0.0);
    const VectorFunctional P = momentum_functional(f.A, f.D);
    const Eigen::Vector3d want = units.hbar() * g.k().col(g.index(2, 5, 6));
    CHECK((P.value - want).norm() < 1e-10 * want.norm());
    CHECK(P.imag_defect.norm() < 1e-10 * want.norm());

    PhotonState opposed(g);
    opposed.set_c1({g.index(2, 5, 6), 1}, 1.0);
    opposed.set_c1({g.index(5, 2, 1), 1}, 1.0);
    opposed.normalize();
    const FieldSet fo = total_fields(opposed, basis, 0.3 * L / units.c());
    CHECK(momentum_functional(fo.A, fo.D).value.norm() < 1e-10 * hk);

    const PhotonState s = random_state(g, 6);
    const FieldSet fs = total_fields(s, basis, 0.2 * L / units.c());
    const Eigen::Vector3d mode_sum = momentum_mode_sum(s);
    CHECK((momentum_functional(fs.A, fs.D).value - mode_sum).norm() < 1e-10 * std::max(mode_sum.norm(), hk));
  }
}

TEST_CASE("J_z per photon of chi = -m phi localized states is m sigma") {
  const KGrid g(32, 2 * pi * 4);
  for (int m : {0, 1, 2}) {
    const auto basis = apply_chi(helicity_vectors_e0(g), m);
    for (int sg : {1, -1}) {
      const PhotonState s = localized(g, Eigen::Vector3d::Zero(), sg, Envelope::shell());
      const FieldSet f = total_fields(s, basis, 0.0);
      const AngularMomentum J = angular_momentum_functional(f.A, f.D);
      const double per_photon = J.total.value.z() / (g.constants().hbar() * s.photon_number());
      CAPTURE(m);
      CAPTURE(sg);
      if (m == 0)
        CHECK(std::abs(per_photon) < 1e-2);
      else
        CHECK(std::abs(per_photon - m * sg) < 0.01 * std::abs(m * sg));
    }
  }
}

TEST_CASE("spin part of J matches the spin content of the helicity vectors") {
  const KGrid g(16, 2 * pi * 4);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  double previous = INFINITY;
  for (double spread : {1.0, 0.5, 0.25}) {
    PacketSpec spec;
    spec.k0 = Eigen::Vector3d(0, 0, 4.5 * g.dk());
    spec.sigma_long = 0.5 * g.dk();
    spec.sigma_perp = spread * g.dk();
    spec.sigma = -1;
    const PhotonState s = gaussian_packet(g, spec);
    const FieldSet f = total_fields(s, basis, 0.0);
    const AngularMomentum J = angular_momentum_functional(f.A, f.D);

    double oracle = 0.0;
    for (Index p = 0; p < g.size(); ++p) {
      const double w = std::norm(s.c1(-1)(p));
      if (w == 0.0) continue;
      for (const auto& e : am_decomposition(g.theta()(p), 1, -1).entries) oracle += w * e.s_z * e.amplitude * e.amplitude;
    }
    CHECK(J.spin.z() == doctest::Approx(oracle).epsilon(1e-10));
    const double gap = std::abs(J.spin.z() - spec.sigma);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 0.02);
}

TEST_CASE("origin shift of J is the shift cross P") {
  const KGrid g(10, 8.0);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  const PhotonState s = random_state(g, 7);
  const FieldSet f = total_fields(s, basis, 0.0);
  const Eigen::Vector3d o(0.7, -1.3, 2.1);
  const AngularMomentum J0 = angular_momentum_functional(f.A, f.D);
  const AngularMomentum Jo = angular_momentum_functional(f.A, f.D, o);
  const Eigen::Vector3d P = momentum_functional(f.A, f.D).value;
  CHECK((Jo.total.value - (J0.total.value - o.cross(P))).norm() < 1e-12 * (J0.total.value.norm() + o.norm() * P.norm()));
}

TEST_CASE("positive-frequency and real-field angular momentum agree on monochromatic states") {
  for (const auto& units : {PhysicalConstants::natural(), PhysicalConstants::si()}) {
    const double L = units == PhysicalConstants::natural() ? 2 * pi * 2 : 3e-6;
    const KGrid g(8, L, units);
    const auto basis = apply_chi(helicity_vectors_e0(g), 1);
    // all sign and axis permutations of (1/2, 3/2, 5/2) dk share one |k|
    PhotonState s(g);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    const int c = g.n() / 2;
    std::array<int, 3> idx{0, 1, 2};
    do {
      for (int sx : {-1, 1})
        for (int sy : {-1, 1})
          for (int sz : {-1, 1}) {
            auto coord = [&](int v, int sign) { return sign > 0 ? c + v : c - 1 - v; };
            const Index p = g.index(coord(idx[0], sx), coord(idx[1], sy), coord(idx[2], sz));
            for (int sg : {1, -1}) s.set_c1({p, sg}, Complex(nd(rng), nd(rng)));
          }
    } while (std::next_permutation(idx.begin(), idx.end()));
    s.normalize();
    const FieldSet f = total_fields(s, basis, 0.0);
    const Eigen::Vector3d J = angular_momentum_functional(f.A, f.D).total.value;
    const Eigen::Vector3d Jct = ct_angular_momentum(s, basis, 0.1 * L / units.c());
    CHECK((J - Jct).norm() < 1e-10 * (J.norm() + units.hbar()));

    PhotonState mixed = s;
    mixed.set_c1({g.index(0, 0, 0), 1}, 0.1);
    CHECK_THROWS(ct_angular_momentum(mixed, basis));
  }
}

TEST_CASE("two-photon marginal of separated packets is the sum of their densities") {
  const KGrid g(32, 2 * pi * 4);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  PacketSpec a;
  a.k0 = Eigen::Vector3d(2.0 * g.dk(), 0, 0);
  a.sigma_long = a.sigma_perp = 0.4 * g.dk();
  a.forward_only = false;
  a.r0 = Eigen::Vector3d(-g.box_length() / 4, 0, 0);
  PacketSpec b = a;
  b.r0 = -a.r0;
  b.sigma = -1;
  const PhotonState f = gaussian_packet(g, a), h = gaussian_packet(g, b);
  const PhotonState pair = product_state(f, h, 1e-8);

  const MarginalReport m = two_photon_marginal(pair, basis, Alpha::zero(), 0.0);
  CHECK(std::abs(m.total - 2.0) < 0.02 * 2.0);
  CHECK((m.n - (m.n_sigma[0] + m.n_sigma[1])).norm() == 0.0);

  const DensityReport df = density(f, basis, Alpha::zero(), 0.0), dh = density(h, basis, Alpha::zero(), 0.0);
  Eigen::VectorXd want(m.points.cols());
  const int cs = g.n() / 4;
  for (int l = 0; l < cs; ++l)
    for (int j = 0; j < cs; ++j)
      for (int i = 0; i < cs; ++i) {
        const Index p = g.index(4 * i, 4 * j, 4 * l);
        want(i + cs * (j + cs * l)) = df.n(p).real() + dh.n(p).real();
      }
  CHECK(relative_l1(m.n.real(), want) < 1e-3);
  // each helicity-resolved marginal is one packet
  CHECK(std::abs(m.n_sigma[0].sum() * m.cell_volume - 1.0) < 0.02);
}

TEST_CASE("Glauber rate matches the field-like density for narrow bands") {
  const auto& P = pulse();
  const Detector det;
  const BandwidthPacket mono = packet_with_bandwidth(P.grid, P.spec, 1e-4);
  const GlauberReport r0 = glauber_comparison(mono.state, P.basis, det);
  // With the spectrum sampled on k_z layers a spacing dk apart, the neighbouring layers enter the
  // pointwise ratio at first order in their amplitude: |ratio - 1| ~ bw * eps / sqrt2, with eps the
  // relative frequency step between layers.
  const double dk = P.grid.dk();
  const double eps = std::hypot(std::sqrt(0.5) * dk, P.spec.k0.z() + dk) / r0.omega_bar - 1.0;
  CHECK(r0.deviation == doctest::Approx(r0.bandwidth * eps / std::sqrt(2.0)).epsilon(0.05));
  CHECK(r0.deviation < 1e-5);
  CHECK(r0.cells == 1);
  CHECK(r0.warnings.empty());

  const GlauberReport r5 = glauber_comparison(packet_with_bandwidth(P.grid, P.spec, 0.05).state, P.basis, det);
  CHECK(r5.deviation < 0.01);

  const SweepResult sweep = glauber_sweep(P.grid, P.basis, P.spec, {1e-4, 0.01, 0.05, 0.2, 0.5}, det);
  CHECK(sweep.rows.size() == 5);
  CHECK(sweep.monotone);

  Detector slab;
  slab.dz = 2.0 * P.grid.dr();
  slab.area = 4.0 * P.grid.dr() * P.grid.dr();
  const GlauberReport rs = glauber_comparison(mono.state, P.basis, slab);
  CHECK(rs.cells > 1);
  CHECK(rs.deviation < 1e-5);
}

TEST_CASE("Glauber comparison warns beyond half bandwidth") {
  const KGrid g(8, 2 * pi);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  PhotonState s(g);
  s.set_c1({g.index(4, 4, 4), 1}, 1.0);  // |k| = sqrt(3)/2
  s.set_c1({g.index(7, 7, 7), 1}, 1.0);  // |k| = 7 sqrt(3)/2
  s.normalize();
  const GlauberReport r = glauber_comparison(s, basis, Detector{});
  CHECK(r.bandwidth == doctest::Approx(0.75));
  CHECK(r.warnings.size() == 1);
}
