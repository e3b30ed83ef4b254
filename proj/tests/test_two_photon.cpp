#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "photonwm/errors.hpp"
#include "photonwm/two_photon.hpp"
#include "support.hpp"

using namespace photonwm;
using std::numbers::pi;
using photonwm::testing::Fock;

namespace {

const Complex I(0.0, 1.0);

struct Mode {
  Index k;
  int sigma;
};

}  // namespace

TEST_CASE("Fock-space oracle: pair amplitudes including doubly occupied modes") {
  const KGrid g(4, 2 * pi);
  const std::vector<Mode> modes{{g.index(1, 2, 3), 1}, {g.index(3, 0, 2), 1}, {g.index(1, 2, 3), -1}};
  const Fock F(3);

  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  PhotonState s(g);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(F.dim);
  for (int q = 0; q < 3; ++q) {
    for (int q2 = q; q2 < 3; ++q2) {
      const Complex c(nd(rng), nd(rng));
      s.set_c2({modes[q].k, modes[q].sigma}, {modes[q2].k, modes[q2].sigma}, c);
      Eigen::VectorXcd ket = F.a[q].adjoint() * (F.a[q2].adjoint() * F.vacuum());
      if (q == q2) ket /= std::sqrt(2.0);
      psi += c * ket;
    }
  }
  const double nrm = psi.norm();
  psi /= nrm;
  s.normalize();
  CHECK(s.norm_squared() == doctest::Approx(psi.squaredNorm()).epsilon(1e-14));
  CHECK(s.photon_number() == doctest::Approx(2.0).epsilon(1e-14));

  for (int sg : {1, -1})
    for (int sg2 : {1, -1}) {
      const PairAmplitudes pa = pair_amplitudes(s, sg, sg2);
      for (int q = 0; q < 3; ++q) {
        if (modes[q].sigma != sg) continue;
        for (int q2 = 0; q2 < 3; ++q2) {
          if (modes[q2].sigma != sg2) continue;
          const Complex want = F.vacuum().dot(F.a[q] * (F.a[q2] * psi));
          const auto row = std::find(pa.rows.begin(), pa.rows.end(), modes[q].k) - pa.rows.begin();
          const auto col = std::find(pa.cols.begin(), pa.cols.end(), modes[q2].k) - pa.cols.begin();
          CAPTURE(q);
          CAPTURE(q2);
          CHECK(std::abs(pa.C(row, col) - want) < 1e-12);
        }
      }
    }
}

TEST_CASE("Fock-space oracle: product state amplitudes") {
  const KGrid g(4, 2 * pi);
  const std::vector<Mode> modes{{g.index(0, 1, 2), 1}, {g.index(2, 2, 1), 1}, {g.index(3, 3, 0), 1}};
  const Fock F(3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  PhotonState f(g), h(g);
  Eigen::VectorXcd fv(3), hv(3);
  for (int q = 0; q < 3; ++q) {
    fv(q) = Complex(nd(rng), nd(rng));
    hv(q) = Complex(nd(rng), nd(rng));
    f.set_c1({modes[q].k, 1}, fv(q));
    h.set_c1({modes[q].k, 1}, hv(q));
  }
  Eigen::MatrixXcd af = Eigen::MatrixXcd::Zero(F.dim, F.dim), ah = af;
  for (int q = 0; q < 3; ++q) {
    af += fv(q) * F.a[q].adjoint();
    ah += hv(q) * F.a[q].adjoint();
  }
  Eigen::VectorXcd psi = af * (ah * F.vacuum());
  psi.normalize();

  const PairAmplitudes pa = pair_amplitudes(product_state(f, h), 1, 1);
  for (int q = 0; q < 3; ++q)
    for (int q2 = 0; q2 < 3; ++q2) {
      const Complex want = F.vacuum().dot(F.a[q] * (F.a[q2] * psi));
      const auto row = std::find(pa.rows.begin(), pa.rows.end(), modes[q].k) - pa.rows.begin();
      const auto col = std::find(pa.cols.begin(), pa.cols.end(), modes[q2].k) - pa.cols.begin();
      CHECK(std::abs(pa.C(row, col) - want) < 1e-12);
    }
}

TEST_CASE("two-photon wave function of a pair is the symmetric sum of plane-wave products") {
  const KGrid g(4, 3.0);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  const Index k1 = g.index(0, 1, 3), k2 = g.index(2, 2, 1);
  auto u = [&](Index k, int s, const Eigen::Vector3d& r, Alpha a, double t) {
    return Eigen::Vector3cd(basis.vector(k, s) * std::pow(g.omega()(k), a.value()) *
                            std::polar(1.0 / std::sqrt(g.volume()), g.k().col(k).dot(r) - g.omega()(k) * t));
  };
  for (Alpha a : kAllAlphas) {
    const double t = 0.7;
    const PhotonState pair = two_mode_pair(g, {k1, 1}, {k2, 1});
    const auto psi = synthesize_two_photon(pair, basis, a, 1, 1, t, 2);
    const PhotonState twice = two_mode_pair(g, {k1, 1}, {k1, 1});
    const auto psi2 = synthesize_two_photon(twice, basis, a, 1, 1, t, 2);
    double worst = 0.0, worst2 = 0.0;
    for (Index i = 0; i < psi.points.cols(); ++i)
      for (Index j = 0; j < psi.points.cols(); ++j) {
        const Eigen::Vector3d r = psi.points.col(i), r2 = psi.points.col(j);
        const Eigen::Matrix3cd want = u(k1, 1, r, a, t) * u(k2, 1, r2, a, t).transpose() +
                                      u(k2, 1, r, a, t) * u(k1, 1, r2, a, t).transpose();
        // |2_q>: <0|psi psi a^dag a^dag|0>/sqrt2 = sqrt2 u u
        const Eigen::Matrix3cd want2 = std::sqrt(2.0) * u(k1, 1, r, a, t) * u(k1, 1, r2, a, t).transpose();
        for (int c = 0; c < 3; ++c)
          for (int c2 = 0; c2 < 3; ++c2) {
            worst = std::max(worst, std::abs(psi.component(c, c2)(i, j) - want(c, c2)));
            worst2 = std::max(worst2, std::abs(psi2.component(c, c2)(i, j) - want2(c, c2)));
          }
      }
    CHECK(worst < 1e-14);
    CHECK(worst2 < 1e-14);
  }
}

TEST_CASE("two-photon wave functions are exchange symmetric") {
  const KGrid g(8, 5.0);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  PhotonState s(g);
  for (int i = 0; i < 40; ++i) {
    const ModeKey a{static_cast<Index>(rng() % g.size()), (rng() & 1) ? 1 : -1};
    const ModeKey b{static_cast<Index>(rng() % g.size()), (rng() & 1) ? 1 : -1};
    s.set_c2(a, b, Complex(nd(rng), nd(rng)));
  }
  s.set_c2({3, 1}, {3, 1}, 0.5);
  s.normalize();
  for (Alpha a : kAllAlphas) {
    const auto pp = synthesize_two_photon(s, basis, a, 1, 1, 0.2, 2);
    const auto mm = synthesize_two_photon(s, basis, a, -1, -1, 0.2, 2);
    const auto pm = synthesize_two_photon(s, basis, a, 1, -1, 0.2, 2);
    const auto mp = synthesize_two_photon(s, basis, a, -1, 1, 0.2, 2);
    CHECK(exchange_asymmetry(pp, pp) < 1e-12);
    CHECK(exchange_asymmetry(mm, mm) < 1e-12);
    CHECK(exchange_asymmetry(pm, mp) < 1e-12);
    CHECK_THROWS_AS(exchange_asymmetry(pm, pm), LabelMismatch);
  }
}

TEST_CASE("two-photon synthesis guards its product grid") {
  const KGrid g(16, 5.0);
  const auto basis = helicity_vectors_e0(g);
  const PhotonState s = two_mode_pair(g, {1, 1}, {2, 1});
  CHECK_THROWS_AS(synthesize_two_photon(s, basis, Alpha::zero(), 1, 1, 0.0, 1), CapacityError);
  CHECK_THROWS_AS(synthesize_two_photon(s, basis, Alpha::zero(), 1, 1, 0.0, 3), std::invalid_argument);
  CHECK_NOTHROW(synthesize_two_photon(s, basis, Alpha::zero(), 1, 1, 0.0, 4));
}
