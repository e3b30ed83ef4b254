#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "photonwm/errors.hpp"
#include "photonwm/polarization.hpp"

using namespace photonwm;
using std::numbers::pi;

namespace {

const Complex I(0.0, 1.0);
const double kRt2 = std::sqrt(2.0);

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

SphericalFrame frame_from_angles(double theta, double phi) {
  return spherical_frame(Eigen::Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                         std::cos(theta)));
}

}  // namespace

TEST_CASE("spin matrices: entries, Hermiticity and the su(2) algebra") {
  const SpinMatrices<double> S;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(S[i](j, k) == Complex(0.0, -levi_civita(i, j, k)));
    CHECK((S[i] - S[i].adjoint()).norm() == 0.0);
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    CHECK((S[i] * S[j] - S[j] * S[i] - I * S[k]).norm() < 1e-14);
  }
}

TEST_CASE("closed-form spin-1 exponential matches a generic matrix exponential") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SpinMatrices<double> S;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::Vector3d n(u(rng), u(rng), u(rng));
    n.normalize();
    const double psi = 4.0 * u(rng);
    const Eigen::Matrix3cd generic = (Complex(0.0, -psi) * S.along(n)).exp();
    CHECK((spin1_exp<double>(n, psi) - generic).norm() < 1e-13);
  }
}

TEST_CASE("rotation_D examples") {
  CHECK((rotation_D<double>(0.0, 0.0) - Eigen::Matrix3cd::Identity()).norm() < 1e-15);
  const Eigen::Vector3cd z_to = rotation_D<double>(pi / 2, 0.0) * Eigen::Vector3cd::UnitZ();
  CHECK((z_to - Eigen::Vector3cd::UnitX()).norm() < 1e-15);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(0.01, pi - 0.01), ph(-pi, pi);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = th(rng), phi = ph(rng);
    const Eigen::Matrix3cd D = rotation_D<double>(theta, phi);
    CHECK((D * D.adjoint() - Eigen::Matrix3cd::Identity()).norm() < 1e-14);
    const auto f = frame_from_angles(theta, phi);
    CHECK((D * Eigen::Vector3cd::UnitX() - f.theta_hat.cast<Complex>()).norm() < 1e-14);
    CHECK((D * Eigen::Vector3cd::UnitY() - f.phi_hat.cast<Complex>()).norm() < 1e-14);
    CHECK((D * Eigen::Vector3cd::UnitZ() - f.k_hat.cast<Complex>()).norm() < 1e-14);
  }
}

TEST_CASE("e0 along x with positive helicity") {
  const auto f = spherical_frame(Eigen::Vector3d::UnitX());
  const Eigen::Vector3cd want = (Eigen::Vector3cd(0, I, -1.0)) / kRt2;
  CHECK((helicity_vector(f, +1) - want).norm() < 1e-15);
}

TEST_CASE("e0 basis equals D applied to the circular Cartesian vectors") {
  const KGrid g(6, 2 * pi);
  const auto basis = helicity_vectors_e0(g);
  for (Index p = 0; p < g.size(); ++p) {
    const Eigen::Matrix3cd D = rotation_D<double>(g.theta()(p), g.phi()(p));
    for (int s : {1, -1}) {
      const Eigen::Vector3cd circ = Eigen::Vector3cd(1.0, I * double(s), 0.0) / kRt2;
      CHECK((basis.vector(p, s) - D * circ).norm() < 1e-12);
    }
  }
}

TEST_CASE("basis invariants hold at every point on random grids, all chi choices") {
  std::mt19937_64 rng(17);
  const SpinMatrices<double> S;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const double L = std::uniform_real_distribution<double>(1.0, 40.0)(rng);
    const KGrid g(n, L);
    const auto e0 = helicity_vectors_e0(g);
    for (const auto& basis : {e0, apply_chi(e0, 1), apply_chi(e0, -2),
                              apply_chi(e0, ChiMode::custom([](double t, double p) { return std::sin(t) * p; }))}) {
      CHECK(check_basis(basis).max() < 1e-12);
      // independent recomputation of the same relations
      for (Index p = 0; p < g.size(); ++p) {
        const Eigen::Vector3cd kh = g.k_hat().col(p).cast<Complex>();
        for (int s : {1, -1}) {
          const Eigen::Vector3cd e = basis.vector(p, s);
          CHECK(std::abs(kh.dot(e)) < 1e-12);
          CHECK((S.helicity(g.k_hat().col(p)) * e - double(s) * e).norm() < 1e-12);
          CHECK(std::abs(e.squaredNorm() - 1.0) < 1e-12);
          CHECK((I * cross(kh, e) - double(s) * e).norm() < 1e-12);
        }
        CHECK(std::abs(basis.vector(p, 1).dot(basis.vector(p, -1))) < 1e-12);
      }
    }
  }
}

TEST_CASE("apply_chi with chi = 0 is the identity") {
  const KGrid g(4, 5.0);
  const auto e0 = helicity_vectors_e0(g);
  const auto same = apply_chi(e0, ChiMode::zero());
  for (int s : {1, -1}) CHECK((same.vectors(s) - e0.vectors(s)).norm() == 0.0);
  CHECK_THROWS_AS(apply_chi(apply_chi(e0, 1), 1), LabelMismatch);
}

TEST_CASE("m = 1 basis tends to the circular vector near the axis") {
  const KGrid g(16, 2 * pi);
  const auto basis = apply_chi(helicity_vectors_e0(g), 1);
  Index best = 0;
  for (Index p = 0; p < g.size(); ++p)
    if (g.theta()(p) < g.theta()(best)) best = p;
  const Eigen::Vector3cd want = Eigen::Vector3cd(1.0, I, 0.0) / kRt2;
  const double dev = (basis.vector(best, 1) - want).norm();
  CHECK(dev < 1.5 * g.theta()(best));
}

TEST_CASE("m = 1 at theta = pi/2, phi = 0 matches the three-term expansion written out by hand") {
  const auto f = spherical_frame(Eigen::Vector3d::UnitX());
  const Eigen::Vector3cd want = Eigen::Vector3cd(1.0, -I, 0.0) * (-1.0 / (2 * kRt2)) -
                                Eigen::Vector3cd::UnitZ() / kRt2 + Eigen::Vector3cd(1.0, I, 0.0) / (2 * kRt2);
  CHECK((helicity_vector(f, 1, -1.0 * f.phi) - want).norm() < 1e-15);
  CHECK((em_expansion(pi / 2, 0.0, 1, 1) - want).norm() < 1e-15);
}

TEST_CASE("chi = -m phi vectors equal the explicit expansion at 200 random angles") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> th(1e-3, pi - 1e-3), ph(-pi, pi);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double theta = th(rng), phi = ph(rng);
    const int m = static_cast<int>(rng() % 7) - 3;
    const auto f = frame_from_angles(theta, phi);
    for (int s : {1, -1}) {
      const Eigen::Vector3cd v = helicity_vector(f, s, -m * f.phi);
      worst = std::max(worst, (v - em_expansion(theta, phi, m, s)).norm());
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("am_decomposition examples and invariants") {
  auto a = am_decomposition(0.0, 1, 1);
  CHECK(a.entries[0].amplitude == doctest::Approx(0.0));
  CHECK(a.entries[1].amplitude == doctest::Approx(0.0));
  CHECK(a.entries[2].amplitude == doctest::Approx(1.0));
  CHECK(a.entries[2].s_z == 1);
  CHECK(a.entries[2].l_z == 0);

  a = am_decomposition(pi / 2, 1, 1);
  CHECK(a.entries[0].amplitude * a.entries[0].amplitude == doctest::Approx(0.25));
  CHECK(a.entries[1].amplitude * a.entries[1].amplitude == doctest::Approx(0.5));
  CHECK(a.entries[2].amplitude * a.entries[2].amplitude == doctest::Approx(0.25));

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> th(0.0, pi);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = static_cast<int>(rng() % 9) - 4;
    const int s = (rng() & 1) ? 1 : -1;
    const auto d = am_decomposition(th(rng), m, s);
    CHECK(std::abs(d.weight_sum() - 1.0) < 1e-12);
    for (const auto& e : d.entries) CHECK(e.s_z + e.l_z == m * s);
  }
  CHECK_THROWS_AS(am_decomposition(1.0, 1, 0), LabelMismatch);
}

TEST_CASE("the spin content of the expansion is sigma cos(theta)") {
  // the expectation of S_z in e^(-m phi) computed directly against the decomposition
  const SpinMatrices<double> S;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> th(1e-3, pi - 1e-3), ph(-pi, pi);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = th(rng), phi = ph(rng);
    const int s = (rng() & 1) ? 1 : -1;
    const Eigen::Vector3cd e = em_expansion(theta, phi, 2, s);
    const double sz = e.dot(S.z * e).real();
    double from_entries = 0.0;
    for (const auto& en : am_decomposition(theta, 2, s).entries) from_entries += en.s_z * en.amplitude * en.amplitude;
    CHECK(sz == doctest::Approx(from_entries).epsilon(1e-12));
    CHECK(sz == doctest::Approx(s * std::cos(theta)).epsilon(1e-12));
  }
}

TEST_CASE("custom chi gradient agrees with the analytic m_phi gradient") {
  const KGrid g(6, 2 * pi);
  const auto analytic = ChiMode::m_phi(2);
  const auto numeric = ChiMode::custom([](double, double phi) { return -2.0 * phi; });
  for (Index p = 0; p < g.size(); ++p) {
    const auto f = g.frame(p);
    CHECK((analytic.gradient(f) - numeric.gradient(f)).norm() < 1e-8 * (1.0 + analytic.gradient(f).norm()));
  }
}

TEST_CASE("longitudinal vector is k_hat and helicity labels are checked") {
  const auto f = frame_from_angles(0.4, 1.1);
  CHECK((longitudinal_vector(f) - f.k_hat.cast<Complex>()).norm() == 0.0);
  CHECK_THROWS_AS(helicity_vector(f, 0), LabelMismatch);
  CHECK_THROWS_AS(require_sigma(2), LabelMismatch);
}
