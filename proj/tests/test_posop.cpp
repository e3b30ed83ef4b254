#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "photonwm/errors.hpp"
#include "photonwm/posop.hpp"

using namespace photonwm;
using std::numbers::pi;

namespace {

const Complex I(0.0, 1.0);

struct Setup {
  KGrid grid;
  PolarizationBasis basis;
};

Setup make(int n, double L, int m = 1) {
  KGrid g(n, L);
  return {g, apply_chi(helicity_vectors_e0(g), m)};
}

double interior_max(const KGrid& g, const FieldMatrix& v) {
  double w = 0.0;
  for (Index p = 0; p < g.size(); ++p)
    if (g.interior(p)) w = std::max(w, v.col(p).norm());
  return w;
}

// Richardson-extrapolated central derivative of a vector-valued function of k.
template <typename F>
auto richardson(const F& f, const Eigen::Vector3d& k, int axis, double h) {
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e(axis) = 1.0;
  auto central = [&](double s) { return ((f(k + s * e) - f(k - s * e)) / (2.0 * s)).eval(); };
  return ((4.0 * central(0.5 * h) - central(h)) / 3.0).eval();
}

Eigen::Matrix3cd rotation_at(const Eigen::Vector3d& k, const ChiMode& chi) {
  const double theta = std::acos(k.z() / k.norm());
  const double phi = std::atan2(k.y(), k.x());
  return rotation_D<double>(theta, phi, chi(theta, phi));
}

}  // namespace

TEST_CASE("alpha labels") {
  CHECK(Alpha::from_value(-0.5) == Alpha::minus_half());
  CHECK(Alpha::from_value(0.5).value() == 0.5);
  CHECK(-Alpha::plus_half() == Alpha::minus_half());
  CHECK_THROWS_AS(Alpha::from_value(0.3), LabelMismatch);
}

TEST_CASE("eigenstate samples are transverse with magnitude omega^alpha / sqrt(V)") {
  const auto s = make(6, 2 * pi * 2);
  for (Alpha a : kAllAlphas) {
    const auto st = position_eigenstate(s.basis, Eigen::Vector3d(1, 2, 3), -1, a, 0.4);
    for (Index p = 0; p < s.grid.size(); ++p) {
      CHECK(std::abs(s.grid.k_hat().col(p).cast<Complex>().dot(st.samples(p))) < 1e-14);
      CHECK(st.samples(p).norm() ==
            doctest::Approx(std::pow(s.grid.omega()(p), a.value()) / std::sqrt(s.grid.volume())).epsilon(1e-13));
    }
  }
}

TEST_CASE("eigenstate at the origin is annihilated") {
  const auto s = make(10, 2 * pi * 3);
  for (Alpha a : kAllAlphas)
    for (int sg : {1, -1}) {
      const auto st = position_eigenstate(s.basis, Eigen::Vector3d::Zero(), sg, a);
      CHECK(eigenvector_residual(st, s.basis).maxCoeff() < 1e-10);
    }
}

TEST_CASE("eigen residual equals the central-difference sinc defect") {
  const auto s = make(12, 2 * pi * 4);
  const Eigen::Vector3d r(1.0, -2.0, 3.0);
  const double dk = s.grid.dk();
  for (Alpha a : kAllAlphas) {
    const auto st = position_eigenstate(s.basis, r, 1, a);
    const Eigen::Vector3d res = eigenvector_residual(st, s.basis);
    for (int ax = 0; ax < 3; ++ax) {
      const double x = r(ax) * dk;
      const double want = std::abs(r(ax)) * (1.0 - std::sin(x) / x);
      CHECK(res(ax) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("eigen residual decreases at least 3.6x when dk halves, both helicities equal") {
  const Eigen::Vector3d r(1, 0, 0);
  for (Alpha a : kAllAlphas) {
    const auto c = make(16, 2 * pi * 4), f = make(32, 2 * pi * 8);
    const double rc = eigenvector_residual(position_eigenstate(c.basis, r, 1, a), c.basis)(0);
    const double rf = eigenvector_residual(position_eigenstate(f.basis, r, 1, a), f.basis)(0);
    CHECK(rc / rf >= 3.6);
    const double rc_minus = eigenvector_residual(position_eigenstate(c.basis, r, -1, a), c.basis)(0);
    CHECK(rc_minus == doctest::Approx(rc).epsilon(0.1));
  }
}

TEST_CASE("four-term and factored operator forms agree pointwise") {
  // Both sides use exact (Richardson) derivatives of smooth functions of k, so this isolates the
  // pointwise matrix M(k) of the four-term form from any grid differencing.
  const int n = 8;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m : {0, 1, -2}) {
    const auto s = make(n, 2 * pi * 2, m);
    const ChiMode& chi = s.basis.chi();
    const double k0 = 0.25 * 0.5 * n * s.grid.dk();
    std::vector<std::pair<Eigen::Vector3cd, Eigen::Vector3d>> terms;
    for (int t = 0; t < 4; ++t)
      terms.push_back({Eigen::Vector3cd(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng))),
                       Eigen::Vector3d(u(rng), u(rng), u(rng)) * (2.0 / k0)});
    auto field = [&](const Eigen::Vector3d& k) {
      Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
      for (const auto& [amp, r] : terms) v += amp * std::polar(1.0, -k.dot(r));
      v *= std::exp(-k.squaredNorm() / (k0 * k0));
      const Eigen::Vector3cd kh = (k / k.norm()).cast<Complex>();
      return Eigen::Vector3cd(v - kh * kh.dot(v));
    };
    for (Alpha a : kAllAlphas) {
      double worst = 0.0, scale = 0.0;
      for (Index p = 0; p < s.grid.size(); ++p) {
        const Eigen::Vector3d k = s.grid.k().col(p);
        auto inner = [&](const Eigen::Vector3d& q) {
          return Eigen::Vector3cd(std::pow(q.norm(), -a.value()) * (rotation_at(q, chi).adjoint() * field(q)));
        };
        const Eigen::Matrix3cd D = rotation_at(k, chi);
        const double wa = std::pow(k.norm(), a.value());
        for (Axis ax : kAllAxes) {
          const int i = axis_index(ax);
          const double h = 1e-3 * s.grid.dk();
          const Eigen::Vector3cd factored = I * wa * (D * richardson(inner, k, i, h));
          const Eigen::Vector3cd four = I * richardson(field, k, i, h) +
                                        position_operator_coefficients(s.basis, a, p, ax) * field(k);
          worst = std::max(worst, (factored - four).norm());
          scale = std::max(scale, factored.norm());
        }
      }
      CAPTURE(m);
      CAPTURE(a.str());
      CHECK(worst / scale < 1e-8);
    }
  }
}

TEST_CASE("commutators: self-commutator is zero, pairs vanish at second order or better") {
  RandomFieldOptions opt;
  for (Alpha a : kAllAlphas) {
    const auto c = make(16, 2 * pi * 4), f = make(32, 2 * pi * 8);
    const auto Fc = random_transverse_field(c.grid, 99, opt);
    const auto Ff = random_transverse_field(f.grid, 99, opt);
    CHECK(commutator_check(c.basis, a, Fc, Axis::x, Axis::x).residual == 0.0);
    for (auto [i, j] : {std::pair{Axis::x, Axis::y}, {Axis::y, Axis::z}, {Axis::z, Axis::x}}) {
      const double rc = commutator_check(c.basis, a, Fc, i, j).residual;
      const double rf = commutator_check(f.basis, a, Ff, i, j).residual;
      CHECK(rc < 5e-2);
      CHECK(convergence_order(rc, rf).passes(1.9));
    }
  }
}

TEST_CASE("commutator_check rejects or projects longitudinal content") {
  const auto s = make(8, 2 * pi * 2);
  VectorField3 f = random_transverse_field(s.grid, 5);
  for (Index p = 0; p < s.grid.size(); ++p) f(p) += 0.1 * s.grid.k_hat().col(p).cast<Complex>();
  CHECK_THROWS_AS(commutator_check(s.basis, Alpha::zero(), f, Axis::x, Axis::y), std::invalid_argument);
  const auto res = commutator_check(s.basis, Alpha::zero(), f, Axis::x, Axis::y, TransversePolicy::project);
  CHECK(res.projected);
  CHECK(res.warnings.size() == 1);
  CHECK(longitudinal_fraction(transverse_projection(f)) < 1e-14);
}

TEST_CASE("LP self product of an eigenstate is N/V") {
  const auto s = make(6, 7.0);
  const auto st = position_eigenstate(s.basis, Eigen::Vector3d(0.3, 0.1, -2.0), 1, Alpha::zero());
  const Complex v = inner_product(st.samples, st.samples);
  CHECK(v.real() == doctest::Approx(double(s.grid.size()) / s.grid.volume()).epsilon(1e-13));
  CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("biorthonormal eigenstate pairs form a discrete delta on the real-space grid") {
  const auto s = make(6, 2 * pi);
  const Index p0 = s.grid.index(2, 4, 1);
  const Eigen::Vector3d r0 = s.grid.r_point(p0);
  for (Alpha a : kAllAlphas) {
    const auto bra = position_eigenstate(s.basis, r0, 1, a);
    Complex total = 0.0;
    double off_peak = 0.0;
    Complex peak = 0.0;
    for (Index q = 0; q < s.grid.size(); ++q) {
      const auto ket = position_eigenstate(s.basis, s.grid.r_point(q), 1, -a);
      const Complex v = biorthonormal_product(bra.samples, a, ket.samples, -a);
      total += v * s.grid.cell_volume();
      if (q == p0)
        peak = v;
      else
        off_peak = std::max(off_peak, std::abs(v));
    }
    CHECK(peak.real() == doctest::Approx(1.0 / s.grid.cell_volume()).epsilon(1e-12));
    CHECK(off_peak < 1e-12 * std::abs(peak));
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  const auto st = position_eigenstate(s.basis, r0, 1, Alpha::zero());
  CHECK_THROWS_AS(biorthonormal_product(st.samples, Alpha::plus_half(), st.samples, Alpha::zero()), LabelMismatch);
}

TEST_CASE("biorthonormal product of mapped pairs equals the LP product for 100 random pairs") {
  const auto s = make(8, 2 * pi * 2);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto F = random_transverse_field(s.grid, 2 * seed + 1);
    const auto G = random_transverse_field(s.grid, 2 * seed + 2);
    const Complex lp = inner_product(F, G);
    const Complex bi = biorthonormal_product(similarity_map(F, Alpha::zero(), Alpha::plus_half()), Alpha::plus_half(),
                                             similarity_map(G, Alpha::zero(), Alpha::minus_half()),
                                             Alpha::minus_half());
    worst = std::max(worst, std::abs(bi - lp) / std::abs(lp));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("similarity map: definition, round trip, operator conjugation, eigenvalue preservation") {
  const auto s = make(12, 2 * pi * 4);
  const Eigen::Vector3d r(1, 2, 3);
  const auto psi0 = position_eigenstate(s.basis, r, 1, Alpha::zero());
  const auto psih = position_eigenstate(s.basis, r, 1, Alpha::plus_half());
  const auto mapped = similarity_map(psi0.samples, Alpha::zero(), Alpha::plus_half());
  CHECK((mapped.values() - psih.samples.values()).norm() <= 1e-15 * psih.samples.values().norm());

  const auto F = random_transverse_field(s.grid, 3);
  const auto back = similarity_map(similarity_map(F, Alpha::minus_half(), Alpha::plus_half()), Alpha::plus_half(),
                                   Alpha::minus_half());
  CHECK((back.values() - F.values()).norm() <= 1e-14 * F.values().norm());

  const PositionOperator r0(s.basis, Alpha::zero()), rh(s.basis, Alpha::plus_half());
  for (Axis ax : kAllAxes) {
    const auto conj = similarity_map(r0.apply(similarity_map(F, Alpha::plus_half(), Alpha::zero()), ax),
                                     Alpha::zero(), Alpha::plus_half());
    const auto direct = rh.apply(F, ax);
    CHECK(interior_max(s.grid, conj.values() - direct.values()) < 1e-8 * interior_max(s.grid, direct.values()));
  }

  const double e0 = eigenvector_residual(psi0, s.basis).norm();
  const PositionEigenstate mapped_state{r, 1, Alpha::plus_half(), 0.0, mapped};
  CHECK(eigenvector_residual(mapped_state, s.basis).norm() == doctest::Approx(e0).epsilon(0.1));
}

TEST_CASE("adjoint structure: Hermitian at alpha = 0, paired at +-1/2, real expectations") {
  double prev_h = 1.0;
  for (int level = 0; level < 2; ++level) {
    const auto s = make(16 << level, 2 * pi * (4 << level));
    RandomFieldOptions tight;
    tight.envelope_fraction = 0.2;
    const auto F = random_transverse_field(s.grid, 7, tight);
    const auto G = random_transverse_field(s.grid, 8, tight);
    const auto rep = adjoint_check(s.basis, F, G);
    CHECK(rep.warnings.empty());
    CHECK(rep.hermitian_defect < 1e-3);
    CHECK(rep.pair_defect < 1e-3);
    CHECK(rep.pair_defect < 10.0 * std::max(rep.hermitian_defect, 1e-12));
    CHECK(rep.expectation_imag < 1e-10);
    CHECK((rep.hermitian_defect <= prev_h || rep.hermitian_defect < 1e-10));
    prev_h = rep.hermitian_defect;
  }
}

TEST_CASE("adjoint_check warns about boundary support") {
  const auto s = make(8, 2 * pi * 2);
  VectorField3 F(s.grid, Domain::kspace);
  for (Index p = 0; p < s.grid.size(); ++p) F(p) = s.basis.vector(p, 1);
  const auto rep = adjoint_check(s.basis, F, F);
  CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("the 1/k weighted product makes the field-like operator Hermitian") {
  const auto s = make(16, 2 * pi * 4);
  const auto F = random_transverse_field(s.grid, 21);
  const auto G = random_transverse_field(s.grid, 22);
  const PositionOperator rh(s.basis, Alpha::plus_half());
  for (Axis ax : kAllAxes) {
    const Complex lhs = field_theory_product(F, rh.apply(G, ax));
    const Complex rhs = field_theory_product(rh.apply(F, ax), G);
    CHECK(std::abs(lhs - rhs) < 1e-8 * (std::abs(lhs) + std::abs(rhs)));
  }
}

TEST_CASE("random transverse fields are seeded, transverse and small at the boundary") {
  const auto s = make(12, 2 * pi * 3);
  const auto a = random_transverse_field(s.grid, 1234), b = random_transverse_field(s.grid, 1234);
  CHECK((a.values() - b.values()).norm() == 0.0);
  CHECK(longitudinal_fraction(a) < 1e-14);
  CHECK((a.values() - random_transverse_field(s.grid, 1235).values()).norm() > 0.0);
}

TEST_CASE("convergence_order helper") {
  const auto c = convergence_order(4e-3, 1e-3);
  CHECK(c.order == doctest::Approx(2.0));
  CHECK(c.passes(1.9));
  CHECK(convergence_order(1e-16, 2e-16).exact);
  CHECK_FALSE(convergence_order(1e-3, 9e-4).passes(1.9));
}
