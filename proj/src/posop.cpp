#include "photonwm/posop.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "photonwm/errors.hpp"

namespace photonwm {

namespace {

const Complex I(0.0, 1.0);

double interior_norm(const KGrid& g, const FieldMatrix& v) { return field_norm(VectorField3(g, Domain::kspace, v), 1); }

double max_norm(const FieldMatrix& v) {
  double m = 0.0;
  for (Index p = 0; p < v.cols(); ++p) m = std::max(m, v.col(p).norm());
  return m;
}

// Largest |F| on the outermost layer relative to the global maximum.
double boundary_fraction(const VectorField3& f) {
  double edge = 0.0;
  for (Index p = 0; p < f.size(); ++p) {
    if (!f.grid().interior(p, 1)) edge = std::max(edge, f.values().col(p).norm());
  }
  const double all = max_norm(f.values());
  return all > 0.0 ? edge / all : 0.0;
}

}  // namespace

Alpha Alpha::from_value(double v) {
  if (v == -0.5) return minus_half();
  if (v == 0.0) return zero();
  if (v == 0.5) return plus_half();
  std::ostringstream msg;
  msg << "alpha must be -0.5, 0 or 0.5, got " << v;
  throw LabelMismatch(msg.str());
}

std::string Alpha::str() const {
  if (twice_ < 0) return "-1/2";
  if (twice_ > 0) return "+1/2";
  return "0";
}

std::string to_string(Discretization d) { return d == Discretization::rotated_frame ? "rotated_frame" : "four_term"; }

Eigen::VectorXd omega_power(const KGrid& grid, double exponent) {
  if (exponent == 0.0) return Eigen::VectorXd::Ones(grid.size());
  return grid.omega().array().pow(exponent).matrix();
}

Eigen::Matrix3cd position_operator_coefficients(const PolarizationBasis& basis, Alpha alpha, Index p, Axis axis) {
  const KGrid& g = basis.grid();
  const SphericalFrame f = g.frame(p);
  const int a = axis_index(axis);
  const SpinMatrices<double> S;
  const Eigen::Matrix3cd Sk = S.helicity(f.k_hat);
  const double inv_k = g.inv_k()(p);

  Eigen::Matrix3cd m = Eigen::Matrix3cd::Identity() * (-I * alpha.value() * f.k_hat(a) * inv_k);
  // (k_hat x S)_a = eps_abc k_hat_b S_c
  const int b = (a + 1) % 3, c = (a + 2) % 3;
  m += (f.k_hat(b) * S[c] - f.k_hat(c) * S[b]) * inv_k;
  m -= Sk * (f.phi_hat(a) * g.cot_theta()(p) * inv_k);
  m -= Sk * basis.chi().gradient(f)(a);
  return m;
}

PositionOperator::PositionOperator(PolarizationBasis basis, Alpha alpha, Discretization d)
    : basis_(std::move(basis)), alpha_(alpha), disc_(d) {
  const KGrid& g = basis_.grid();
  w_alpha_ = omega_power(g, alpha_.value());
  if (disc_ == Discretization::rotated_frame) {
    rot_.resize(static_cast<std::size_t>(g.size()));
#pragma omp parallel for
    for (Index p = 0; p < g.size(); ++p) rot_[static_cast<std::size_t>(p)] = basis_.rotation(p);
  }
}

VectorField3 PositionOperator::apply(const VectorField3& field, Axis axis) const {
  require_same_grid(field.grid(), basis_.grid(), "position operator");
  if (field.domain() != Domain::kspace) throw std::invalid_argument("position operator acts on k-space fields");
  const KGrid& g = basis_.grid();
  const Index N = g.size();

  if (disc_ == Discretization::rotated_frame) {
    FieldMatrix inner(3, N);
#pragma omp parallel for
    for (Index p = 0; p < N; ++p) {
      inner.col(p) = rot_[static_cast<std::size_t>(p)].adjoint() * field.values().col(p) / w_alpha_(p);
    }
    VectorField3 d = k_gradient(VectorField3(g, Domain::kspace, std::move(inner)), axis);
    FieldMatrix out(3, N);
#pragma omp parallel for
    for (Index p = 0; p < N; ++p) {
      out.col(p) = I * w_alpha_(p) * (rot_[static_cast<std::size_t>(p)] * d.values().col(p));
    }
    return {g, Domain::kspace, std::move(out)};
  }

  VectorField3 d = k_gradient(field, axis);
  FieldMatrix out(3, N);
#pragma omp parallel for
  for (Index p = 0; p < N; ++p) {
    out.col(p) = I * d.values().col(p) + position_operator_coefficients(basis_, alpha_, p, axis) * field.values().col(p);
  }
  return {g, Domain::kspace, std::move(out)};
}

VectorField3 apply_position_operator(const VectorField3& field, const PolarizationBasis& basis, Alpha alpha, Axis axis,
                                     Discretization d) {
  return PositionOperator(basis, alpha, d).apply(field, axis);
}

PositionEigenstate position_eigenstate(const PolarizationBasis& basis, const Eigen::Vector3d& r, int sigma, Alpha alpha,
                                       double t) {
  require_sigma(sigma);
  const KGrid& g = basis.grid();
  const Eigen::VectorXd w = omega_power(g, alpha.value());
  const double norm = 1.0 / std::sqrt(g.volume());
  FieldMatrix v(3, g.size());
  for (Index p = 0; p < g.size(); ++p) {
    const double phase = -g.k().col(p).dot(r) + g.omega()(p) * t;
    v.col(p) = basis.vector(p, sigma) * (std::polar(norm, phase) * w(p));
  }
  return {r, sigma, alpha, t, VectorField3(g, Domain::kspace, std::move(v))};
}

Eigen::Vector3d eigenvector_residual(const PositionEigenstate& state, const PolarizationBasis& basis, Discretization d) {
  const PositionOperator op(basis, state.alpha, d);
  const KGrid& g = basis.grid();
  const double ref = field_norm(state.samples, 1);
  Eigen::Vector3d out;
  for (Axis ax : kAllAxes) {
    const int a = axis_index(ax);
    FieldMatrix diff = op.apply(state.samples, ax).values() - state.r(a) * state.samples.values();
    out(a) = interior_norm(g, diff) / ref;
  }
  return out;
}

double longitudinal_fraction(const VectorField3& field) {
  const KGrid& g = field.grid();
  double lon = 0.0;
  for (Index p = 0; p < g.size(); ++p) {
    lon = std::max(lon, std::abs(g.k_hat().col(p).cast<Complex>().dot(field.values().col(p))));
  }
  const double all = max_norm(field.values());
  return all > 0.0 ? lon / all : 0.0;
}

VectorField3 transverse_projection(const VectorField3& field) {
  const KGrid& g = field.grid();
  FieldMatrix v = field.values();
  for (Index p = 0; p < g.size(); ++p) {
    const Eigen::Vector3cd kh = g.k_hat().col(p).cast<Complex>();
    v.col(p) -= kh * kh.dot(v.col(p));
  }
  return {g, field.domain(), std::move(v)};
}

CommutatorResult commutator_check(const PolarizationBasis& basis, Alpha alpha, const VectorField3& field, Axis i,
                                  Axis j, TransversePolicy policy, Discretization d) {
  require_same_grid(field.grid(), basis.grid(), "commutator_check");
  CommutatorResult res;
  VectorField3 f = field;
  const double lon = longitudinal_fraction(field);
  if (lon > 1e-12) {
    if (policy == TransversePolicy::reject) {
      std::ostringstream msg;
      msg << "commutator test field is not transverse (max |k_hat.F|/max|F| = " << lon << ")";
      throw std::invalid_argument(msg.str());
    }
    f = transverse_projection(field);
    res.projected = true;
    std::ostringstream msg;
    msg << "test field projected onto transverse modes (longitudinal fraction " << lon << ")";
    res.warnings.push_back(msg.str());
  }
  if (i == j) return res;
  const PositionOperator op(basis, alpha, d);
  FieldMatrix c = op.apply(op.apply(f, j), i).values() - op.apply(op.apply(f, i), j).values();
  res.residual = interior_norm(basis.grid(), c) / field_norm(f, 1);
  return res;
}

Complex inner_product(const VectorField3& bra, const VectorField3& ket, ProductMode) {
  require_same_grid(bra.grid(), ket.grid(), "inner_product");
  return dot(bra.values(), ket.values());
}

Complex biorthonormal_product(const VectorField3& bra, Alpha bra_alpha, const VectorField3& ket, Alpha ket_alpha) {
  if (!(ket_alpha == -bra_alpha)) {
    throw LabelMismatch("biorthonormal product pairs alpha " + bra_alpha.str() + " with " + (-bra_alpha).str() +
                        ", got " + ket_alpha.str());
  }
  return inner_product(bra, ket, ProductMode::biorthonormal);
}

Complex field_theory_product(const VectorField3& bra, const VectorField3& ket) {
  require_same_grid(bra.grid(), ket.grid(), "field_theory_product");
  FieldMatrix weighted = ket.values();
  for (Index p = 0; p < weighted.cols(); ++p) weighted.col(p) *= bra.grid().inv_k()(p);
  return dot(bra.values(), weighted);
}

VectorField3 similarity_map(const VectorField3& field, Alpha from, Alpha to) {
  const Eigen::VectorXd w = omega_power(field.grid(), to.value() - from.value());
  FieldMatrix v = field.values();
  for (Index p = 0; p < v.cols(); ++p) v.col(p) *= w(p);
  return {field.grid(), field.domain(), std::move(v)};
}

AdjointReport adjoint_check(const PolarizationBasis& basis, const VectorField3& f, const VectorField3& g,
                            Discretization d) {
  require_same_grid(f.grid(), basis.grid(), "adjoint_check");
  require_same_grid(g.grid(), basis.grid(), "adjoint_check");
  AdjointReport rep;
  for (const VectorField3* x : {&f, &g}) {
    const double edge = boundary_fraction(*x);
    if (edge > 1e-6) {
      std::ostringstream msg;
      msg << "field has boundary support (edge/max = " << edge
          << "); one-sided stencils break summation by parts there";
      rep.warnings.push_back(msg.str());
    }
  }
  const PositionOperator r0(basis, Alpha::zero(), d);
  const PositionOperator rp(basis, Alpha::plus_half(), d);
  const PositionOperator rm(basis, Alpha::minus_half(), d);
  auto nrm = [](const VectorField3& v) { return std::sqrt(std::abs(dot(v.values(), v.values()))); };
  const double nf = nrm(f), ng = nrm(g);
  for (Axis ax : kAllAxes) {
    const VectorField3 r0g = r0.apply(g, ax), r0f = r0.apply(f, ax);
    const Complex lhs = inner_product(f, r0g), rhs = inner_product(r0f, g);
    rep.hermitian_defect =
        std::max(rep.hermitian_defect, std::abs(lhs - rhs) / (nf * nrm(r0g) + nrm(r0f) * ng));

    const VectorField3 rpg = rp.apply(g, ax), rmf = rm.apply(f, ax);
    const Complex lp = inner_product(f, rpg), rpair = inner_product(rmf, g);
    rep.pair_defect = std::max(rep.pair_defect, std::abs(lp - rpair) / (nf * nrm(rpg) + nrm(rmf) * ng));

    const Complex e = inner_product(f, r0f);
    rep.expectation_imag = std::max(rep.expectation_imag, std::abs(e.imag()) / (nf * nrm(r0f)));
  }
  return rep;
}

VectorField3 random_transverse_field(const KGrid& grid, std::uint64_t seed, const RandomFieldOptions& opt) {
  if (opt.terms < 1) throw std::invalid_argument("random field needs at least one term");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double k_max = 0.5 * grid.n() * grid.dk();
  const double k0 = opt.envelope_fraction * k_max;
  const double spread = opt.position_spread / k0;

  struct Term {
    Eigen::Vector3cd amp;
    Eigen::Vector3d r;
  };
  std::vector<Term> terms(static_cast<std::size_t>(opt.terms));
  for (auto& t : terms) {
    for (int c = 0; c < 3; ++c) t.amp(c) = Complex(uni(rng), uni(rng));
    for (int c = 0; c < 3; ++c) t.r(c) = spread * uni(rng);
  }

  FieldMatrix v(3, grid.size());
#pragma omp parallel for
  for (Index p = 0; p < grid.size(); ++p) {
    const Eigen::Vector3d k = grid.k().col(p);
    Eigen::Vector3cd s = Eigen::Vector3cd::Zero();
    for (const auto& t : terms) s += t.amp * std::polar(1.0, -k.dot(t.r));
    s *= std::exp(-k.squaredNorm() / (k0 * k0));
    const Eigen::Vector3cd kh = grid.k_hat().col(p).cast<Complex>();
    v.col(p) = s - kh * kh.dot(s);
  }
  return {grid, Domain::kspace, std::move(v)};
}

ConvergenceOrder convergence_order(double coarse, double fine, double refinement, double floor) {
  ConvergenceOrder c;
  c.coarse = coarse;
  c.fine = fine;
  c.exact = coarse < floor && fine < floor;
  if (coarse > 0.0 && fine > 0.0) c.order = std::log(coarse / fine) / std::log(refinement);
  return c;
}

}  // namespace photonwm
