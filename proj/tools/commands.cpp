#include "commands.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "photonwm/errors.hpp"
#include "photonwm/observables.hpp"
#include "photonwm/posop.hpp"
#include "photonwm/spectral.hpp"
#include "photonwm/two_photon.hpp"
#include "report.hpp"

namespace pwm_cli {

using namespace photonwm;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

ordered_json vec(const Eigen::Vector3d& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

ordered_json cplx(Complex z) {
  ordered_json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

ordered_json grid_summary(const KGrid& g) {
  ordered_json j;
  j["n"] = g.n();
  j["L"] = g.box_length();
  j["dk"] = g.dk();
  j["dr"] = g.dr();
  j["units"] = g.constants() == PhysicalConstants::si() ? "si" : "natural";
  return j;
}

Discretization read_discretization(Section& run) {
  return run.text("discretization", "rotated_frame", {"rotated_frame", "four_term"}) == "four_term"
             ? Discretization::four_term
             : Discretization::rotated_frame;
}

int finish(Report& rep, const fs::path& out) {
  rep.write(out);
  return rep.passed() ? 0 : 1;
}

/// Interior maximum of the columnwise norm.
double interior_max(const KGrid& g, const FieldMatrix& v) {
  double w = 0.0;
  for (Index p = 0; p < g.size(); ++p)
    if (g.interior(p)) w = std::max(w, v.col(p).norm());
  return w;
}

// ---------------------------------------------------------------------------------------------

int operator_check(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"grid", "basis", "run"});
  const KGrid coarse = read_grid(root.child("grid"));
  const PolarizationBasis bc = read_basis(coarse, root.child("basis", false));
  Section run = root.child("run", false);
  run.allow({"positions", "seed", "seeds", "pairs", "adjoint_envelope", "discretization", "tolerances"});
  const auto positions =
      run.points("positions", std::vector<Eigen::Vector3d>{{1, 0, 0}, {1, 2, 3}, {-2.5, 1.5, 0.5}});
  const std::uint64_t seed = run.seed("seed", 1);
  const int seeds = run.integer("seeds", 3);
  const int pairs = run.integer("pairs", 20);
  const double adjoint_envelope = run.number("adjoint_envelope", 0.2);
  const Discretization disc = read_discretization(run);
  if (seeds < 1 || pairs < 1) throw ConfigError("run.seeds and run.pairs must be >= 1");
  Tolerances tol({{"min_order", 1.9},
                  {"eigen_residual", 0.5},
                  {"commutator", 1e-2},
                  {"similarity", 1e-8},
                  {"biorthonormal", 1e-12},
                  {"adjoint_defect", 1e-3},
                  {"adjoint_imag", 1e-10}});
  tol.apply(run);
  Report rep("operator-check", sc, tol);

  // refinement halves dk at fixed k_max
  const KGrid fine(2 * coarse.n(), 2 * coarse.box_length(), coarse.constants(), coarse.offset());
  const PolarizationBasis bf = apply_chi(helicity_vectors_e0(fine), bc.chi());
  rep.results["coarse_grid"] = grid_summary(coarse);
  rep.results["fine_grid"] = grid_summary(fine);
  rep.results["discretization"] = to_string(disc);

  auto order_json = [](const ConvergenceOrder& c) {
    ordered_json j;
    j["coarse"] = c.coarse;
    j["fine"] = c.fine;
    j["order"] = c.exact ? ordered_json("exact") : ordered_json(c.order);
    return j;
  };

  // eigenvectors
  std::optional<double> eigen_order;
  double eigen_fine = 0.0;
  ordered_json eig = ordered_json::array();
  for (const Eigen::Vector3d& r : positions)
    for (Alpha a : kAllAlphas)
      for (int sg : {1, -1}) {
        const Eigen::Vector3d rc = eigenvector_residual(position_eigenstate(bc, r, sg, a), bc, disc);
        const Eigen::Vector3d rf = eigenvector_residual(position_eigenstate(bf, r, sg, a), bf, disc);
        ordered_json e;
        e["r"] = vec(r);
        e["alpha"] = a.value();
        e["sigma"] = sg;
        ordered_json axes = ordered_json::array();
        for (int ax = 0; ax < 3; ++ax) {
          const ConvergenceOrder c = convergence_order(rc(ax), rf(ax));
          axes.push_back(order_json(c));
          if (!c.exact) eigen_order = std::min(eigen_order.value_or(INFINITY), c.order);
          eigen_fine = std::max(eigen_fine, rf(ax));
        }
        e["axes"] = axes;
        eig.push_back(e);
      }
  rep.results["eigenvector"] = eig;
  rep.at_least("eigenvector_order", eigen_order, tol["min_order"]);
  rep.below("eigenvector_residual_fine", eigen_fine, tol["eigen_residual"]);

  // commutators
  std::optional<double> comm_order;
  double comm_fine = 0.0;
  ordered_json comm = ordered_json::array();
  const char* names[] = {"x", "y", "z"};
  for (int s = 0; s < seeds; ++s) {
    const auto Fc = random_transverse_field(coarse, seed + s), Ff = random_transverse_field(fine, seed + s);
    for (Alpha a : kAllAlphas)
      for (auto [i, j] : {std::pair{Axis::x, Axis::y}, {Axis::y, Axis::z}, {Axis::z, Axis::x}}) {
        const CommutatorResult rc = commutator_check(bc, a, Fc, i, j, TransversePolicy::reject, disc);
        const CommutatorResult rf = commutator_check(bf, a, Ff, i, j, TransversePolicy::reject, disc);
        const ConvergenceOrder c = convergence_order(rc.residual, rf.residual);
        ordered_json e = order_json(c);
        e["seed"] = seed + s;
        e["alpha"] = a.value();
        e["pair"] = std::string(names[axis_index(i)]) + names[axis_index(j)];
        comm.push_back(e);
        if (!c.exact) comm_order = std::min(comm_order.value_or(INFINITY), c.order);
        comm_fine = std::max(comm_fine, rf.residual);
        for (const auto& w : rf.warnings) rep.warnings.push_back("commutator: " + w);
      }
  }
  rep.results["commutator"] = comm;
  rep.at_least("commutator_order", comm_order, tol["min_order"]);
  rep.below("commutator_residual_fine", comm_fine, tol["commutator"]);

  // similarity: r(a) = w^a r(0) w^-a, and the biorthonormal product of mapped pairs is the LP product
  double conj = 0.0, bi = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto F = random_transverse_field(coarse, seed + s);
    const PositionOperator r0(bc, Alpha::zero(), disc);
    for (Alpha a : {Alpha::minus_half(), Alpha::plus_half()}) {
      const PositionOperator ra(bc, a, disc);
      for (Axis ax : kAllAxes) {
        const auto via = similarity_map(r0.apply(similarity_map(F, a, Alpha::zero()), ax), Alpha::zero(), a);
        const auto direct = ra.apply(F, ax);
        conj = std::max(conj,
                        interior_max(coarse, via.values() - direct.values()) / interior_max(coarse, direct.values()));
      }
    }
  }
  for (int s = 0; s < pairs; ++s) {
    const auto F = random_transverse_field(coarse, seed + 2 * s + 1000);
    const auto G = random_transverse_field(coarse, seed + 2 * s + 1001);
    const Complex lp = inner_product(F, G);
    const Complex b =
        biorthonormal_product(similarity_map(F, Alpha::zero(), Alpha::plus_half()), Alpha::plus_half(),
                              similarity_map(G, Alpha::zero(), Alpha::minus_half()), Alpha::minus_half());
    bi = std::max(bi, std::abs(b - lp) / std::abs(lp));
  }
  rep.results["similarity_conjugation"] = conj;
  rep.results["biorthonormal_vs_lp"] = bi;
  rep.below("similarity_conjugation", conj, tol["similarity"]);
  rep.below("biorthonormal_product", bi, tol["biorthonormal"]);

  // adjoint structure, on fields well inside the box
  RandomFieldOptions tight;
  tight.envelope_fraction = adjoint_envelope;
  double herm = 0.0, pair = 0.0, imag = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto F = random_transverse_field(coarse, seed + 2 * s + 5000, tight);
    const auto G = random_transverse_field(coarse, seed + 2 * s + 5001, tight);
    const AdjointReport a = adjoint_check(bc, F, G, disc);
    herm = std::max(herm, a.hermitian_defect);
    pair = std::max(pair, a.pair_defect);
    imag = std::max(imag, a.expectation_imag);
    for (const auto& w : a.warnings) rep.warnings.push_back("adjoint: " + w);
  }
  ordered_json adj;
  adj["hermitian_defect"] = herm;
  adj["pair_defect"] = pair;
  adj["expectation_imag"] = imag;
  rep.results["adjoint"] = adj;
  rep.below("adjoint_hermitian_defect", herm, tol["adjoint_defect"]);
  rep.below("adjoint_pair_defect", pair, tol["adjoint_defect"]);
  rep.below("adjoint_expectation_imag", imag, tol["adjoint_imag"]);
  return finish(rep, out);
}

// ---------------------------------------------------------------------------------------------

Envelope read_envelope(Section e) {
  e.allow({"kind", "center", "width"});
  const std::string kind = e.text("kind", "gaussian", {"none", "gaussian", "shell"});
  if (kind == "gaussian") return Envelope::gaussian(e.number("width", 0.5));
  if (kind == "shell") return Envelope::shell(e.number("center", 0.5), e.number("width", 0.125));
  return Envelope::none();
}

/// Net phase winding of samples taken in order around a closed loop.
double winding(const Eigen::VectorXcd& u) {
  double total = 0.0;
  for (Index j = 0; j < u.size(); ++j) total += std::arg(u((j + 1) % u.size()) / u(j));
  return total / (2 * pi);
}

int localized_cmd(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"grid", "basis", "run"});
  const KGrid grid = read_grid(root.child("grid"));
  const PolarizationBasis basis = read_basis(grid, root.child("basis", false));
  Section run = root.child("run");
  run.allow({"r0", "sigma", "alpha", "t", "envelope", "loop", "tolerances"});
  const Eigen::Vector3d r0 = run.vec3("r0", Eigen::Vector3d::Zero());
  const int sigma = read_sigma(run, "sigma", 1);
  const Alpha alpha = read_alpha(run, "alpha", 0.0);
  const double t = run.number("t", 0.0);
  const Envelope env = read_envelope(run.child("envelope", false));
  Section loop = run.child("loop", false);
  loop.allow({"radius", "height", "points"});
  const double radius = loop.number("radius", 2.0 * grid.dr());
  const double height = loop.number("height", 0.0);
  const int points = loop.integer("points", 64);
  if (!(radius > 0.0) || points < 8) throw ConfigError("run.loop needs radius > 0 and at least 8 points");
  Tolerances tol({{"winding", 1e-6}, {"loop_amplitude", 1e-8}});
  tol.apply(run);
  Report rep("localized", sc, tol);

  const PhotonState state = localized(grid, r0, sigma, env);
  const WaveField psi = synthesize_one_photon(state, basis, alpha, sigma, t);
  const FieldMatrix& v = psi.field.values();

  CsvWriter csv(out / "localized.csv", rep,
                {"x", "y", "z", "re_x", "im_x", "re_y", "im_y", "re_z", "im_z", "abs2"});
  Index peak = 0;
  double peak_value = -1.0;
  for (Index p = 0; p < grid.size(); ++p) {
    const Eigen::Vector3d r = grid.r_point(p);
    const double a2 = v.col(p).squaredNorm();
    if (a2 > peak_value) {
      peak_value = a2;
      peak = p;
    }
    csv.row({r.x(), r.y(), r.z(), v(0, p).real(), v(0, p).imag(), v(1, p).real(), v(1, p).imag(), v(2, p).real(),
             v(2, p).imag(), a2});
  }
  const Eigen::Vector3d rp = grid.r_point(peak);
  ordered_json pk;
  pk["point"] = vec(rp);
  pk["abs2"] = peak_value;
  pk["distance_to_r0"] = (rp - r0).norm();
  rep.results["peak"] = pk;
  // the peak moves off r0 once the state spreads, so the location check applies at t = 0
  if (t == 0.0) rep.below("peak_distance_to_r0", (rp - r0).norm(), 0.5 * std::sqrt(3.0) * grid.dr() * (1 + 1e-12));

  // circular components u_s = (x - i s y) . psi / sqrt2 and u_0 = z . psi wind as m sigma - s
  Eigen::Matrix3Xd ring(3, points);
  for (int j = 0; j < points; ++j) {
    const double phi = 2 * pi * j / points;
    ring.col(j) = r0 + Eigen::Vector3d(radius * std::cos(phi), radius * std::sin(phi), height);
  }
  const FieldMatrix on_ring = synthesize_at(one_photon_coefficients(state, basis, alpha, sigma, t), ring);
  const int m = basis.chi().kind() == ChiMode::Kind::m_phi ? basis.chi().m() : 0;
  const double scale = std::sqrt(peak_value);
  ordered_json wind = ordered_json::array();
  for (int s : {-1, 0, 1}) {
    Eigen::VectorXcd u(points);
    for (int j = 0; j < points; ++j)
      u(j) = s == 0 ? on_ring(2, j) : (on_ring(0, j) - Complex(0, s) * on_ring(1, j)) / std::sqrt(2.0);
    const double min_amp = u.cwiseAbs().minCoeff() / scale;
    const double w = winding(u);
    const int expected = m * sigma - s;
    ordered_json e;
    e["s_z"] = s;
    e["winding"] = w;
    e["expected"] = expected;
    e["min_relative_amplitude"] = min_amp;
    wind.push_back(e);
    // the phase is undefined where the component vanishes on the loop
    if (min_amp > tol["loop_amplitude"])
      rep.below("winding_s" + std::to_string(s), std::abs(w - expected), tol["winding"]);
    else
      rep.warnings.push_back("component s_z = " + std::to_string(s) + " vanishes on the loop; winding not checked");
  }
  ordered_json lp;
  lp["center"] = vec(r0 + Eigen::Vector3d(0, 0, height));
  lp["radius"] = radius;
  lp["points"] = points;
  lp["components"] = wind;
  rep.results["loop"] = lp;
  rep.results["m"] = m;
  return finish(rep, out);
}

// ---------------------------------------------------------------------------------------------

Eigen::Vector3d centroid(const KGrid& g, const Eigen::VectorXd& n) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  double w = 0.0;
  for (Index p = 0; p < g.size(); ++p) {
    c += n(p) * g.r_point(p);
    w += n(p);
  }
  return c / w;
}

double coefficient_distance(const PhotonState& a, const PhotonState& b) {
  double d = 0.0;
  for (int s : {1, -1}) d = std::max(d, (a.c1(s) - b.c1(s)).cwiseAbs().maxCoeff());
  for (const auto& [k, v] : a.c2()) d = std::max(d, std::abs(v - b.c2(k.first, k.second)));
  return d;
}

int evolve_cmd(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"grid", "basis", "state", "run"});
  const KGrid grid = read_grid(root.child("grid"));
  const PolarizationBasis basis = read_basis(grid, root.child("basis", false));
  const PhotonState state = read_one_photon_state(grid, root.child("state"));
  Section run = root.child("run", false);
  run.allow({"alpha", "t0", "dt", "steps", "tolerances"});
  const Alpha alpha = read_alpha(run, "alpha", 0.0);
  const double t0 = run.number("t0", 0.0);
  const double dt = run.number("dt", 0.5 * grid.dr() / grid.constants().c());
  const int steps = run.integer("steps", 8);
  if (steps < 1) throw ConfigError("run.steps must be >= 1");
  Tolerances tol({{"norm", 1e-12}, {"group_law", 1e-12}});
  tol.apply(run);
  Report rep("evolve", sc, tol);

  CsvWriter csv(out / "evolve.csv", rep,
                {"t", "norm", "re_total_n", "im_total_n", "centroid_x", "centroid_y", "centroid_z"});
  PhotonState s = evolve(state, t0);
  double norm_drift = 0.0, total_drift = 0.0, group = 0.0;
  const double norm0 = state.norm_squared();
  Complex total0;
  Eigen::Vector3d c_first, c_last;
  for (int i = 0; i <= steps; ++i) {
    const double t = t0 + i * dt;
    const DensityReport d = density(s, basis, alpha, 0.0);
    const Eigen::Vector3d c = centroid(grid, d.real_n());
    if (i == 0) {
      total0 = d.total_n;
      c_first = c;
    }
    c_last = c;
    norm_drift = std::max(norm_drift, std::abs(s.norm_squared() - norm0));
    total_drift = std::max(total_drift, std::abs(d.total_n - total0));
    csv.row({t, s.norm_squared(), d.total_n.real(), d.total_n.imag(), c.x(), c.y(), c.z()});
    if (i < steps) {
      const PhotonState next = evolve(s, dt);
      // U(dt) U(dt) = U(2 dt)
      group = std::max(group, coefficient_distance(evolve(next, dt), evolve(s, 2 * dt)));
      s = next;
    }
  }
  rep.results["norm_drift"] = norm_drift;
  rep.results["density_total_drift"] = total_drift;
  rep.results["group_law_defect"] = group;
  rep.results["centroid_velocity"] = vec((c_last - c_first) / (steps * dt));
  rep.below("norm_conservation", norm_drift, tol["norm"]);
  rep.below("density_total_conservation", total_drift, tol["norm"]);
  rep.below("group_law", group, tol["group_law"]);
  return finish(rep, out);
}

// ---------------------------------------------------------------------------------------------

int density_cmd(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"grid", "basis", "state", "run"});
  const KGrid grid = read_grid(root.child("grid"));
  const PolarizationBasis basis = read_basis(grid, root.child("basis", false));
  const PhotonState state = read_one_photon_state(grid, root.child("state"));
  Section run = root.child("run", false);
  run.allow({"alpha", "t", "dt_probe", "tolerances"});
  const Alpha alpha = read_alpha(run, "alpha", 0.0);
  const double t = run.number("t", 0.0);
  const double dt_probe = run.number("dt_probe", 0.0);
  Tolerances tol({{"total", 1e-10}, {"continuity", 1e-9}});
  tol.apply(run);
  Report rep("density", sc, tol);

  const double number = state.photon_number();
  ordered_json totals = ordered_json::object();
  for (Alpha a : kAllAlphas) {
    const DensityReport d = density(state, basis, a, t);
    ordered_json e;
    e["total_n"] = cplx(d.total_n);
    e["total_j"] = ordered_json::array({cplx(d.total_j.x()), cplx(d.total_j.y()), cplx(d.total_j.z())});
    e["max_imag_n"] = d.max_imag_n;
    e["min_real_n"] = d.min_real_n;
    totals[a.str()] = e;
  }
  rep.results["photon_number"] = number;
  rep.results["totals"] = totals;

  const DensityReport d = density(state, basis, alpha, t);
  const ContinuityReport cont = continuity_residual(state, basis, alpha, t, dt_probe);
  ordered_json c;
  c["alpha"] = alpha.value();
  c["relative"] = cont.relative;
  c["dn_dt_norm"] = cont.dn_dt_norm;
  c["div_j_norm"] = cont.div_j_norm;
  c["oversampling"] = cont.oversampling;
  if (dt_probe > 0.0) c["probe_defect"] = cont.probe_defect;
  rep.results["continuity"] = c;
  if (alpha != Alpha::zero()) {
    const Eigen::VectorXd lp = density(state, basis, Alpha::zero(), t).real_n();
    rep.results["relative_l1_to_lp"] = relative_l1(d.real_n(), lp);
  }

  // LP density integrates to the photon number (Parseval)
  const DensityReport lp = density(state, basis, Alpha::zero(), t);
  rep.below("lp_total_vs_photon_number", std::abs(lp.total_n - number), tol["total"]);
  rep.below("continuity", cont.relative, tol["continuity"]);

  CsvWriter csv(out / "density.csv", rep,
                {"x", "y", "z", "re_n", "im_n", "re_jx", "re_jy", "re_jz", "re_residual", "im_residual"});
  for (Index p = 0; p < grid.size(); ++p) {
    const Eigen::Vector3d r = grid.r_point(p);
    const Complex res = cont.residual(spectral::oversampled_index(grid, cont.oversampling, p));
    csv.row({r.x(), r.y(), r.z(), d.n(p).real(), d.n(p).imag(), d.j(0, p).real(), d.j(1, p).real(), d.j(2, p).real(),
             res.real(), res.imag()});
  }
  return finish(rep, out);
}

// ---------------------------------------------------------------------------------------------

int functionals_cmd(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"grid", "basis", "state", "run"});
  const KGrid grid = read_grid(root.child("grid"));
  const PolarizationBasis basis = read_basis(grid, root.child("basis", false));
  const PhotonState state = read_one_photon_state(grid, root.child("state"));
  Section run = root.child("run", false);
  run.allow({"t", "origin_shift", "shifts", "tolerances"});
  const double t = run.number("t", 0.0);
  const Eigen::Vector3d shift = run.vec3("origin_shift", Eigen::Vector3d(0.5, -0.25, 1.0) * grid.dr());
  const int shifts = run.integer("shifts", 4);
  if (shifts < 1) throw ConfigError("run.shifts must be >= 1");
  Tolerances tol({{"momentum", 1e-10}, {"origin_shift", 1e-12}});
  tol.apply(run);
  Report rep("functionals", sc, tol);

  const double hbar = grid.constants().hbar();
  const double number = state.photon_number();
  const FieldSet f = total_fields(state, basis, t);
  const VectorFunctional P = momentum_functional(f.A, f.D);
  const Eigen::Vector3d modes = momentum_mode_sum(state);
  const AngularMomentum J = angular_momentum_functional(f.A, f.D);

  ordered_json p;
  p["value"] = vec(P.value);
  p["imag_defect"] = vec(P.imag_defect);
  p["mode_sum"] = vec(modes);
  p["per_photon"] = vec(P.value / number);
  rep.results["momentum"] = p;
  ordered_json j;
  j["total"] = vec(J.total.value);
  j["imag_defect"] = vec(J.total.imag_defect);
  j["orbital"] = vec(J.orbital);
  j["spin"] = vec(J.spin);
  j["per_photon_hbar"] = vec(J.total.value / (hbar * number));
  rep.results["angular_momentum"] = j;
  rep.results["photon_number"] = number;

  const double pscale = std::max(modes.norm(), hbar * grid.dk() * number);
  rep.below("momentum_vs_mode_sum", (P.value - modes).norm() / pscale, tol["momentum"]);

  // J about origin o is J - o x P
  CsvWriter csv(out / "functionals.csv", rep, {"origin_x", "origin_y", "origin_z", "J_x", "J_y", "J_z"});
  double shift_defect = 0.0;
  for (int i = 0; i <= shifts; ++i) {
    const Eigen::Vector3d o = double(i) * shift;
    const AngularMomentum Jo = angular_momentum_functional(f.A, f.D, o);
    const Eigen::Vector3d want = J.total.value - o.cross(P.value);
    shift_defect = std::max(shift_defect, (Jo.total.value - want).norm() /
                                              (J.total.value.norm() + o.norm() * P.value.norm() + hbar * number));
    csv.row({o.x(), o.y(), o.z(), Jo.total.value.x(), Jo.total.value.y(), Jo.total.value.z()});
  }
  rep.results["origin_shift_defect"] = shift_defect;
  rep.below("origin_shift", shift_defect, tol["origin_shift"]);
  return finish(rep, out);
}

// ---------------------------------------------------------------------------------------------

int two_photon_cmd(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"grid", "basis", "state", "run"});
  const KGrid grid = read_grid(root.child("grid"));
  const PolarizationBasis basis = read_basis(grid, root.child("basis", false));
  const PhotonState state = read_two_photon_state(grid, root.child("state"));
  Section run = root.child("run", false);
  run.allow({"alpha", "t", "coarsening", "tolerances"});
  const Alpha alpha = read_alpha(run, "alpha", 0.0);
  const double t = run.number("t", 0.0);
  const int coarsening = run.integer("coarsening", 4);
  if (coarsening < 1 || grid.n() % coarsening != 0) throw ConfigError("run.coarsening must divide grid.n");
  Tolerances tol({{"exchange", 1e-12}, {"marginal_total", 0.02}});
  tol.apply(run);
  Report rep("two-photon", sc, tol);

  std::map<std::pair<int, int>, TwoPhotonWaveField> psi;
  try {
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) psi.emplace(std::pair{s1, s2}, synthesize_two_photon(state, basis, alpha, s1, s2, t, coarsening));
  } catch (const CapacityError& e) {
    throw ConfigError(std::string("run.coarsening too small for this grid: ") + e.what());
  }
  double exchange = 0.0;
  ordered_json ex = ordered_json::array();
  for (auto [s1, s2] : {std::pair{1, 1}, {1, -1}, {-1, -1}}) {
    const double a = exchange_asymmetry(psi.at({s1, s2}), psi.at({s2, s1}));
    ordered_json e;
    e["sigma"] = s1;
    e["sigma2"] = s2;
    e["asymmetry"] = a;
    ex.push_back(e);
    exchange = std::max(exchange, a);
  }
  rep.results["exchange"] = ex;
  rep.below("exchange_symmetry", exchange, tol["exchange"]);

  const MarginalReport m = two_photon_marginal(state, basis, alpha, t, coarsening);
  const double number = state.photon_number();
  ordered_json mj;
  mj["total"] = cplx(m.total);
  mj["photon_number"] = number;
  mj["two_photon_weight"] = state.two_photon_weight();
  mj["points"] = m.points.cols();
  mj["cell_volume"] = m.cell_volume;
  rep.results["marginal"] = mj;
  rep.below("marginal_total", std::abs(m.total - number) / number, tol["marginal_total"]);

  CsvWriter csv(out / "two_photon.csv", rep,
                {"x", "y", "z", "re_n", "im_n", "re_n_plus", "re_n_minus"});
  for (Index q = 0; q < m.points.cols(); ++q) {
    const Eigen::Vector3d r = m.points.col(q);
    csv.row({r.x(), r.y(), r.z(), m.n(q).real(), m.n(q).imag(), m.n_sigma[0](q).real(), m.n_sigma[1](q).real()});
  }
  return finish(rep, out);
}

// ---------------------------------------------------------------------------------------------

int beam_am_cmd(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"beam", "run"});
  const BeamSpec spec = read_beam(root.child("beam"));
  Section run = root.child("run", false);
  run.allow({"points", "aperture", "samples", "tolerances"});
  const int points = run.integer("points", 2048);
  const double aperture = run.number("aperture", 0.0);
  const int samples = run.integer("samples", 16);
  if (points < 16) throw ConfigError("run.points must be >= 16");
  Tolerances tol({{"per_photon", 5e-3}, {"helmholtz", 1e-6}});
  tol.apply(run);
  Report rep("beam-am", sc, tol);

  const double hbar = spec.constants.hbar();
  ordered_json beam;
  beam["kind"] = spec.kind == BeamSpec::Kind::bessel ? "bessel" : "paraxial";
  beam["k_perp"] = spec.k_perp();
  rep.results["beam"] = beam;

  if (spec.kind == BeamSpec::Kind::bessel) {
    // Bessel modes: profile and Helmholtz residual
    const double kp = spec.k_perp();
    const double rmax = kp > 0.0 ? 20.0 / kp : 1.0;
    Eigen::Matrix3Xd cyl(3, points), cart(3, samples);
    for (int i = 0; i < points; ++i) cyl.col(i) = Eigen::Vector3d(rmax * i / (points - 1), 0.0, 0.0);
    for (int i = 0; i < samples; ++i) {
      const double rho = rmax * (i + 0.5) / samples, phi = 2 * pi * i / samples;
      cart.col(i) = Eigen::Vector3d(rho * std::cos(phi), rho * std::sin(phi), 0.1 * i * rmax / samples);
    }
    const Eigen::VectorXcd u = bessel_mode(spec, cyl);
    const double h = 1e-3 * (kp > 0.0 ? 1.0 / std::max(kp, spec.k_z) : 1.0 / spec.k_z);
    const double res = bessel_helmholtz_residual(spec, cart, h);
    rep.results["helmholtz_residual"] = res;
    rep.below("helmholtz", res, tol["helmholtz"]);
    CsvWriter csv(out / "beam_am.csv", rep, {"r", "re_mode", "im_mode"});
    for (int i = 0; i < points; ++i) csv.row({cyl(0, i), u(i).real(), u(i).imag()});
    return finish(rep, out);
  }

  Eigen::VectorXd r;
  AMProfile prof;
  try {
    r = radial_grid(spec, points);
    prof = am_density(spec, r);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("beam: ") + e.what());
  }
  const double expected = spec.l_z + spec.sigma;
  ordered_json am;
  am["total_n"] = prof.total_n;
  am["total_orbital"] = prof.total_orbital;
  am["total_spin"] = prof.total_spin;
  am["total_jz"] = prof.total_jz;
  am["orbital_per_photon"] = prof.total_orbital / (hbar * prof.total_n);
  am["spin_per_photon"] = prof.total_spin / (hbar * prof.total_n);
  am["per_photon"] = prof.per_photon;
  am["expected_per_photon"] = expected;
  rep.results["angular_momentum"] = am;
  // l + sigma = 0 leaves nothing to compare relatively against
  const double dev = expected != 0.0 ? std::abs(prof.per_photon - expected) / std::abs(expected)
                                     : std::abs(prof.per_photon);
  rep.below("per_photon_vs_l_plus_sigma", dev, tol["per_photon"]);

  CsvWriter csv(out / "beam_am.csv", rep, {"r", "u2", "n", "jz_orbital", "jz_spin", "jz", "cumulative_n", "cumulative_jz"});
  for (Index i = 0; i < r.size(); ++i)
    csv.row({r(i), prof.u2(i), prof.n(i), prof.orbital(i), prof.spin(i), prof.jz(i), prof.cumulative_n(i),
             prof.cumulative_jz(i)});

  if (aperture > 0.0) {
    ApertureReport ap;
    try {
      ap = aperture_demo(spec, aperture, points);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("run.aperture: ") + e.what());
    }
    ordered_json a;
    a["radius"] = ap.aperture_radius;
    a["per_photon_before"] = ap.before.per_photon;
    a["per_photon_after"] = ap.after.per_photon;
    a["edge_spike"] = ap.edge_spike;
    a["edge_radius"] = ap.edge_radius;
    a["edge_fraction"] = ap.edge_fraction;
    a["change_in_total"] = ap.change_in_total;
    rep.results["aperture"] = a;
    CsvWriter ac(out / "beam_am_aperture.csv", rep, {"r", "jz_before", "jz_after", "cumulative_jz_after"});
    for (Index i = 0; i < ap.after.r.size(); ++i)
      ac.row({ap.after.r(i), ap.before.jz(i), ap.after.jz(i), ap.after.cumulative_jz(i)});
  }
  return finish(rep, out);
}

// ---------------------------------------------------------------------------------------------

int glauber_cmd(Scenario& sc, const fs::path& out) {
  Section root = sc.root();
  root.allow({"grid", "basis", "run"});
  const KGrid grid = read_grid(root.child("grid"));
  const PolarizationBasis basis = read_basis(grid, root.child("basis", false));
  Section run = root.child("run");
  run.allow({"packet", "ladder", "detector", "tolerances"});
  Section pk = run.child("packet");
  pk.allow({"k0", "sigma_long", "sigma_perp", "r0", "sigma", "forward_only"});
  const PacketSpec packet = read_packet(grid, pk);
  const std::vector<double> ladder = run.numbers("ladder", std::vector<double>{1e-4, 1e-3, 1e-2, 0.05, 0.2});
  if (ladder.size() < 2) throw ConfigError("run.ladder needs at least two bandwidths");
  for (double b : ladder)
    if (!(b > 0.0)) throw ConfigError("run.ladder entries must be > 0");
  Section ds = run.child("detector", false);
  ds.allow({"position", "dz", "area"});
  Detector det;
  det.position = ds.vec3("position", Eigen::Vector3d::Zero());
  det.dz = ds.number("dz", 0.0);
  det.area = ds.number("area", 0.0);
  Tolerances tol({{"narrow_band_deviation", 1e-6}});
  tol.apply(run);
  Report rep("glauber", sc, tol);

  SweepResult sweep;
  try {
    sweep = glauber_sweep(grid, basis, packet, ladder, det);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("run.ladder: ") + e.what());
  }
  CsvWriter csv(out / "glauber.csv", rep,
                {"target", "bandwidth", "sigma_long", "omega_bar", "n_glauber", "n_half", "ratio", "deviation"});
  ordered_json rows = ordered_json::array();
  for (const SweepRow& row : sweep.rows) {
    const GlauberReport& g = row.report;
    csv.row({row.target, row.bandwidth, row.sigma_long, g.omega_bar, g.n_glauber, g.n_half, g.ratio, g.deviation});
    ordered_json e;
    e["target"] = row.target;
    e["bandwidth"] = row.bandwidth;
    e["ratio"] = g.ratio;
    e["deviation"] = g.deviation;
    e["cells"] = g.cells;
    rows.push_back(e);
    for (const auto& w : g.warnings) rep.warnings.push_back(w);
  }
  rep.results["rows"] = rows;
  rep.results["monotone"] = sweep.monotone;
  rep.holds("deviation_monotone_in_bandwidth", sweep.monotone);
  rep.below("narrow_band_deviation", sweep.rows.front().report.deviation, tol["narrow_band_deviation"]);
  return finish(rep, out);
}

using Handler = std::function<int(Scenario&, const fs::path&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"operator-check", operator_check}, {"localized", localized_cmd}, {"evolve", evolve_cmd},
      {"density", density_cmd},           {"functionals", functionals_cmd}, {"two-photon", two_photon_cmd},
      {"beam-am", beam_am_cmd},           {"glauber", glauber_cmd}};
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"operator-check", "localized", "evolve",  "density",
                                              "functionals",    "two-photon", "beam-am", "glauber"};
  return names;
}

int run_command(const std::string& name, Scenario& sc, const fs::path& out) {
  auto it = handlers().find(name);
  if (it == handlers().end()) throw ConfigError("unknown command '" + name + "'");
  return it->second(sc, out);
}

}  // namespace pwm_cli
