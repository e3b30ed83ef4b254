#include "photonwm/two_photon.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "photonwm/errors.hpp"

namespace photonwm {

PairAmplitudes pair_amplitudes(const PhotonState& state, int sigma, int sigma2) {
  require_sigma(sigma);
  require_sigma(sigma2);
  PairAmplitudes pa;
  pa.sigma = sigma;
  pa.sigma2 = sigma2;
  std::map<Index, Index> row_of, col_of;
  for (const auto& [key, v] : state.c2()) {
    for (const ModeKey& q : {key.first, key.second}) {
      if (q.sigma == sigma) row_of.emplace(q.k, 0);
      if (q.sigma == sigma2) col_of.emplace(q.k, 0);
    }
  }
  for (auto& [k, i] : row_of) {
    i = static_cast<Index>(pa.rows.size());
    pa.rows.push_back(k);
  }
  for (auto& [k, i] : col_of) {
    i = static_cast<Index>(pa.cols.size());
    pa.cols.push_back(k);
  }
  pa.C = Eigen::MatrixXcd::Zero(static_cast<Index>(pa.rows.size()), static_cast<Index>(pa.cols.size()));
  for (const auto& [key, v] : state.c2()) {
    const Complex a = key.doubly_occupied() ? v * std::numbers::sqrt2 : v;
    const ModeKey& p = key.first;
    const ModeKey& q = key.second;
    if (p.sigma == sigma && q.sigma == sigma2) pa.C(row_of.at(p.k), col_of.at(q.k)) = a;
    if (q.sigma == sigma && p.sigma == sigma2) pa.C(row_of.at(q.k), col_of.at(p.k)) = a;
  }
  return pa;
}

TwoPhotonWaveField synthesize_two_photon(const PhotonState& state, const PolarizationBasis& basis, Alpha alpha,
                                         int sigma, int sigma2, double t, int coarsening, Index max_entries) {
  require_same_grid(state.grid(), basis.grid(), "two-photon synthesis");
  const KGrid& g = basis.grid();
  if (coarsening < 1 || g.n() % coarsening != 0) {
    throw std::invalid_argument("coarsening must be >= 1 and divide the grid size");
  }
  const int nc = g.n() / coarsening;
  const Index P = static_cast<Index>(nc) * nc * nc;
  if (9 * P * P > max_entries) {
    std::ostringstream msg;
    msg << "two-photon product grid needs " << 9 * P * P << " entries, limit " << max_entries
        << "; increase the coarsening";
    throw CapacityError(msg.str());
  }

  TwoPhotonWaveField out{alpha, sigma, sigma2, t, coarsening, Eigen::Matrix3Xd(3, P),
                         std::pow(coarsening * g.dr(), 3), {}};
  for (int l = 0; l < nc; ++l) {
    for (int j = 0; j < nc; ++j) {
      for (int i = 0; i < nc; ++i) {
        out.points.col(i + static_cast<Index>(nc) * (j + static_cast<Index>(nc) * l)) =
            g.r_point(g.index(coarsening * i, coarsening * j, coarsening * l));
      }
    }
  }

  const PairAmplitudes pa = pair_amplitudes(state, sigma, sigma2);
  const Eigen::VectorXd w = omega_power(g, alpha.value());
  const double norm = 1.0 / std::sqrt(g.volume());
  // U_j(a, q) = u_{q,j}(points[a])
  auto mode_matrix = [&](const std::vector<Index>& modes, int s) {
    std::array<Eigen::MatrixXcd, 3> U;
    for (auto& u : U) u.resize(P, static_cast<Index>(modes.size()));
    const FieldMatrix& e = basis.vectors(s);
    for (std::size_t q = 0; q < modes.size(); ++q) {
      const Index k = modes[q];
      const Complex amp = w(k) * norm * std::polar(1.0, -g.omega()(k) * t);
      for (Index a = 0; a < P; ++a) {
        const Complex ph = amp * std::polar(1.0, g.k().col(k).dot(out.points.col(a)));
        for (int c = 0; c < 3; ++c) U[static_cast<std::size_t>(c)](a, static_cast<Index>(q)) = e(c, k) * ph;
      }
    }
    return U;
  };
  const auto U1 = mode_matrix(pa.rows, sigma);
  const auto U2 = mode_matrix(pa.cols, sigma2);
  for (int j = 0; j < 3; ++j) {
    const Eigen::MatrixXcd left = U1[static_cast<std::size_t>(j)] * pa.C;
    for (int j2 = 0; j2 < 3; ++j2) {
      out.values[static_cast<std::size_t>(3 * j + j2)] = left * U2[static_cast<std::size_t>(j2)].transpose();
    }
  }
  return out;
}

double exchange_asymmetry(const TwoPhotonWaveField& psi, const TwoPhotonWaveField& swapped) {
  if (psi.sigma != swapped.sigma2 || psi.sigma2 != swapped.sigma || !(psi.alpha == swapped.alpha) ||
      psi.coarsening != swapped.coarsening || psi.t != swapped.t) {
    throw LabelMismatch("exchange check needs the helicity-swapped partner field");
  }
  double diff = 0.0, scale = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int j2 = 0; j2 < 3; ++j2) {
      const Eigen::MatrixXcd& a = psi.component(j, j2);
      const Eigen::MatrixXcd& b = swapped.component(j2, j);
      diff = std::max(diff, (a - b.transpose()).cwiseAbs().maxCoeff());
      scale = std::max(scale, a.cwiseAbs().maxCoeff());
    }
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace photonwm
