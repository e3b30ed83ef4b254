#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "photonwm/quantum.hpp"

namespace photonwm::testing {

// Truncated Fock space of a few modes with occupations 0..2 each, built from explicit ladder
// matrices. Exact for states with at most two photons.
struct Fock {
  int modes;
  Index dim;
  std::vector<Eigen::MatrixXcd> a;

  explicit Fock(int m) : modes(m), dim(static_cast<Index>(std::pow(3, m))) {
    Eigen::Matrix3cd single = Eigen::Matrix3cd::Zero();
    single(0, 1) = 1.0;
    single(1, 2) = std::sqrt(2.0);
    for (int i = 0; i < m; ++i) {
      Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
      for (int j = 0; j < m; ++j) {
        const Eigen::MatrixXcd f = (j == i) ? Eigen::MatrixXcd(single) : Eigen::MatrixXcd::Identity(3, 3);
        Eigen::MatrixXcd next(op.rows() * 3, op.cols() * 3);
        for (Index r = 0; r < op.rows(); ++r)
          for (Index c = 0; c < op.cols(); ++c) next.block(3 * r, 3 * c, 3, 3) = op(r, c) * f;
        op = next;
      }
      a.push_back(op);
    }
  }
  Eigen::VectorXcd vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(0) = 1.0;
    return v;
  }
};

// Both helicities filled with seeded complex Gaussians under exp(-(k/kw)^2), kw = width * n * dk.
inline PhotonState random_state(const KGrid& g, std::uint64_t seed, double width = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PhotonState s(g);
  const double kw = width * g.n() * g.dk();
  for (int sigma : {1, -1})
    for (Index p = 0; p < g.size(); ++p)
      s.set_c1({p, sigma}, std::exp(-std::pow(g.k_norm()(p) / kw, 2)) * Complex(nd(rng), nd(rng)));
  s.normalize();
  return s;
}

}  // namespace photonwm::testing
