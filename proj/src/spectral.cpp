#include "photonwm/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace photonwm::spectral {
namespace {

struct AxisPhases {
  std::vector<Complex> pre;   // applied before the FFT
  std::vector<Complex> post;  // applied after the FFT
};

// Forward:  x[p] = post[p] * Sum_m (pre[m] a[m]) e^{+2 pi i m p / M}
// Inverse:  a[m] = post[m] * Sum_p (pre[p] x[p]) e^{-2 pi i m p / M} / M
AxisPhases phases(const ShiftedAxis& ax, bool to_rspace) {
  const int M = ax.size;
  const double w = 2.0 * std::numbers::pi / M;
  AxisPhases ph;
  ph.pre.resize(static_cast<std::size_t>(M));
  ph.post.resize(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    if (to_rspace) {
      ph.pre[static_cast<std::size_t>(i)] = std::polar(1.0, w * i * ax.x_shift);
      ph.post[static_cast<std::size_t>(i)] = std::polar(1.0, w * ax.k_shift * (i + ax.x_shift));
    } else {
      ph.pre[static_cast<std::size_t>(i)] = std::polar(1.0, -w * ax.k_shift * (i + ax.x_shift));
      ph.post[static_cast<std::size_t>(i)] = std::polar(1.0 / M, -w * i * ax.x_shift);
    }
  }
  return ph;
}

template <typename Access>
void transform_lines(Index count, const ShiftedAxis& ax, bool to_rspace, Access&& at) {
  const int M = ax.size;
  const AxisPhases ph = phases(ax, to_rspace);
  const Index M2 = static_cast<Index>(M) * M;
  for (int axis = 0; axis < 3; ++axis) {
    const Index stride = axis == 0 ? 1 : (axis == 1 ? M : M2);
#pragma omp parallel
    {
      Eigen::FFT<double> fft;
      fft.SetFlag(Eigen::FFT<double>::Unscaled);
      std::vector<Complex> in(static_cast<std::size_t>(M)), out(static_cast<std::size_t>(M));
#pragma omp for collapse(2)
      for (Index comp = 0; comp < count; ++comp) {
        for (Index line = 0; line < M2; ++line) {
          // base index of the line: the two coordinates other than `axis`
          const Index u = line % M, v = line / M;
          Index base = 0;
          if (axis == 0) base = M * u + M2 * v;
          if (axis == 1) base = u + M2 * v;
          if (axis == 2) base = u + M * v;
          for (int i = 0; i < M; ++i) in[static_cast<std::size_t>(i)] = ph.pre[static_cast<std::size_t>(i)] * at(comp, base + i * stride);
          if (to_rspace) {
            fft.inv(out, in);
          } else {
            fft.fwd(out, in);
          }
          for (int i = 0; i < M; ++i) at(comp, base + i * stride) = ph.post[static_cast<std::size_t>(i)] * out[static_cast<std::size_t>(i)];
        }
      }
    }
  }
}

}  // namespace

void transform_3d(FieldMatrix& data, const ShiftedAxis& axis, bool to_rspace) {
  const Index M = axis.size;
  if (data.cols() != M * M * M) throw std::invalid_argument("transform_3d: data is not size^3");
  transform_lines(3, axis, to_rspace, [&](Index comp, Index p) -> Complex& { return data(comp, p); });
}

void transform_3d(Eigen::VectorXcd& data, const ShiftedAxis& axis, bool to_rspace) {
  const Index M = axis.size;
  if (data.size() != M * M * M) throw std::invalid_argument("transform_3d: data is not size^3");
  transform_lines(1, axis, to_rspace, [&](Index, Index p) -> Complex& { return data(p); });
}

ShiftedAxis grid_axis(const KGrid& grid) {
  const int n = grid.n();
  return {n, -(n / 2) + (grid.offset() ? 0.5 : 0.0), static_cast<double>(-(n / 2))};
}

FieldMatrix synthesize_oversampled(const VectorField3& kfield, int factor) {
  if (kfield.domain() != Domain::kspace) throw std::invalid_argument("synthesize_oversampled needs a k-space field");
  if (factor < 1) throw std::invalid_argument("oversampling factor must be >= 1");
  const KGrid& g = kfield.grid();
  const int n = g.n();
  const int M = factor * n;
  FieldMatrix data = FieldMatrix::Zero(3, static_cast<Index>(M) * M * M);
  for (Index p = 0; p < g.size(); ++p) {
    const auto c = g.coords(p);
    data.col(c[0] + static_cast<Index>(M) * (c[1] + static_cast<Index>(M) * c[2])) = kfield.values().col(p);
  }
  const ShiftedAxis ax{M, -(n / 2) + (g.offset() ? 0.5 : 0.0), static_cast<double>(-(M / 2))};
  transform_3d(data, ax, true);
  data /= std::sqrt(g.volume());
  return data;
}

Index oversampled_index(const KGrid& grid, int factor, Index p) {
  const int n = grid.n();
  const int M = factor * n;
  const auto c = grid.coords(p);
  std::array<Index, 3> q{};
  for (int a = 0; a < 3; ++a) q[a] = static_cast<Index>(factor) * c[a] + M / 2 - factor * (n / 2);
  return q[0] + static_cast<Index>(M) * (q[1] + static_cast<Index>(M) * q[2]);
}

Eigen::Vector3d oversampled_point(const KGrid& grid, int factor, Index q) {
  const Index M = static_cast<Index>(factor) * grid.n();
  const double h = grid.box_length() / static_cast<double>(M);
  return {static_cast<double>(q % M - M / 2) * h, static_cast<double>((q / M) % M - M / 2) * h,
          static_cast<double>(q / (M * M) - M / 2) * h};
}

Eigen::VectorXcd lattice_divergence(const FieldMatrix& field, double box_length, int size) {
  const ShiftedAxis ax{size, static_cast<double>(-(size / 2)), static_cast<double>(-(size / 2))};
  FieldMatrix spec = field;
  transform_3d(spec, ax, false);
  const double dk = 2.0 * std::numbers::pi / box_length;
  const Index M = size;
  Eigen::VectorXcd div(spec.cols());
  for (Index q = 0; q < spec.cols(); ++q) {
    const Eigen::Vector3d kq(static_cast<double>(q % M - M / 2) * dk, static_cast<double>((q / M) % M - M / 2) * dk,
                             static_cast<double>(q / (M * M) - M / 2) * dk);
    div(q) = Complex(0.0, 1.0) * (kq(0) * spec(0, q) + kq(1) * spec(1, q) + kq(2) * spec(2, q));
  }
  transform_3d(div, ax, true);
  return div;
}

}  // namespace photonwm::spectral
