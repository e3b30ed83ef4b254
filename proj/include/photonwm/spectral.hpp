#pragma once

#include "photonwm/kspace.hpp"

namespace photonwm::spectral {

/// One axis of a shifted discrete Fourier pair of length `size`:
///   x[p] = Sum_m a[m] exp(2 pi i (m + k_shift)(p + x_shift) / size).
/// Integer shifts give the ordinary centred lattice; k_shift = 1/2 mod 1 is the
/// half-step offset grid.
struct ShiftedAxis {
  int size = 0;
  double k_shift = 0.0;
  double x_shift = 0.0;
};

/// In-place separable 3-D transform of column-per-point data laid out x-fastest on a
/// size^3 cube. Forward is k -> x without normalisation; inverse divides by size^3.
void transform_3d(FieldMatrix& data, const ShiftedAxis& axis, bool to_rspace);
void transform_3d(Eigen::VectorXcd& data, const ShiftedAxis& axis, bool to_rspace);

/// Axis description of a KGrid's own k <-> r pair.
ShiftedAxis grid_axis(const KGrid& grid);

/// Sum_k F(k) e^{ik.r}/sqrt(V) on a real-space grid refined by `factor` per axis
/// (spacing L/(factor n), M = factor n points, coordinates (q - floor(M/2)) L/M).
FieldMatrix synthesize_oversampled(const VectorField3& kfield, int factor);

/// Index of base real-space point p inside the factor-refined grid.
Index oversampled_index(const KGrid& grid, int factor, Index p);

/// Position of point q of the factor-refined grid.
Eigen::Vector3d oversampled_point(const KGrid& grid, int factor, Index q);

/// Exact divergence of a real-space vector field whose spectrum lies on the integer
/// lattice q dk with |q| < M/2 (products of two band-limited fields on a 2x-refined grid).
Eigen::VectorXcd lattice_divergence(const FieldMatrix& field, double box_length, int size);

}  // namespace photonwm::spectral
