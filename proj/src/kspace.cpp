#include "photonwm/kspace.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "photonwm/errors.hpp"
#include "photonwm/spectral.hpp"

namespace photonwm {

SphericalFrame spherical_frame(const Eigen::Vector3d& k) {
  const double kn = k.norm();
  if (!(kn > 0.0)) {
    throw PoleError("spherical frame undefined at k = 0");
  }
  const double rho = std::hypot(k.x(), k.y());
  const double sin_t = rho / kn;
  if (sin_t < kPoleTolerance) {
    std::ostringstream msg;
    msg << "wave vector (" << k.x() << ", " << k.y() << ", " << k.z()
        << ") lies on the polar axis (sin theta = " << sin_t << ")";
    throw PoleError(msg.str());
  }
  SphericalFrame f;
  f.k = kn;
  f.theta = std::atan2(rho, k.z());
  f.phi = std::atan2(k.y(), k.x());
  const double ct = std::cos(f.theta), st = std::sin(f.theta);
  const double cp = std::cos(f.phi), sp = std::sin(f.phi);
  f.k_hat = k / kn;
  f.theta_hat = {ct * cp, ct * sp, -st};
  f.phi_hat = {-sp, cp, 0.0};
  return f;
}

KGrid::KGrid(int n, double box_length, PhysicalConstants constants, bool offset) {
  if (n < 2) throw std::invalid_argument("grid needs n_per_axis >= 2");
  if (!(box_length > 0.0)) throw std::invalid_argument("grid needs box_length > 0");

  auto d = std::make_shared<Data>();
  d->n = n;
  d->box_length = box_length;
  d->dk = 2.0 * std::numbers::pi / box_length;
  d->offset = offset;
  d->size = static_cast<Index>(n) * n * n;
  d->constants = constants;
  d_ = d;

  const Index N = d->size;
  d->k.resize(3, N);
  d->k_hat.resize(3, N);
  d->theta_hat.resize(3, N);
  d->phi_hat.resize(3, N);
  d->k_norm.resize(N);
  d->inv_k.resize(N);
  d->omega.resize(N);
  d->theta.resize(N);
  d->phi.resize(N);
  d->sin_theta.resize(N);
  d->cot_theta.resize(N);

  std::vector<Index> singular;
  for (Index p = 0; p < N; ++p) {
    const auto c = coords(p);
    const Eigen::Vector3d kv(k_coordinate(c[0]), k_coordinate(c[1]), k_coordinate(c[2]));
    d->k.col(p) = kv;
    SphericalFrame f;
    try {
      f = spherical_frame(kv);
    } catch (const PoleError&) {
      singular.push_back(p);
      continue;
    }
    d->k_hat.col(p) = f.k_hat;
    d->theta_hat.col(p) = f.theta_hat;
    d->phi_hat.col(p) = f.phi_hat;
    d->k_norm(p) = f.k;
    d->inv_k(p) = 1.0 / f.k;
    d->omega(p) = constants.c() * f.k;
    d->theta(p) = f.theta;
    d->phi(p) = f.phi;
    d->sin_theta(p) = std::sin(f.theta);
    d->cot_theta(p) = std::cos(f.theta) / std::sin(f.theta);
  }

  if (!singular.empty()) {
    std::ostringstream msg;
    msg << singular.size() << " grid point(s) are singular (k = 0 or on the z-axis); "
        << "use the half-step offset grid. First singular points (k):";
    for (std::size_t s = 0; s < singular.size() && s < 6; ++s) {
      const auto kv = d->k.col(singular[s]);
      msg << " (" << kv.x() << ", " << kv.y() << ", " << kv.z() << ")";
    }
    throw PoleError(msg.str());
  }
}

KGrid build_grid(int n, double box_length, PhysicalConstants constants) {
  return KGrid(n, box_length, constants, true);
}

double KGrid::k_coordinate(int m) const {
  const double shift = d_->offset ? 0.5 : 0.0;
  return (m - d_->n / 2 + shift) * d_->dk;
}

double KGrid::r_coordinate(int p) const { return (p - d_->n / 2) * dr(); }

std::array<int, 3> KGrid::coords(Index p) const {
  const Index n = d_->n;
  return {static_cast<int>(p % n), static_cast<int>((p / n) % n), static_cast<int>(p / (n * n))};
}

SphericalFrame KGrid::frame(Index p) const {
  SphericalFrame f;
  f.k_hat = d_->k_hat.col(p);
  f.theta_hat = d_->theta_hat.col(p);
  f.phi_hat = d_->phi_hat.col(p);
  f.theta = d_->theta(p);
  f.phi = d_->phi(p);
  f.k = d_->k_norm(p);
  return f;
}

Eigen::Vector3d KGrid::r_point(Index p) const {
  const auto c = coords(p);
  return {r_coordinate(c[0]), r_coordinate(c[1]), r_coordinate(c[2])};
}

bool KGrid::interior(Index p, int margin) const {
  const auto c = coords(p);
  for (int a = 0; a < 3; ++a) {
    if (c[a] < margin || c[a] >= d_->n - margin) return false;
  }
  return true;
}

bool KGrid::same_as(const KGrid& other) const {
  if (d_ == other.d_) return true;
  return n() == other.n() && box_length() == other.box_length() && offset() == other.offset() &&
         constants() == other.constants();
}

VectorField3::VectorField3(KGrid grid, Domain domain)
    : grid_(std::move(grid)), domain_(domain), values_(FieldMatrix::Zero(3, grid_.size())) {}

VectorField3::VectorField3(KGrid grid, Domain domain, FieldMatrix values)
    : grid_(std::move(grid)), domain_(domain), values_(std::move(values)) {
  if (values_.cols() != grid_.size()) {
    throw std::invalid_argument("field value count does not match grid point count");
  }
}

void require_same_grid(const KGrid& a, const KGrid& b, const char* what) {
  if (!a.same_as(b)) throw GridMismatch(std::string(what) + ": grids differ");
}

VectorField3 k_gradient(const VectorField3& field, Axis axis) {
  const KGrid& g = field.grid();
  const int n = g.n();
  const double h = g.dk();
  const int a = axis_index(axis);
  const Index stride = a == 0 ? 1 : (a == 1 ? n : static_cast<Index>(n) * n);
  const FieldMatrix& f = field.values();
  FieldMatrix out(3, f.cols());

#pragma omp parallel for
  for (Index p = 0; p < f.cols(); ++p) {
    const int c = g.coords(p)[a];
    if (c > 0 && c < n - 1) {
      out.col(p) = (f.col(p + stride) - f.col(p - stride)) / (2.0 * h);
    } else if (n == 2) {
      out.col(p) = c == 0 ? (f.col(p + stride) - f.col(p)) / h : (f.col(p) - f.col(p - stride)) / h;
    } else if (c == 0) {
      out.col(p) = (-3.0 * f.col(p) + 4.0 * f.col(p + stride) - f.col(p + 2 * stride)) / (2.0 * h);
    } else {
      out.col(p) = (3.0 * f.col(p) - 4.0 * f.col(p - stride) + f.col(p - 2 * stride)) / (2.0 * h);
    }
  }
  return {g, field.domain(), std::move(out)};
}

VectorField3 fourier_to_rspace(const VectorField3& field) {
  if (field.domain() != Domain::kspace) throw std::invalid_argument("fourier_to_rspace needs a k-space field");
  FieldMatrix data = field.values();
  spectral::transform_3d(data, spectral::grid_axis(field.grid()), true);
  data /= std::sqrt(field.grid().volume());
  return {field.grid(), Domain::rspace, std::move(data)};
}

VectorField3 rspace_to_fourier(const VectorField3& field) {
  if (field.domain() != Domain::rspace) throw std::invalid_argument("rspace_to_fourier needs an r-space field");
  FieldMatrix data = field.values();
  spectral::transform_3d(data, spectral::grid_axis(field.grid()), false);
  data *= std::sqrt(field.grid().volume());
  return {field.grid(), Domain::kspace, std::move(data)};
}

FieldMatrix synthesize_at(const VectorField3& field, const Eigen::Matrix3Xd& points) {
  if (field.domain() != Domain::kspace) throw std::invalid_argument("synthesize_at needs a k-space field");
  const KGrid& g = field.grid();
  const double norm = 1.0 / std::sqrt(g.volume());
  FieldMatrix out(3, points.cols());
#pragma omp parallel for
  for (Index q = 0; q < points.cols(); ++q) {
    std::array<std::vector<Complex>, 3> terms;
    for (auto& t : terms) t.resize(static_cast<std::size_t>(g.size()));
    for (Index p = 0; p < g.size(); ++p) {
      const Complex phase = std::polar(1.0, g.k().col(p).dot(points.col(q)));
      for (int j = 0; j < 3; ++j) terms[j][static_cast<std::size_t>(p)] = field.values()(j, p) * phase;
    }
    for (int j = 0; j < 3; ++j) out(j, q) = compensated_sum(terms[j]) * norm;
  }
  return out;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

Complex compensated_sum(std::span<const Complex> values) {
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  auto add = [](double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  };
  for (const Complex& v : values) {
    add(sr, cr, v.real());
    add(si, ci, v.imag());
  }
  return {sr + cr, si + ci};
}

Complex dot(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.cols()) throw GridMismatch("dot: fields differ in size");
  std::vector<Complex> terms(static_cast<std::size_t>(a.cols()));
  for (Index p = 0; p < a.cols(); ++p) {
    terms[static_cast<std::size_t>(p)] = a.col(p).dot(b.col(p));  // Eigen conjugates the left operand
  }
  return compensated_sum(terms);
}

double field_norm(const VectorField3& field, int margin) {
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(field.size()));
  for (Index p = 0; p < field.size(); ++p) {
    if (margin > 0 && !field.grid().interior(p, margin)) continue;
    terms.push_back(field.values().col(p).squaredNorm());
  }
  return std::sqrt(compensated_sum(terms));
}

}  // namespace photonwm
