#include "logschro/fourier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace logschro {
namespace {

constexpr double kPi = 3.14159265358979323846;

using Cplx = std::complex<double>;

// Runs one-dimensional transforms along every axis of a row-major cube of
// side grid.points. Forward is unnormalized; inverse carries the 1/n per axis.
void transform_all_axes(const PeriodicGrid& grid, Eigen::VectorXcd& data,
                        bool forward) {
  const int n = grid.points;
  Eigen::FFT<double> fft;
  std::vector<Cplx> line(static_cast<size_t>(n));
  std::vector<Cplx> out(static_cast<size_t>(n));
  const Eigen::Index total = grid.num_cells();
  for (int axis = 0; axis < grid.dim; ++axis) {
    // Last axis is contiguous; stride of `axis` is n^(dim-1-axis).
    Eigen::Index stride = 1;
    for (int a = grid.dim - 1; a > axis; --a) stride *= n;
    const Eigen::Index lines = total / n;
    for (Eigen::Index l = 0; l < lines; ++l) {
      // Walk line `l` through the complement of the transform axis.
      const Eigen::Index block = l / stride;
      const Eigen::Index within = l % stride;
      const Eigen::Index base = block * stride * n + within;
      for (int k = 0; k < n; ++k) line[static_cast<size_t>(k)] = data[base + k * stride];
      if (forward) {
        fft.fwd(out, line);
      } else {
        fft.inv(out, line);
      }
      for (int k = 0; k < n; ++k) data[base + k * stride] = out[static_cast<size_t>(k)];
    }
  }
}

Eigen::VectorXcd forward_transform(const PeriodicGrid& grid,
                                   const Eigen::VectorXd& values) {
  Eigen::VectorXcd data = values.cast<Cplx>();
  transform_all_axes(grid, data, true);
  return data;
}

}  // namespace

void PeriodicGrid::validate() const {
  if (dim < 1 || dim > 3) {
    throw std::domain_error("PeriodicGrid: dim must be 1, 2, or 3, got " +
                            std::to_string(dim));
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::domain_error("PeriodicGrid: extent must be finite and > 0");
  }
  if (points < 8 || points % 2 != 0) {
    throw std::domain_error("PeriodicGrid: points must be an even integer >= 8, got " +
                            std::to_string(points));
  }
}

Eigen::Index PeriodicGrid::num_cells() const {
  Eigen::Index total = 1;
  for (int a = 0; a < dim; ++a) total *= points;
  return total;
}

double PeriodicGrid::coordinate(int k) const {
  return -0.5 * extent + k * spacing();
}

double PeriodicGrid::frequency(int k) const {
  const int signed_k = k < points / 2 ? k : k - points;
  return 2.0 * kPi * signed_k / extent;
}

void PeriodicGrid::unravel(Eigen::Index linear, int* k_out) const {
  for (int a = dim - 1; a >= 0; --a) {
    k_out[a] = static_cast<int>(linear % points);
    linear /= points;
  }
}

double PeriodicGrid::frequency_squared(Eigen::Index linear) const {
  int k[3] = {0, 0, 0};
  unravel(linear, k);
  double sq = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double xi = frequency(k[a]);
    sq += xi * xi;
  }
  return sq;
}

PeriodicField::PeriodicField(PeriodicGrid grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.num_cells()) {
    throw std::domain_error("PeriodicField: expected " +
                            std::to_string(grid_.num_cells()) + " values, got " +
                            std::to_string(values_.size()));
  }
  if (!values_.allFinite()) {
    throw std::domain_error("PeriodicField: values must be finite");
  }
  coefficients_ = forward_transform(grid_, values_);
}

PeriodicField PeriodicField::from_function(
    const PeriodicGrid& grid,
    const std::function<double(Eigen::Ref<const Eigen::VectorXd>)>& u) {
  grid.validate();
  Eigen::VectorXd values(grid.num_cells());
  Eigen::VectorXd x(grid.dim);
  int k[3] = {0, 0, 0};
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    grid.unravel(i, k);
    for (int a = 0; a < grid.dim; ++a) x[a] = grid.coordinate(k[a]);
    values[i] = u(x);
  }
  return PeriodicField(grid, std::move(values));
}

PeriodicField PeriodicField::from_coefficients(const PeriodicGrid& grid,
                                               const Eigen::VectorXcd& coefficients) {
  grid.validate();
  if (coefficients.size() != grid.num_cells()) {
    throw std::domain_error("PeriodicField: coefficient count does not match grid");
  }
  Eigen::VectorXcd data = coefficients;
  transform_all_axes(grid, data, false);
  const double real_scale = std::max(1.0, data.real().cwiseAbs().maxCoeff());
  const double imag_peak = data.imag().cwiseAbs().maxCoeff();
  if (imag_peak > 1e-10 * real_scale) {
    throw std::domain_error(
        "PeriodicField: coefficients are not Hermitian-symmetric (inverse "
        "transform has imaginary peak " +
        std::to_string(imag_peak) + ")");
  }
  return PeriodicField(grid, data.real());
}

double PeriodicField::value_at(Eigen::Ref<const Eigen::VectorXi> indices) const {
  if (indices.size() != grid_.dim) {
    throw std::domain_error("PeriodicField: index tuple has wrong dimension");
  }
  Eigen::Index linear = 0;
  for (int a = 0; a < grid_.dim; ++a) {
    const int k = indices[a];
    if (k < 0 || k >= grid_.points) {
      throw std::domain_error("PeriodicField: index out of range");
    }
    linear = linear * grid_.points + k;
  }
  return values_[linear];
}

double symbol_value(const KernelSpec& spec, double xi_squared) {
  spec.validate();
  if (!(xi_squared >= 0.0) || !std::isfinite(xi_squared)) {
    throw std::domain_error("symbol_value: squared frequency must be finite and >= 0");
  }
  if (spec.order == KernelOrder::Log) {
    return std::log1p(xi_squared);
  }
  return std::pow(1.0 + xi_squared, spec.s);
}

PeriodicField apply_symbol(const PeriodicField& field, const KernelSpec& spec) {
  spec.validate();
  const PeriodicGrid& grid = field.grid();
  if (spec.dim != grid.dim) {
    throw std::domain_error("apply_symbol: spec dim does not match grid dim");
  }
  Eigen::VectorXcd scaled = field.coefficients();
  for (Eigen::Index i = 0; i < scaled.size(); ++i) {
    scaled[i] *= symbol_value(spec, grid.frequency_squared(i));
  }
  return PeriodicField::from_coefficients(grid, scaled);
}

double periodization_error_bound(const KernelSpec& spec, const PeriodicGrid& grid,
                                 double sup_norm) {
  grid.validate();
  if (!(sup_norm >= 0.0)) {
    throw std::domain_error("periodization_error_bound: sup_norm must be >= 0");
  }
  return 2.0 * sup_norm * tail_mass(spec, 0.5 * grid.extent);
}

}  // namespace logschro
