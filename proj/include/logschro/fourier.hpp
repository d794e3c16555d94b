#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "logschro/kernel.hpp"

namespace logschro {

// Uniform periodic grid on [-L/2, L/2)^dim with n points per axis. The
// discrete frequency set per axis is 2 pi k'/L with k' running over
// [-n/2, n/2). n must be even so that set is symmetric up to one endpoint.
struct PeriodicGrid {
  int dim = 1;
  double extent = 40.0;
  int points = 8;

  void validate() const;
  Eigen::Index num_cells() const;
  double spacing() const { return extent / points; }

  // Spatial coordinate of sample k along one axis, k in [0, points).
  double coordinate(int k) const;

  // Signed frequency 2 pi k'/L of coefficient index k along one axis.
  double frequency(int k) const;

  // Decomposes a row-major linear index (last axis contiguous).
  void unravel(Eigen::Index linear, int* k_out) const;

  // |xi|^2 of the frequency tuple behind a linear coefficient index.
  double frequency_squared(Eigen::Index linear) const;
};

// Real-valued samples on a PeriodicGrid together with their discrete Fourier
// coefficients. Immutable after construction; the transform is taken once.
class PeriodicField {
 public:
  PeriodicField(PeriodicGrid grid, Eigen::VectorXd values);

  static PeriodicField from_function(
      const PeriodicGrid& grid,
      const std::function<double(Eigen::Ref<const Eigen::VectorXd>)>& u);

  // Inverse transform. The coefficient array must be Hermitian-symmetric
  // (real-valued field) up to roundoff; rejects anything else.
  static PeriodicField from_coefficients(const PeriodicGrid& grid,
                                         const Eigen::VectorXcd& coefficients);

  const PeriodicGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }

  double value_at(Eigen::Ref<const Eigen::VectorXi> indices) const;

 private:
  PeriodicGrid grid_;
  Eigen::VectorXd values_;
  Eigen::VectorXcd coefficients_;
};

// Fourier multiplier at squared frequency: log(1 + |xi|^2) for Log order,
// (1 + |xi|^2)^s for Frac order.
double symbol_value(const KernelSpec& spec, double xi_squared);

// Multiplies the coefficients pointwise by the operator symbol and transforms
// back. Real input gives real output (the symbol is even in xi).
PeriodicField apply_symbol(const PeriodicField& field, const KernelSpec& spec);

// Bound on the error of replacing the free-space operator by its periodized
// version on this grid: the jump kernel mass beyond half the box extent,
// times twice the sup norm of the input.
double periodization_error_bound(const KernelSpec& spec, const PeriodicGrid& grid,
                                 double sup_norm);

}  // namespace logschro
