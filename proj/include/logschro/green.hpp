#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "logschro/fourier.hpp"

namespace logschro {

// Transition density of the subordinated process at time t > 0. Radial form;
// r = 0 is finite only for t > dim/2 and rejected otherwise.
double heat_kernel_radial(int dim, double t, double r);

// Vector form.
double heat_kernel(int dim, double t, Eigen::Ref<const Eigen::VectorXd> x);

// Total mass of q_t over all of space, by radial quadrature. Equals 1 up to
// quadrature error for every t > 0.
double heat_kernel_mass(int dim, double t);

// Fourier transform of q_t at frequency magnitude xi > 0, by direct radial
// quadrature of the continuum transform (dims 1 and 3). Equals
// (1 + xi^2)^{-t} up to quadrature error.
double heat_kernel_fourier(int dim, double t, double xi);

// Continuum convolution (q_t * q_tau)(x) on the line, split at the two
// integrable singular points of the integrand. Matches q_{t+tau}(x).
double heat_kernel_convolution_1d(double t, double tau, double x);

// Panel layout for the Green-function time integral. Geometric panels cover
// [t_lower_cut, 0.25] where the integrand vanishes linearly in t, uniform
// panels bridge the zero crossing of the Bessel order, log-spaced panels run
// to t_upper_cut, and the remaining tail is folded onto (0, 1] exactly by an
// algebraic substitution, so no mass beyond t_upper_cut is dropped.
struct GreenQuadrature {
  double t_lower_cut = 1e-6;
  double t_upper_cut = 400.0;
  int panel_nodes = 16;
  int tail_nodes = 64;

  void validate() const;
};

// Green function at radius r > 0 for dim >= 3: the time integral of the heat
// kernel. For dim <= 2 that integral diverges (the integrand decays like
// t^{-dim/2}), so those dimensions are rejected.
double green_radial(int dim, double r, const GreenQuadrature& quad = {});

// Vector form; rejects x = 0.
double green_fn(int dim, Eigen::Ref<const Eigen::VectorXd> x,
                const GreenQuadrature& quad = {});

// Tabulated radial Green function with cubic-spline interpolation in
// log-log coordinates. Cuts per-evaluation cost from a full time integral to
// a table lookup; interpolation error is far below the table's build
// tolerance because log G is slowly varying in log r.
class GreenInterpolant {
 public:
  GreenInterpolant(int dim, double r_min, double r_max, int points,
                   const GreenQuadrature& quad = {});

  double operator()(double r) const;
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

 private:
  double r_min_ = 0.0, r_max_ = 0.0;
  std::vector<double> log_r_, log_g_, second_deriv_;
};

// Cube-shaped sampling grid centered at the origin, odd point count per axis
// so the origin is a sample point. Three-dimensional.
struct FreeSpaceGrid {
  int points_per_axis = 33;
  double spacing = 0.25;

  void validate() const;
  double coordinate(int j) const;
  double half_extent() const;
  Eigen::Index num_cells() const;
  void unravel(Eigen::Index linear, int* k_out) const;
};

struct DecayReport {
  double shell_inner = 0.0;        // probe shell radii
  double shell_outer = 0.0;
  double sup_exp_weighted = 0.0;   // sup over the shell of e^{|x|} |u(x)|
  bool finite = true;              // every probed value finite
};

struct FreeSpacePoisson {
  Eigen::VectorXd values;
  DecayReport decay;
};

// Discrete convolution u = G * f on the grid: midpoint rule cell-by-cell,
// with the self cell replaced by f_i times the exact cell integral of G
// (Duffy split) and near cells (offset <= 2 in sup norm) using cell-averaged
// G. f must vanish outside half the grid extent so the decay shell stays
// clear of the support.
FreeSpacePoisson poisson_free_space(const FreeSpaceGrid& grid,
                                    const Eigen::VectorXd& f,
                                    const GreenQuadrature& quad = {});

// Spectral solve of the periodic problem: divides coefficients by the symbol
// log(1 + |xi|^2) and pins the zero mode to zero. Requires zero-mean f since
// the symbol vanishes at xi = 0.
PeriodicField poisson_periodic(const PeriodicField& f);

}  // namespace logschro
