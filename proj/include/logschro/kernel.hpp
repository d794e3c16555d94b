#pragma once

#include <Eigen/Dense>

namespace logschro {

enum class KernelOrder { Log, Frac };

// Identifies which jump kernel is in play: the logarithmic one (symbol
// log(1 + |xi|^2)) or the order-s relative (symbol (1 + |xi|^2)^s - 1 up to
// the identity part), s in (0, 1).
struct KernelSpec {
  int dim = 1;
  KernelOrder order = KernelOrder::Log;
  double s = 0.0;

  static KernelSpec log_order(int dim);
  static KernelSpec frac_order(int dim, double s);
  void validate() const;
};

struct KernelConstants {
  double d_log = 0.0;           // pi^{-dim/2}
  double d_frac = 0.0;          // pi^{-dim/2} 4^s / Gamma(-s); negative
  double c_near = 0.0;          // Gamma(dim/2) pi^{-dim/2}
  double sphere_measure = 0.0;  // |S^{dim-1}|
  double ball_volume = 0.0;     // |B_1|
};

KernelConstants kernel_constants(const KernelSpec& spec);

// Kernel value at radius r > 0:
//   Log:  d_log omega(r) / r^dim
//   Frac: (-d_frac) omega_s(r) / r^{dim + 2s}
// Both are positive, integrably tailed, non-integrable at the origin.
double kernel_radial(const KernelSpec& spec, double r);

// e^r times kernel_radial; avoids underflow when probing deep tails.
double kernel_radial_scaled(const KernelSpec& spec, double r);

// Logarithmic jump kernel at z != 0; requires order Log. Radially symmetric;
// the value depends on z only through |z|.
double j_log(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z);

// Fractional jump kernel at z != 0; requires order Frac. Positive, so the
// operator reads u(x) + integral of (u(x) - u(x+y)) j_frac(y) dy.
double j_frac(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z);

enum class KernelRegime { NearZero, FarField };

// Leading-order model of the logarithmic kernel (order Log only):
//   NearZero: c_near |z|^{-dim}
//   FarField: pi^{-(dim-1)/2} 2^{-(dim-1)/2} |z|^{-(dim+1)/2} e^{-|z|}
double kernel_asymptotic(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                         KernelRegime regime);

// Radius form of the same models.
double kernel_asymptotic_radial(const KernelSpec& spec, double r, KernelRegime regime);

// Total kernel mass outside the ball of radius delta > 0. Finite for every
// positive delta, divergent as delta -> 0.
double tail_mass(const KernelSpec& spec, double delta);

}  // namespace logschro
