#include "logschro/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "logschro/quadrature.hpp"
#include "logschro/special.hpp"

namespace logschro {
namespace {

constexpr double kPi = 3.14159265358979323846;

double order_exponent(const KernelSpec& spec) {
  return spec.order == KernelOrder::Frac ? spec.s : 0.0;
}

// Positive coefficient in front of omega_s(r)/r^{dim+2s}.
double front_coefficient(const KernelSpec& spec) {
  const KernelConstants c = kernel_constants(spec);
  return spec.order == KernelOrder::Log ? c.d_log : -c.d_frac;
}

}  // namespace

KernelSpec KernelSpec::log_order(int dim) {
  KernelSpec spec;
  spec.dim = dim;
  spec.order = KernelOrder::Log;
  spec.s = 0.0;
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::frac_order(int dim, double s) {
  KernelSpec spec;
  spec.dim = dim;
  spec.order = KernelOrder::Frac;
  spec.s = s;
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  if (dim < 1) {
    throw std::domain_error("KernelSpec: dim must be >= 1, got " +
                            std::to_string(dim));
  }
  if (order == KernelOrder::Frac) {
    if (!(s > 0.0) || !(s < 1.0)) {
      throw std::domain_error("KernelSpec: fractional order requires s in (0, 1), got " +
                              std::to_string(s));
    }
  } else if (s != 0.0) {
    throw std::domain_error("KernelSpec: logarithmic order requires s = 0");
  }
}

KernelConstants kernel_constants(const KernelSpec& spec) {
  spec.validate();
  KernelConstants c;
  const double half_dim = 0.5 * spec.dim;
  c.d_log = std::pow(kPi, -half_dim);
  if (spec.order == KernelOrder::Frac) {
    // 1 / Gamma(-s) = -s / Gamma(1 - s)
    c.d_frac = c.d_log * std::pow(4.0, spec.s) * (-spec.s) / std::tgamma(1.0 - spec.s);
  } else {
    c.d_frac = 0.0;
  }
  c.c_near = std::tgamma(half_dim) * c.d_log;
  c.sphere_measure = 2.0 * std::pow(kPi, half_dim) / std::tgamma(half_dim);
  c.ball_volume = c.sphere_measure / spec.dim;
  return c;
}

double kernel_radial(const KernelSpec& spec, double r) {
  spec.validate();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("kernel_radial: radius must be finite and > 0, got " +
                            std::to_string(r));
  }
  const double s = order_exponent(spec);
  return front_coefficient(spec) * omega_s(spec.dim, s, r) /
         std::pow(r, spec.dim + 2.0 * s);
}

double kernel_radial_scaled(const KernelSpec& spec, double r) {
  spec.validate();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("kernel_radial_scaled: radius must be finite and > 0, got " +
                            std::to_string(r));
  }
  const double s = order_exponent(spec);
  return front_coefficient(spec) * omega_s_scaled(spec.dim, s, r) /
         std::pow(r, spec.dim + 2.0 * s);
}

namespace {

double checked_radius(const char* who, const KernelSpec& spec,
                      Eigen::Ref<const Eigen::VectorXd> z) {
  if (z.size() != spec.dim) {
    throw std::domain_error(std::string(who) + ": point dimension " +
                            std::to_string(z.size()) + " does not match spec dim " +
                            std::to_string(spec.dim));
  }
  const double r = z.norm();
  if (r == 0.0) {
    throw std::domain_error(std::string(who) + ": kernel is singular at the origin");
  }
  return r;
}

// Leading far-field model coeff e^{-r} r^{(a - 1/2) - dim - 2s} shared by both
// orders; used for the tail remainder bound below. The public asymptotic API
// is restricted to the logarithmic kernel.
double far_field_model(const KernelSpec& spec, double r) {
  const double s = order_exponent(spec);
  const double a = 0.5 * (spec.dim + 2.0 * s);
  const double prefactor =
      front_coefficient(spec) * std::pow(2.0, 1.0 - a) * std::sqrt(0.5 * kPi);
  return prefactor * std::exp(-r) * std::pow(r, a - 0.5 - spec.dim - 2.0 * s);
}

}  // namespace

double j_log(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z) {
  spec.validate();
  if (spec.order != KernelOrder::Log) {
    throw std::domain_error("j_log: spec must have logarithmic order");
  }
  return kernel_radial(spec, checked_radius("j_log", spec, z));
}

double j_frac(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z) {
  spec.validate();
  if (spec.order != KernelOrder::Frac) {
    throw std::domain_error("j_frac: spec must have fractional order");
  }
  return kernel_radial(spec, checked_radius("j_frac", spec, z));
}

double kernel_asymptotic_radial(const KernelSpec& spec, double r, KernelRegime regime) {
  spec.validate();
  if (spec.order != KernelOrder::Log) {
    throw std::domain_error("kernel_asymptotic: spec must have logarithmic order");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("kernel_asymptotic: radius must be finite and > 0");
  }
  if (regime == KernelRegime::NearZero) {
    // omega(0+) = Gamma(dim/2), so the kernel approaches c_near r^{-dim}.
    return kernel_constants(spec).c_near * std::pow(r, -spec.dim);
  }
  return far_field_model(spec, r);
}

double kernel_asymptotic(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                         KernelRegime regime) {
  spec.validate();
  return kernel_asymptotic_radial(spec, checked_radius("kernel_asymptotic", spec, z),
                                  regime);
}

double tail_mass(const KernelSpec& spec, double delta) {
  spec.validate();
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::domain_error("tail_mass: delta must be finite and > 0, got " +
                            std::to_string(delta));
  }
  const KernelConstants c = kernel_constants(spec);
  // Radial reduction over [delta, delta + 50]; the e^r-scaled profile keeps
  // the integrand representable across the whole window.
  auto integrand = [&](double r) {
    return kernel_radial_scaled(spec, r) * std::exp(-r) *
           std::pow(r, spec.dim - 1.0);
  };
  AdaptiveOptions opts;
  opts.rel_tol = 1e-12;
  const double cut = delta + 50.0;
  const AdaptiveOutcome body = integrate_adaptive(integrand, delta, cut, opts);
  // Beyond the cut the radial integrand is below e^{-r} r^q with q <= 0 for
  // dim <= 3, so the remainder is at most its value at the cut.
  const double tail_bound =
      1.1 * far_field_model(spec, cut) * std::pow(cut, spec.dim - 1.0);
  return c.sphere_measure * (body.value + tail_bound);
}

}  // namespace logschro
