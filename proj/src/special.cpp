#include "logschro/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace logschro {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

[[noreturn]] void fail_domain(const std::string& what) {
  throw std::domain_error(what);
}

void check_args(double nu, double r) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    fail_domain("bessel_k: order must be finite and >= 0, got " + std::to_string(nu));
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    fail_domain("bessel_k: argument must be finite and > 0, got " + std::to_string(r));
  }
}

// Taylor coefficients of 1/Gamma(1+z) = sum_k c[k] z^k.
constexpr double kInvGammaCoeff[] = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.04200263503409523553,
    0.16653861138229148950,
    -0.04219773455554433675,
    -0.00962197152787697356,
    0.00721894324666309954,
    -0.00116516759185906511,
    -0.00021524167411495097,
    0.00012805028238811619,
    -0.00002013485478078824,
    -0.00000125049348214267,
    0.00000113302723198170,
};

// gamma1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu), continuous through 0;
// gamma2 = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2. The series form avoids
// cancellation near mu = 0.
void temme_gammas(double mu, double& gamma1, double& gamma2) {
  const double inv_gamma_plus = 1.0 / std::tgamma(1.0 + mu);
  const double inv_gamma_minus = 1.0 / std::tgamma(1.0 - mu);
  gamma2 = 0.5 * (inv_gamma_minus + inv_gamma_plus);
  if (std::abs(mu) < 0.05) {
    // Only odd-index coefficients survive in the difference.
    const double m2 = mu * mu;
    double acc = 0.0;
    double power = 1.0;
    for (int k = 1; k < 14; k += 2) {
      acc += kInvGammaCoeff[k] * power;
      power *= m2;
    }
    gamma1 = -acc;
  } else {
    gamma1 = (inv_gamma_minus - inv_gamma_plus) / (2.0 * mu);
  }
}

// Power series for K_mu(x) and K_{mu+1}(x), |mu| <= 1/2, small x. Unscaled.
void bessel_k_series(double mu, double x, const BesselEvalPolicy& policy,
                     double& k_mu, double& k_mu1) {
  const double eps = policy.target_rel_error * 0.01;
  const double log_half_x = std::log(0.5 * x);
  const double sigma = -mu * log_half_x;
  const double pimu = kPi * mu;
  const double fact = (std::abs(pimu) < 1e-30) ? 1.0 : pimu / std::sin(pimu);
  const double sinh_ratio = (std::abs(sigma) < 1e-30) ? 1.0 : std::sinh(sigma) / sigma;
  double gamma1 = 0.0, gamma2 = 0.0;
  temme_gammas(mu, gamma1, gamma2);

  double f = fact * (gamma1 * std::cosh(sigma) + gamma2 * sinh_ratio * (-log_half_x));
  double p = 0.5 * std::exp(-mu * log_half_x) * std::tgamma(1.0 + mu);
  double q = 0.5 * std::exp(mu * log_half_x) * std::tgamma(1.0 - mu);
  double c = 1.0;
  const double x2_over_4 = 0.25 * x * x;
  double sum = f;
  double sum1 = p;
  for (int i = 1; i <= policy.max_iterations; ++i) {
    f = (i * f + p + q) / (i * i - mu * mu);
    c *= x2_over_4 / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * f;
    sum += del;
    sum1 += c * (p - i * f);
    if (std::abs(del) < std::abs(sum) * eps) {
      k_mu = sum;
      k_mu1 = sum1 * (2.0 / x);
      return;
    }
  }
  throw std::runtime_error("bessel_k: series failed to converge");
}

// Steed-style continued fraction for e^x K_mu(x) and e^x K_{mu+1}(x),
// |mu| <= 1/2, x >= ~2.
void bessel_k_cf2(double mu, double x, const BesselEvalPolicy& policy,
                  double& k_mu_scaled, double& k_mu1_scaled) {
  const double eps = policy.target_rel_error * 0.01;
  const double a1 = 0.25 - mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double delh = d;
  double h = delh;
  double q1 = 0.0;
  double q2 = 1.0;
  double a = -a1;
  double q = a1;
  double c = a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= policy.max_iterations; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) {
      h = a1 * h;
      k_mu_scaled = std::sqrt(kPi / (2.0 * x)) / s;
      k_mu1_scaled = k_mu_scaled * (mu + x + 0.5 - h) / x;
      return;
    }
  }
  throw std::runtime_error("bessel_k: continued fraction failed to converge");
}

// Seeds (K_mu, K_{mu+1}) -> K_{mu+steps} via the upward three-term
// recurrence. Every term is positive, so the walk is forward stable.
double recur_up(double k0, double k1, double mu, double x, int steps) {
  for (int i = 1; i <= steps; ++i) {
    const double knext = k0 + (2.0 * (mu + i) / x) * k1;
    k0 = k1;
    k1 = knext;
  }
  return k0;
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// Same walk on logarithms; immune to overflow at large order.
double log_recur_up(double l0, double l1, double mu, double x, int steps) {
  for (int i = 1; i <= steps; ++i) {
    const double lnext = log_add_exp(l0, std::log(2.0 * (mu + i) / x) + l1);
    l0 = l1;
    l1 = lnext;
  }
  return l0;
}

// Ascending series in log space for order far above the argument:
// K_nu(x) = (1/2) Gamma(nu) (2/x)^nu M with
// M = sum_k (-x^2/4)^k / (k! prod_{j<=k}(nu - j)). The companion series
// carrying (x/2)^{+nu} is smaller by ~ (x/2)^{2 nu} / Gamma(nu)^2 and is
// negligible in this regime.
double log_bessel_k_large_order(double nu, double x) {
  double term = 1.0;
  double m = 1.0;
  const double x2_over_4 = 0.25 * x * x;
  for (int k = 1; k < 400; ++k) {
    term *= -x2_over_4 / (k * (nu - k));
    m += term;
    if (std::abs(term) < 1e-17 * m) break;
  }
  return -kLn2 + log_gamma(nu) - nu * std::log(0.5 * x) + std::log(m);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    fail_domain("log_gamma: argument must be finite and > 0, got " + std::to_string(x));
  }
  return std::lgamma(x);
}

double bessel_k_scaled(double nu, double r, const BesselEvalPolicy& policy) {
  check_args(nu, r);
  const int steps = static_cast<int>(nu + 0.5);
  const double mu = nu - steps;
  double k0 = 0.0, k1 = 0.0;
  if (r < policy.small_arg_threshold) {
    bessel_k_series(mu, r, policy, k0, k1);
    const double scale = std::exp(r);
    k0 *= scale;
    k1 *= scale;
  } else {
    bessel_k_cf2(mu, r, policy, k0, k1);
  }
  return recur_up(k0, k1, mu, r, steps);
}

double log_bessel_k(double nu, double r, const BesselEvalPolicy& policy) {
  check_args(nu, r);
  if (nu > std::max(200.0, 3.0 * r * r + 20.0)) {
    return log_bessel_k_large_order(nu, r);
  }
  const int steps = static_cast<int>(nu + 0.5);
  const double mu = nu - steps;
  double k0 = 0.0, k1 = 0.0;
  if (r < policy.small_arg_threshold) {
    bessel_k_series(mu, r, policy, k0, k1);
    return log_recur_up(std::log(k0), std::log(k1), mu, r, steps);
  }
  bessel_k_cf2(mu, r, policy, k0, k1);
  return log_recur_up(std::log(k0) - r, std::log(k1) - r, mu, r, steps);
}

BesselResult bessel_k(double nu, double r, const BesselEvalPolicy& policy) {
  check_args(nu, r);
  const double lk = log_bessel_k(nu, r, policy);
  BesselResult out;
  if (lk < std::log(std::numeric_limits<double>::min()) + 2.0) {
    out.value = 0.0;
    out.underflowed = true;
    return out;
  }
  out.value = std::exp(lk);
  return out;
}

namespace {

void check_omega_args(const char* who, int dim, double s, double r) {
  if (dim < 1) fail_domain(std::string(who) + ": dim must be >= 1");
  if (!(s >= 0.0 && s < 1.0)) fail_domain(std::string(who) + ": s must lie in [0, 1)");
  if (!(r > 0.0) || !std::isfinite(r)) {
    fail_domain(std::string(who) + ": radius must be finite and > 0");
  }
}

}  // namespace

double omega_s(int dim, double s, double r) {
  check_omega_args("omega_s", dim, s, r);
  const double a = 0.5 * (dim + 2.0 * s);
  const double log_val = (1.0 - a) * kLn2 + a * std::log(r) + log_bessel_k(a, r);
  return std::exp(log_val);
}

double omega_s_scaled(int dim, double s, double r) {
  check_omega_args("omega_s_scaled", dim, s, r);
  const double a = 0.5 * (dim + 2.0 * s);
  return std::pow(2.0, 1.0 - a) * std::pow(r, a) * bessel_k_scaled(a, r);
}

}  // namespace logschro
