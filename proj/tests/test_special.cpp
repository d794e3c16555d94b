#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "logschro/special.hpp"

using namespace logschro;

namespace {

// Half-integer orders collapse to elementary functions:
//   K_{1/2}(r) = sqrt(pi/(2r)) e^{-r},  K_{3/2}(r) = K_{1/2}(r) (1 + 1/r).
double k_half(double r) { return std::sqrt(M_PI / (2.0 * r)) * std::exp(-r); }
double k_three_halves(double r) { return k_half(r) * (1.0 + 1.0 / r); }

}  // namespace

TEST_CASE("half-order Bessel values match the elementary closed forms") {
  CHECK(bessel_k(0.5, 1.0).value == doctest::Approx(0.4610685044478946).epsilon(1e-12));
  CHECK(bessel_k(1.5, 2.0).value == doctest::Approx(0.1799066579520922).epsilon(1e-12));

  for (int i = 0; i < 60; ++i) {
    const double r = 1e-2 * std::pow(5000.0, i / 59.0);
    CHECK(bessel_k(0.5, r).value == doctest::Approx(k_half(r)).epsilon(1e-10));
    CHECK(bessel_k(1.5, r).value == doctest::Approx(k_three_halves(r)).epsilon(1e-10));
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(bessel_k(-0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0.5, -1.0), std::domain_error);
}

TEST_CASE("small-argument leading behavior") {
  // K_nu(r) ~ Gamma(nu)/2 (2/r)^nu for nu > 0, K_0(r) ~ -log(r/2) - gamma.
  const double r = 1e-8;
  CHECK(bessel_k(1.0, r).value == doctest::Approx(1.0 / r).epsilon(1e-6));
  const double k0 = bessel_k(0.0, r).value;
  CHECK(k0 == doctest::Approx(-std::log(r / 2.0) - 0.5772156649015329).epsilon(1e-8));
}

TEST_CASE("scaled evaluation agrees and survives large arguments") {
  for (double nu : {0.0, 0.5, 1.5, 3.0}) {
    const double r = 12.0;
    CHECK(bessel_k_scaled(nu, r) ==
          doctest::Approx(bessel_k(nu, r).value * std::exp(r)).epsilon(1e-12));
  }
  // Unscaled value underflows near r ~ 750; the scaled one must not.
  const double big = 800.0;
  const BesselResult raw = bessel_k(0.5, big);
  CHECK(raw.underflowed);
  CHECK(bessel_k_scaled(0.5, big) == doctest::Approx(std::sqrt(M_PI / (2.0 * big))).epsilon(1e-10));
  CHECK(log_bessel_k(0.5, big) ==
        doctest::Approx(0.5 * std::log(M_PI / (2.0 * big)) - big).epsilon(1e-12));
}

TEST_CASE("log evaluation is the log of the value where both exist") {
  for (double nu : {0.0, 0.5, 2.0}) {
    for (double r : {0.1, 1.0, 30.0}) {
      CHECK(log_bessel_k(nu, r) ==
            doctest::Approx(std::log(bessel_k(nu, r).value)).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotonicity in argument and order") {
  // K_nu(r) decreases in r and increases in nu >= 0. Checked on a grid; any
  // violation means the evaluation switched branches inconsistently.
  int violations = 0;
  for (int i = 0; i < 50; ++i) {
    const double nu = 0.1 + 4.9 * i / 49.0;
    double prev = 0.0;
    for (int j = 0; j < 50; ++j) {
      const double r = 1e-2 * std::pow(5e3, j / 49.0);
      const double v = bessel_k(nu, r).value;
      if (j > 0 && v >= prev) ++violations;
      prev = v;
      if (i > 0 && v <= bessel_k(0.1 + 4.9 * (i - 1) / 49.0, r).value) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("profile function limits") {
  // omega_s(r) = 2^{1-(N+2s)/2} r^{(N+2s)/2} K_{(N+2s)/2}(r); at r -> 0 it
  // tends to Gamma((N+2s)/2), and for N=1, s=0 it is sqrt(pi) e^{-r} exactly.
  for (int dim : {1, 2, 3}) {
    for (double s : {0.0, 0.25, 0.45}) {
      const double a = 0.5 * (dim + 2.0 * s);
      CHECK(omega_s(dim, s, 1e-9) == doctest::Approx(std::tgamma(a)).epsilon(1e-6));
    }
  }
  for (double r : {0.2, 1.0, 5.0}) {
    CHECK(omega_s(1, 0.0, r) == doctest::Approx(std::sqrt(M_PI) * std::exp(-r)).epsilon(1e-12));
    CHECK(omega_s_scaled(1, 0.0, r) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  }
}

TEST_CASE("profile function rejects bad parameters") {
  CHECK_THROWS_AS(omega_s(0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(omega_s(1, -0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(omega_s(1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(omega_s(1, 0.0, 0.0), std::domain_error);
}

TEST_CASE("log_gamma agrees with the standard library") {
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
  for (double x : {0.1, 1.0, 4.5, 20.0, 171.0}) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
}
