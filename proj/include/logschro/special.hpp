#pragma once

namespace logschro {

// Switch points and termination controls for the modified Bessel evaluation.
// Below small_arg_threshold the power series in r is used, at or above it the
// continued-fraction expansion; both are then walked up in the order by the
// standard three-term recurrence.
struct BesselEvalPolicy {
  double small_arg_threshold = 2.0;
  double target_rel_error = 1e-10;
  int max_iterations = 10000;
};

struct BesselResult {
  double value = 0.0;
  // K_nu(r) fell below the smallest positive double; value is exact zero.
  bool underflowed = false;
};

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// e^r K_nu(r) for nu >= 0, r > 0. Stays representable for large r; overflows
// only when K itself does (tiny r, large nu).
double bessel_k_scaled(double nu, double r, const BesselEvalPolicy& policy = {});

// K_nu(r) with explicit underflow reporting instead of a silent flush.
BesselResult bessel_k(double nu, double r, const BesselEvalPolicy& policy = {});

// ln K_nu(r). Handles orders far beyond the overflow range of K itself
// (the Green-function time integral probes nu up to ~1e8).
double log_bessel_k(double nu, double r, const BesselEvalPolicy& policy = {});

// Radial kernel profile omega_s(r) = 2^{1-a} r^a K_a(r), a = (dim + 2 s)/2,
// for dim >= 1, s in [0, 1), r > 0. s = 0 is the logarithmic case; the limit
// value at r -> 0+ is Gamma(a), but r = 0 itself is rejected.
double omega_s(int dim, double s, double r);

// e^r omega_s(r); the profile decays like e^{-r}, so the scaled form grows
// only algebraically and never underflows on the tail.
double omega_s_scaled(int dim, double s, double r);

}  // namespace logschro
