#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace logschro {

// Polar quadrature controls for the pointwise singular integrals. The radial
// line is split at radial_split: below it the integration runs in log-radius
// (the symmetrized integrand vanishes like r^2 there, so no principal value
// is needed), above it plain panels up to radial_cutoff. Angular rules are
// fixed per dimension: 2-point for dim 1, equispaced midpoints on the circle
// for dim 2, Gauss in the polar cosine times equispaced azimuths for dim 3.
struct QuadratureScheme {
  double radial_split = 1.0;
  int inner_nodes = 20;
  int outer_nodes = 20;
  int angular_nodes = 24;
  double radial_cutoff = 40.0;
  // Every evaluation is repeated on a refined rule; absolute disagreement
  // beyond this raises AccuracyError.
  double agreement_tol = 1e-8;

  void validate() const;
};

// Quadrature self-check failure: the refined rule moved the result by more
// than the agreement tolerance. Carries the achieved agreement.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_agreement)
      : std::runtime_error(what), achieved(achieved_agreement) {}
  double achieved;
};

using PointFunction = std::function<double(Eigen::Ref<const Eigen::VectorXd>)>;

// Pointwise logarithmic operator on a smooth function with two bounded
// derivatives: (d_N/2) * integral of (2u(x) - u(x+y) - u(x-y)) per the jump
// kernel. Dimension is taken from x. Smoothness of u near x is the caller's
// contract; the tail beyond radial_cutoff must be negligible.
double eval_singular_integral(const PointFunction& u,
                              Eigen::Ref<const Eigen::VectorXd> x,
                              const QuadratureScheme& scheme = {});

// (1/s) times the jump part of the order-s operator, by the same symmetrized
// polar quadrature against the fractional kernel. Converges to
// eval_singular_integral as s decreases. Requires s in (0, 1/2); beyond that
// the second-difference cancellation exceeds double-precision headroom.
double difference_quotient(const PointFunction& u,
                           Eigen::Ref<const Eigen::VectorXd> x, double s,
                           const QuadratureScheme& scheme = {});

struct ProductRuleResult {
  double lhs = 0.0;     // operator applied to the product phi*psi at x
  double rhs = 0.0;     // phi(x) op(psi) + psi(x) op(phi) - bilinear term
  double defect = 0.0;  // lhs - rhs
};

// Checks the exact product identity for the logarithmic operator. The
// bilinear correction integrates (phi(x)-phi(y))(psi(x)-psi(y)) against the
// jump kernel with the same scheme.
ProductRuleResult product_rule_defect(const PointFunction& phi,
                                      const PointFunction& psi,
                                      Eigen::Ref<const Eigen::VectorXd> x,
                                      const QuadratureScheme& scheme = {});

}  // namespace logschro
