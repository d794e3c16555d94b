#pragma once

#include <array>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace logschro {

struct GaussRule {
  Eigen::VectorXd nodes;    // ascending, on [-1, 1]
  Eigen::VectorXd weights;  // sum to 2
};

// Gauss-Legendre rule of the given order, computed once and cached.
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] split into equal panels.
template <class F>
double integrate_panels(F&& f, double a, double b, int order, int panels = 1) {
  const GaussRule& rule = gauss_legendre(order);
  double total = 0.0;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    double acc = 0.0;
    for (int i = 0; i < order; ++i) {
      acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    total += acc * half;
  }
  return total;
}

// Composite Gauss-Legendre with geometrically spaced panel edges; resolves
// integrands whose scale varies over decades. Requires 0 < a < b.
template <class F>
double integrate_log_panels(F&& f, double a, double b, int order, int panels) {
  const double ratio = std::pow(b / a, 1.0 / panels);
  double total = 0.0;
  double lo = a;
  for (int p = 0; p < panels; ++p) {
    const double hi = (p + 1 == panels) ? b : lo * ratio;
    total += integrate_panels(f, lo, hi, order, 1);
    lo = hi;
  }
  return total;
}

struct AdaptiveOptions {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  int max_intervals = 20000;
};

struct AdaptiveOutcome {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  int intervals = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod bisection.
AdaptiveOutcome integrate_adaptive(const std::function<double(double)>& f,
                                   double a, double b,
                                   const AdaptiveOptions& options = {});

// Axis-aligned box in 1..3 dimensions.
struct Box {
  int dim = 1;
  std::array<double, 3> lo{{0.0, 0.0, 0.0}};
  std::array<double, 3> hi{{0.0, 0.0, 0.0}};
  double volume() const;
};

using BoxFunction = std::function<double(const double*)>;

// Tensor Gauss-Legendre over a box.
double integrate_box(const BoxFunction& f, const Box& box, int order);

// Box integral of a function with one integrable point singularity on the
// closure of the box: bisect every axis, recurse only into the child boxes
// whose closure contains the singular point, integrate the rest by tensor
// Gauss. Geometric grading concentrates nodes where the integrand blows up.
double integrate_box_graded(const BoxFunction& f, const Box& box,
                            const std::array<double, 3>& singular_point,
                            int order, int levels);

}  // namespace logschro
