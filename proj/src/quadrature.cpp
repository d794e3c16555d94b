#include "logschro/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace logschro {
namespace {

GaussRule compute_gauss_legendre(int order) {
  if (order < 1 || order > 512) {
    throw std::domain_error("gauss_legendre: order out of range [1, 512]");
  }
  // Golub-Welsch: eigenvalues of the symmetric tridiagonal Jacobi matrix are
  // the nodes, squared first eigenvector components (times 2) the weights.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * v0 * v0;
  }
  return rule;
}

// 15-point Kronrod extension of 7-point Gauss (positive half; symmetric).
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelEstimate {
  double value = 0.0;
  double error = 0.0;
};

PanelEstimate gauss_kronrod_15(const std::function<double(double)>& f,
                               double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(mid - half * kKronrodNodes[i]);
    fv[14 - i] = f(mid + half * kKronrodNodes[i]);
  }
  fv[7] = f(mid);
  double kron = 0.0;
  for (int i = 0; i < 7; ++i) {
    kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
  }
  kron += kKronrodWeights[7] * fv[7];
  double gauss = kGaussWeights[3] * fv[7];
  for (int i = 0; i < 3; ++i) {
    gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  }
  PanelEstimate est;
  est.value = kron * half;
  est.error = std::abs(kron - gauss) * std::abs(half);
  return est;
}

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, compute_gauss_legendre(order)).first;
  }
  return it->second;
}

AdaptiveOutcome integrate_adaptive(const std::function<double(double)>& f,
                                   double a, double b,
                                   const AdaptiveOptions& options) {
  AdaptiveOutcome out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Segment> queue;
  PanelEstimate first = gauss_kronrod_15(f, a, b);
  queue.push({a, b, first.value, first.error});
  double total = first.value;
  double total_error = first.error;
  int used = 1;
  while (used < options.max_intervals) {
    const double goal = std::max(options.abs_tol, options.rel_tol * std::abs(total));
    if (total_error <= goal) break;
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) {
      // Interval at machine resolution; accept its estimate as-is.
      queue.push({worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    PanelEstimate left = gauss_kronrod_15(f, worst.a, mid);
    PanelEstimate right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push({worst.a, mid, left.value, left.error});
    queue.push({mid, worst.b, right.value, right.error});
    ++used;
  }
  out.value = total;
  out.error_estimate = total_error;
  out.intervals = used;
  out.converged =
      total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  return out;
}

double Box::volume() const {
  double v = 1.0;
  for (int d = 0; d < dim; ++d) v *= (hi[d] - lo[d]);
  return v;
}

double integrate_box(const BoxFunction& f, const Box& box, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const int dim = box.dim;
  double mid[3], half[3];
  for (int d = 0; d < dim; ++d) {
    mid[d] = 0.5 * (box.lo[d] + box.hi[d]);
    half[d] = 0.5 * (box.hi[d] - box.lo[d]);
  }
  double total = 0.0;
  double x[3];
  if (dim == 1) {
    for (int i = 0; i < order; ++i) {
      x[0] = mid[0] + half[0] * rule.nodes[i];
      total += rule.weights[i] * f(x);
    }
  } else if (dim == 2) {
    for (int i = 0; i < order; ++i) {
      x[0] = mid[0] + half[0] * rule.nodes[i];
      double inner = 0.0;
      for (int j = 0; j < order; ++j) {
        x[1] = mid[1] + half[1] * rule.nodes[j];
        inner += rule.weights[j] * f(x);
      }
      total += rule.weights[i] * inner;
    }
  } else {
    for (int i = 0; i < order; ++i) {
      x[0] = mid[0] + half[0] * rule.nodes[i];
      double acc_i = 0.0;
      for (int j = 0; j < order; ++j) {
        x[1] = mid[1] + half[1] * rule.nodes[j];
        double acc_j = 0.0;
        for (int k = 0; k < order; ++k) {
          x[2] = mid[2] + half[2] * rule.nodes[k];
          acc_j += rule.weights[k] * f(x);
        }
        acc_i += rule.weights[j] * acc_j;
      }
      total += rule.weights[i] * acc_i;
    }
  }
  double scale = 1.0;
  for (int d = 0; d < dim; ++d) scale *= half[d];
  return total * scale;
}

namespace {

bool closure_contains(const Box& box, const std::array<double, 3>& p) {
  for (int d = 0; d < box.dim; ++d) {
    const double tol = 1e-12 * (box.hi[d] - box.lo[d]);
    if (p[d] < box.lo[d] - tol || p[d] > box.hi[d] + tol) return false;
  }
  return true;
}

double graded_recurse(const BoxFunction& f, const Box& box,
                      const std::array<double, 3>& p, int order, int levels) {
  if (levels == 0 || !closure_contains(box, p)) {
    return integrate_box(f, box, order);
  }
  // Split every axis at its midpoint; 2^dim children.
  const int children = 1 << box.dim;
  double total = 0.0;
  for (int c = 0; c < children; ++c) {
    Box child = box;
    for (int d = 0; d < box.dim; ++d) {
      const double mid = 0.5 * (box.lo[d] + box.hi[d]);
      if (c & (1 << d)) {
        child.lo[d] = mid;
      } else {
        child.hi[d] = mid;
      }
    }
    total += graded_recurse(f, child, p, order, levels - 1);
  }
  return total;
}

}  // namespace

double integrate_box_graded(const BoxFunction& f, const Box& box,
                            const std::array<double, 3>& singular_point,
                            int order, int levels) {
  return graded_recurse(f, box, singular_point, order, levels);
}

}  // namespace logschro
