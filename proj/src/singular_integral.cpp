#include "logschro/singular_integral.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "logschro/kernel.hpp"
#include "logschro/quadrature.hpp"

namespace logschro {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Radius below which the (already vanishing) integrand is dropped entirely.
// The omitted mass is O(floor^{2-2s}) and the roundoff noise of the second
// difference stays below the agreement tolerance down to this radius.
constexpr double kInnerFloor = 1e-12;

struct Direction {
  Eigen::Vector3d theta;
  double weight;
};

// Full-sphere angular rules; weights sum to |S^{dim-1}|.
std::vector<Direction> make_directions(int dim, int angular_nodes) {
  std::vector<Direction> dirs;
  if (dim == 1) {
    dirs.push_back({Eigen::Vector3d(1, 0, 0), 1.0});
    dirs.push_back({Eigen::Vector3d(-1, 0, 0), 1.0});
    return dirs;
  }
  if (dim == 2) {
    const int m = angular_nodes;
    dirs.reserve(m);
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * kPi * (j + 0.5) / m;
      dirs.push_back({Eigen::Vector3d(std::cos(phi), std::sin(phi), 0),
                      2.0 * kPi / m});
    }
    return dirs;
  }
  const GaussRule& mu_rule = gauss_legendre(angular_nodes);
  const int m = angular_nodes;
  dirs.reserve(static_cast<size_t>(angular_nodes) * m);
  for (int i = 0; i < angular_nodes; ++i) {
    const double mu = mu_rule.nodes[i];
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * kPi * (j + 0.5) / m;
      dirs.push_back({Eigen::Vector3d(sin_theta * std::cos(phi),
                                      sin_theta * std::sin(phi), mu),
                      mu_rule.weights[i] * 2.0 * kPi / m});
    }
  }
  return dirs;
}

// integral over r in (0, cutoff] and theta over the sphere of
// g(r, theta) * radial_weight(r), with the inner stretch done in log-radius.
template <typename G, typename W>
double polar_integral(int dim, const G& g, const W& radial_weight,
                      const QuadratureScheme& scheme, int extra_nodes,
                      int angular_factor) {
  const std::vector<Direction> dirs =
      make_directions(dim, scheme.angular_nodes * angular_factor);
  const int inner_n = scheme.inner_nodes + extra_nodes;
  const int outer_n = scheme.outer_nodes + extra_nodes;

  double total = 0.0;
  auto accumulate_radius = [&](double r, double w_r) {
    const double kernel_w = radial_weight(r) * w_r;
    if (kernel_w == 0.0) return;
    double angular_sum = 0.0;
    for (const Direction& d : dirs) angular_sum += d.weight * g(r, d.theta);
    total += kernel_w * angular_sum;
  };

  // Inner stretch in v = ln r; the integrand carries the extra factor r.
  const double v_lo = std::log(kInnerFloor);
  const double v_hi = std::log(scheme.radial_split);
  const int inner_panels =
      std::max(4, static_cast<int>(std::ceil((v_hi - v_lo) / 3.0))) +
      (extra_nodes > 0 ? 4 : 0);
  const GaussRule& inner_rule = gauss_legendre(inner_n);
  for (int p = 0; p < inner_panels; ++p) {
    const double a = v_lo + (v_hi - v_lo) * p / inner_panels;
    const double b = v_lo + (v_hi - v_lo) * (p + 1) / inner_panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < inner_n; ++q) {
      const double v = mid + half * inner_rule.nodes[q];
      const double r = std::exp(v);
      accumulate_radius(r, half * inner_rule.weights[q] * r);
    }
  }

  // Outer stretch in plain radius, short panels against the e^{-r} decay.
  const double span = scheme.radial_cutoff - scheme.radial_split;
  const double width = extra_nodes > 0 ? 1.75 : 2.5;
  const int outer_panels = std::max(2, static_cast<int>(std::ceil(span / width)));
  const GaussRule& outer_rule = gauss_legendre(outer_n);
  for (int p = 0; p < outer_panels; ++p) {
    const double a = scheme.radial_split + span * p / outer_panels;
    const double b = scheme.radial_split + span * (p + 1) / outer_panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < outer_n; ++q) {
      const double r = mid + half * outer_rule.nodes[q];
      accumulate_radius(r, half * outer_rule.weights[q]);
    }
  }
  return total;
}

// Runs the base and refined rules; returns the refined value or raises
// AccuracyError when they disagree.
template <typename G, typename W>
double checked_polar_integral(const char* who, int dim, const G& g,
                              const W& radial_weight,
                              const QuadratureScheme& scheme) {
  const int angular_factor = dim == 1 ? 1 : 2;
  const double coarse = polar_integral(dim, g, radial_weight, scheme, 0, 1);
  const double fine =
      polar_integral(dim, g, radial_weight, scheme, 8, angular_factor);
  const double achieved = std::abs(fine - coarse);
  if (!(achieved <= scheme.agreement_tol)) {
    throw AccuracyError(std::string(who) +
                            ": refinement changed the value by " +
                            std::to_string(achieved) +
                            " (tolerance " + std::to_string(scheme.agreement_tol) + ")",
                        achieved);
  }
  return fine;
}

int checked_dim(const char* who, Eigen::Ref<const Eigen::VectorXd> x) {
  const int dim = static_cast<int>(x.size());
  if (dim < 1 || dim > 3) {
    throw std::domain_error(std::string(who) + ": point dimension must be 1, 2, or 3");
  }
  return dim;
}

// Second difference 2u(x) - u(x + r theta) - u(x - r theta) as a function of
// (r, theta); shared by the logarithmic and fractional quadratures.
class SecondDifference {
 public:
  SecondDifference(const PointFunction& u, Eigen::Ref<const Eigen::VectorXd> x)
      : u_(u), x_(x), center_(2.0 * u(x)), shifted_(x.size()) {}

  double operator()(double r, const Eigen::Vector3d& theta) const {
    const int dim = static_cast<int>(x_.size());
    for (int a = 0; a < dim; ++a) shifted_[a] = x_[a] + r * theta[a];
    const double plus = u_(shifted_);
    for (int a = 0; a < dim; ++a) shifted_[a] = x_[a] - r * theta[a];
    const double minus = u_(shifted_);
    return center_ - plus - minus;
  }

 private:
  const PointFunction& u_;
  Eigen::VectorXd x_;
  double center_;
  mutable Eigen::VectorXd shifted_;
};

}  // namespace

void QuadratureScheme::validate() const {
  if (!(radial_split > 0.0) || !std::isfinite(radial_split)) {
    throw std::domain_error("QuadratureScheme: radial_split must be finite and > 0");
  }
  if (!(radial_cutoff >= 40.0) || !(radial_cutoff > radial_split)) {
    throw std::domain_error(
        "QuadratureScheme: radial_cutoff must be >= 40 and beyond radial_split");
  }
  if (inner_nodes < 2 || outer_nodes < 2) {
    throw std::domain_error("QuadratureScheme: need at least 2 radial nodes");
  }
  if (angular_nodes < 2 || angular_nodes % 2 != 0) {
    throw std::domain_error("QuadratureScheme: angular_nodes must be even and >= 2");
  }
  if (!(agreement_tol > 0.0)) {
    throw std::domain_error("QuadratureScheme: agreement_tol must be > 0");
  }
}

double eval_singular_integral(const PointFunction& u,
                              Eigen::Ref<const Eigen::VectorXd> x,
                              const QuadratureScheme& scheme) {
  scheme.validate();
  const int dim = checked_dim("eval_singular_integral", x);
  const KernelSpec spec = KernelSpec::log_order(dim);
  const SecondDifference g(u, x);
  auto weight = [&](double r) {
    // (d_N/2) omega(r)/r^dim times the polar factor r^{dim-1}.
    return 0.5 * kernel_radial(spec, r) * std::pow(r, dim - 1);
  };
  return checked_polar_integral("eval_singular_integral", dim, g, weight, scheme);
}

double difference_quotient(const PointFunction& u,
                           Eigen::Ref<const Eigen::VectorXd> x, double s,
                           const QuadratureScheme& scheme) {
  scheme.validate();
  const int dim = checked_dim("difference_quotient", x);
  if (!(s > 0.0) || !(s < 0.5)) {
    throw std::domain_error("difference_quotient: s must lie in (0, 1/2), got " +
                            std::to_string(s));
  }
  const KernelSpec spec = KernelSpec::frac_order(dim, s);
  const SecondDifference g(u, x);
  auto weight = [&](double r) {
    return kernel_radial(spec, r) * std::pow(r, dim - 1) / (2.0 * s);
  };
  return checked_polar_integral("difference_quotient", dim, g, weight, scheme);
}

ProductRuleResult product_rule_defect(const PointFunction& phi,
                                      const PointFunction& psi,
                                      Eigen::Ref<const Eigen::VectorXd> x,
                                      const QuadratureScheme& scheme) {
  scheme.validate();
  const int dim = checked_dim("product_rule_defect", x);
  const KernelSpec spec = KernelSpec::log_order(dim);

  PointFunction product = [&](Eigen::Ref<const Eigen::VectorXd> y) {
    return phi(y) * psi(y);
  };
  const double lhs = eval_singular_integral(product, x, scheme);
  const double op_phi = eval_singular_integral(phi, x, scheme);
  const double op_psi = eval_singular_integral(psi, x, scheme);

  // Bilinear term: one-sided differences against the kernel; the full-sphere
  // angular rule covers both signs of each direction.
  const double phi_x = phi(x);
  const double psi_x = psi(x);
  Eigen::VectorXd shifted(dim);
  auto g = [&](double r, const Eigen::Vector3d& theta) {
    for (int a = 0; a < dim; ++a) shifted[a] = x[a] + r * theta[a];
    return (phi_x - phi(shifted)) * (psi_x - psi(shifted));
  };
  auto weight = [&](double r) {
    return kernel_radial(spec, r) * std::pow(r, dim - 1);
  };
  const double bilinear =
      checked_polar_integral("product_rule_defect", dim, g, weight, scheme);

  ProductRuleResult out;
  out.lhs = lhs;
  out.rhs = phi_x * op_psi + psi_x * op_phi - bilinear;
  out.defect = out.lhs - out.rhs;
  return out;
}

}  // namespace logschro
