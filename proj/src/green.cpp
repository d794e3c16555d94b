#include "logschro/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "logschro/quadrature.hpp"
#include "logschro/special.hpp"

namespace logschro {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kEulerGamma = 0.57721566490153286061;

double sphere_measure(int dim) {
  return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

void check_time(const char* who, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::domain_error(std::string(who) + ": time must be finite and > 0");
  }
}

double adaptive_or_throw(const char* who, const std::function<double(double)>& f,
                         double a, double b, double abs_tol) {
  AdaptiveOptions opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = abs_tol;
  const AdaptiveOutcome out = integrate_adaptive(f, a, b, opts);
  if (!out.converged) {
    throw std::runtime_error(std::string(who) +
                             ": adaptive quadrature stalled (error estimate " +
                             std::to_string(out.error_estimate) + ")");
  }
  return out.value;
}

}  // namespace

double heat_kernel_radial(int dim, double t, double r) {
  if (dim < 1) throw std::domain_error("heat_kernel: dim must be >= 1");
  check_time("heat_kernel", t);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::domain_error("heat_kernel: radius must be finite and >= 0");
  }
  if (r == 0.0) {
    if (!(t > 0.5 * dim)) {
      throw std::domain_error(
          "heat_kernel: singular at the origin for t <= dim/2 (t = " +
          std::to_string(t) + ", dim = " + std::to_string(dim) + ")");
    }
    return std::exp(-dim * kLn2 - 0.5 * dim * std::log(kPi) +
                    log_gamma(t - 0.5 * dim) - log_gamma(t));
  }
  const double nu = t - 0.5 * dim;
  const double lf = (1.0 - dim) * kLn2 - 0.5 * dim * std::log(kPi) - log_gamma(t) +
                    nu * std::log(0.5 * r) + log_bessel_k(std::abs(nu), r);
  return std::exp(lf);
}

double heat_kernel(int dim, double t, Eigen::Ref<const Eigen::VectorXd> x) {
  if (x.size() != dim) {
    throw std::domain_error("heat_kernel: point dimension does not match dim");
  }
  return heat_kernel_radial(dim, t, x.norm());
}

double heat_kernel_mass(int dim, double t) {
  if (dim < 1) throw std::domain_error("heat_kernel_mass: dim must be >= 1");
  check_time("heat_kernel_mass", t);

  // Inner stretch in log radius: the radial integrand q_t(r) r^{dim-1} times
  // the substitution factor r behaves like r^{2t}, flat at the left end.
  const double v_lo = std::log(1e-12);
  const double v_hi = std::log(0.5);
  auto inner = [&](double v) {
    const double r = std::exp(v);
    return heat_kernel_radial(dim, t, r) * std::pow(r, dim - 1) * r;
  };
  const double head = integrate_panels(inner, v_lo, v_hi, 20, 9);

  auto body_fn = [&](double r) {
    return heat_kernel_radial(dim, t, r) * std::pow(r, dim - 1);
  };
  const double body =
      adaptive_or_throw("heat_kernel_mass", body_fn, 0.5, 60.0 + 5.0 * t, 1e-12);
  return sphere_measure(dim) * (head + body);
}

double heat_kernel_fourier(int dim, double t, double xi) {
  check_time("heat_kernel_fourier", t);
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw std::domain_error("heat_kernel_fourier: frequency must be finite and > 0");
  }
  if (dim != 1 && dim != 3) {
    throw std::domain_error(
        "heat_kernel_fourier: radial reduction implemented for dims 1 and 3 only");
  }
  std::function<double(double)> integrand;
  double prefactor = 0.0;
  if (dim == 1) {
    prefactor = 2.0;
    integrand = [=](double r) {
      return std::cos(xi * r) * heat_kernel_radial(1, t, r);
    };
  } else {
    prefactor = 4.0 * kPi / xi;
    integrand = [=](double r) {
      return r * std::sin(xi * r) * heat_kernel_radial(3, t, r);
    };
  }
  // Split at 1: the left piece holds the integrable r^{2t-dim} origin
  // behavior, the right piece decays exponentially.
  const double head = adaptive_or_throw("heat_kernel_fourier", integrand, 0.0, 1.0, 1e-11);
  const double tail = adaptive_or_throw("heat_kernel_fourier", integrand, 1.0,
                                        80.0 + 2.0 * t, 1e-11);
  return prefactor * (head + tail);
}

double heat_kernel_convolution_1d(double t, double tau, double x) {
  check_time("heat_kernel_convolution_1d", t);
  check_time("heat_kernel_convolution_1d", tau);
  if (!std::isfinite(x)) {
    throw std::domain_error("heat_kernel_convolution_1d: x must be finite");
  }
  auto integrand = [&](double y) {
    return heat_kernel_radial(1, t, std::abs(y)) *
           heat_kernel_radial(1, tau, std::abs(x - y));
  };
  // The factors are singular (for small orders) exactly at y = 0 and y = x;
  // both become panel endpoints, which the Gauss-Kronrod nodes never touch.
  const double window = std::abs(x) + 70.0;
  std::vector<double> edges = {-window, 0.0, x, window};
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] > edges[i]) {
      total += adaptive_or_throw("heat_kernel_convolution_1d", integrand, edges[i],
                                 edges[i + 1], 1e-10);
    }
  }
  return total;
}

void GreenQuadrature::validate() const {
  if (!(t_lower_cut > 0.0) || !(t_lower_cut <= 0.01)) {
    throw std::domain_error("GreenQuadrature: t_lower_cut must lie in (0, 0.01]");
  }
  if (!(t_upper_cut >= 50.0) || !std::isfinite(t_upper_cut)) {
    throw std::domain_error("GreenQuadrature: t_upper_cut must be finite and >= 50");
  }
  if (panel_nodes < 4 || tail_nodes < 8) {
    throw std::domain_error("GreenQuadrature: need panel_nodes >= 4, tail_nodes >= 8");
  }
}

double green_radial(int dim, double r, const GreenQuadrature& quad) {
  quad.validate();
  if (dim <= 2) {
    throw std::domain_error(
        "green_radial: the time integral diverges for dim <= 2 (integrand decays "
        "like t^{-dim/2}); only dim >= 3 is supported");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("green_radial: radius must be finite and > 0");
  }

  auto f = [&](double t) { return heat_kernel_radial(dim, t, r); };

  double total = 0.0;
  // Geometric panels toward t = 0, where the integrand vanishes like
  // t * J(r) (the 1/Gamma(t) factor).
  const double geo_hi = 0.25;
  const int geo_panels = std::max(
      4, static_cast<int>(std::ceil(std::log(geo_hi / quad.t_lower_cut) / std::log(2.5))));
  const double geo_ratio = std::pow(geo_hi / quad.t_lower_cut, 1.0 / geo_panels);
  double lo = quad.t_lower_cut;
  for (int p = 0; p < geo_panels; ++p) {
    const double hi = (p + 1 == geo_panels) ? geo_hi : lo * geo_ratio;
    total += integrate_panels(f, lo, hi, quad.panel_nodes, 1);
    lo = hi;
  }

  // Uniform panels across the zero crossing of the Bessel order at t = dim/2.
  const double mid_hi = std::max(5.5, 0.5 * dim + 2.5);
  const int mid_panels = static_cast<int>(std::ceil((mid_hi - geo_hi) / 0.75));
  total += integrate_panels(f, geo_hi, mid_hi, quad.panel_nodes, mid_panels);

  // Log-spaced panels out to the cut.
  total += integrate_log_panels(
      f, mid_hi, quad.t_upper_cut, quad.panel_nodes,
      std::max(6, static_cast<int>(std::ceil(std::log(quad.t_upper_cut / mid_hi) / 0.45))));

  // Exact algebraic fold of the tail: t = T/u^2 maps (T, infinity) onto
  // (0, 1]; the folded integrand tends to a finite limit at u = 0 for dim 3
  // and vanishes there for dim > 3, so plain Gauss nodes resolve it.
  const double T = quad.t_upper_cut;
  const GaussRule& rule = gauss_legendre(quad.tail_nodes);
  for (int q = 0; q < quad.tail_nodes; ++q) {
    const double u = 0.5 + 0.5 * rule.nodes[q];
    const double w = 0.5 * rule.weights[q];
    total += w * f(T / (u * u)) * 2.0 * T / (u * u * u);
  }
  return total;
}

double green_fn(int dim, Eigen::Ref<const Eigen::VectorXd> x,
                const GreenQuadrature& quad) {
  if (x.size() != dim) {
    throw std::domain_error("green_fn: point dimension does not match dim");
  }
  const double r = x.norm();
  if (r == 0.0) {
    throw std::domain_error("green_fn: singular at the origin");
  }
  return green_radial(dim, r, quad);
}

GreenInterpolant::GreenInterpolant(int dim, double r_min, double r_max, int points,
                                   const GreenQuadrature& quad)
    : r_min_(r_min), r_max_(r_max) {
  if (!(r_min > 0.0) || !(r_max > r_min)) {
    throw std::domain_error("GreenInterpolant: need 0 < r_min < r_max");
  }
  if (points < 16) {
    throw std::domain_error("GreenInterpolant: need at least 16 table points");
  }
  log_r_.resize(points);
  log_g_.resize(points);
  const double lo = std::log(r_min), hi = std::log(r_max);
  for (int i = 0; i < points; ++i) {
    log_r_[i] = lo + (hi - lo) * i / (points - 1);
    log_g_[i] = std::log(green_radial(dim, std::exp(log_r_[i]), quad));
  }

  // Natural cubic spline on the uniform log-radius grid (Thomas solve).
  const int n = points;
  const double h = (hi - lo) / (n - 1);
  second_deriv_.assign(n, 0.0);
  std::vector<double> diag(n, 2.0), rhs(n, 0.0), upper(n, 0.5);
  for (int i = 1; i + 1 < n; ++i) {
    rhs[i] = 3.0 * (log_g_[i - 1] - 2.0 * log_g_[i] + log_g_[i + 1]) / (h * h);
  }
  // Forward sweep over interior unknowns with natural (zero) endpoints.
  for (int i = 2; i + 1 < n; ++i) {
    const double m = 0.5 / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  for (int i = n - 2; i >= 1; --i) {
    second_deriv_[i] = (rhs[i] - upper[i] * second_deriv_[i + 1]) / diag[i];
  }
}

double GreenInterpolant::operator()(double r) const {
  if (!(r >= r_min_ * (1.0 - 1e-12)) || !(r <= r_max_ * (1.0 + 1e-12))) {
    throw std::domain_error("GreenInterpolant: radius " + std::to_string(r) +
                            " outside table range");
  }
  const double v = std::log(std::min(std::max(r, r_min_), r_max_));
  const int n = static_cast<int>(log_r_.size());
  const double h = (log_r_.back() - log_r_.front()) / (n - 1);
  int i = static_cast<int>((v - log_r_.front()) / h);
  i = std::min(std::max(i, 0), n - 2);
  const double a = (log_r_[i + 1] - v) / h;
  const double b = 1.0 - a;
  const double y = a * log_g_[i] + b * log_g_[i + 1] +
                   ((a * a * a - a) * second_deriv_[i] +
                    (b * b * b - b) * second_deriv_[i + 1]) *
                       h * h / 6.0;
  return std::exp(y);
}

void FreeSpaceGrid::validate() const {
  if (points_per_axis < 3 || points_per_axis % 2 == 0) {
    throw std::domain_error("FreeSpaceGrid: points_per_axis must be odd and >= 3");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::domain_error("FreeSpaceGrid: spacing must be finite and > 0");
  }
}

double FreeSpaceGrid::coordinate(int j) const {
  return (j - (points_per_axis - 1) / 2) * spacing;
}

double FreeSpaceGrid::half_extent() const {
  return 0.5 * (points_per_axis - 1) * spacing;
}

Eigen::Index FreeSpaceGrid::num_cells() const {
  const Eigen::Index n = points_per_axis;
  return n * n * n;
}

void FreeSpaceGrid::unravel(Eigen::Index linear, int* k_out) const {
  for (int a = 2; a >= 0; --a) {
    k_out[a] = static_cast<int>(linear % points_per_axis);
    linear /= points_per_axis;
  }
}

namespace {

// Exact cell integral of G over the cube of side h centered at the origin:
// six congruent pyramids, each flattened by z = sigma * (a, b, 1) so the
// radial factor sigma^2 absorbs the volume element. The innermost stretch
// sigma * l < r0 uses the two-term near model
//   G(r) ~ c_3 r^{-3} [lambda^{-2} + kappa lambda^{-4/2}...], lambda = 2 ln(2/r),
// whose sigma integral is closed-form; beyond r0 the tabulated G is
// integrated in log sigma.
double cell_integral_of_green(double h, const GreenInterpolant& table) {
  const double c3 = std::tgamma(1.5) * std::pow(kPi, -1.5);
  // psi(3/2) = 2 - gamma - 2 ln 2; kappa = 2 (gamma - psi(3/2)).
  const double kappa = 2.0 * (2.0 * kEulerGamma + 2.0 * kLn2 - 2.0);
  const double r0 = 1e-6;
  const double lambda0 = 2.0 * std::log(2.0 / r0);
  const double analytic_factor =
      c3 * (0.5 / lambda0 + 0.25 * kappa / (lambda0 * lambda0));

  const GaussRule& ab_rule = gauss_legendre(12);
  const GaussRule& sig_rule = gauss_legendre(16);
  double total = 0.0;
  for (int ia = 0; ia < 12; ++ia) {
    const double a = ab_rule.nodes[ia];
    for (int ib = 0; ib < 12; ++ib) {
      const double b = ab_rule.nodes[ib];
      const double ell = std::sqrt(1.0 + a * a + b * b);
      const double sigma0 = r0 / ell;
      // integral over sigma in (0, sigma0): model term, closed form.
      double column = analytic_factor / (ell * ell * ell);
      // integral over sigma in [sigma0, h/2] in v = ln sigma.
      const double v_lo = std::log(sigma0), v_hi = std::log(0.5 * h);
      const int panels = 5;
      for (int p = 0; p < panels; ++p) {
        const double pa = v_lo + (v_hi - v_lo) * p / panels;
        const double pb = v_lo + (v_hi - v_lo) * (p + 1) / panels;
        const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
        for (int q = 0; q < 16; ++q) {
          const double v = mid + half * sig_rule.nodes[q];
          const double sigma = std::exp(v);
          column += half * sig_rule.weights[q] * table(sigma * ell) * sigma * sigma *
                    sigma;
        }
      }
      total += ab_rule.weights[ia] * ab_rule.weights[ib] * column;
    }
  }
  return 6.0 * total;
}

// Average of G over the cell at lattice offset (a, b, c) * h, offset != 0.
double cell_average_of_green(double h, int a, int b, int c,
                             const GreenInterpolant& table) {
  Box box;
  box.dim = 3;
  const int off[3] = {a, b, c};
  for (int d = 0; d < 3; ++d) {
    box.lo[d] = off[d] * h - 0.5 * h;
    box.hi[d] = off[d] * h + 0.5 * h;
  }
  auto g = [&](const double* z) {
    const double r = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    return table(r);
  };
  const int order = (std::max({std::abs(a), std::abs(b), std::abs(c)}) == 1) ? 24 : 16;
  return integrate_box(g, box, order) / (h * h * h);
}

}  // namespace

FreeSpacePoisson poisson_free_space(const FreeSpaceGrid& grid,
                                    const Eigen::VectorXd& f,
                                    const GreenQuadrature& quad) {
  grid.validate();
  if (f.size() != grid.num_cells()) {
    throw std::domain_error("poisson_free_space: expected " +
                            std::to_string(grid.num_cells()) + " samples, got " +
                            std::to_string(f.size()));
  }
  if (!f.allFinite()) {
    throw std::domain_error("poisson_free_space: f must be finite");
  }
  const int n = grid.points_per_axis;
  const double h = grid.spacing;
  const double support_limit = 0.5 * grid.half_extent();

  // Collect the support and enforce the compactness margin.
  std::vector<Eigen::Index> support;
  std::vector<std::array<int, 3>> support_idx;
  int k[3];
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    if (f[j] == 0.0) continue;
    grid.unravel(j, k);
    const double sup_coord = std::max(
        {std::abs(grid.coordinate(k[0])), std::abs(grid.coordinate(k[1])),
         std::abs(grid.coordinate(k[2]))});
    if (sup_coord > support_limit + 1e-12) {
      throw std::domain_error(
          "poisson_free_space: f is not compactly supported inside the grid "
          "(nonzero sample beyond half the grid extent)");
    }
    support.push_back(j);
    support_idx.push_back({k[0], k[1], k[2]});
  }

  FreeSpacePoisson out;
  out.values = Eigen::VectorXd::Zero(f.size());
  out.decay.shell_inner = 0.6 * grid.half_extent();
  out.decay.shell_outer = 0.9 * grid.half_extent();

  if (!support.empty()) {
    const double diameter = 2.0 * std::sqrt(3.0) * grid.half_extent();
    const GreenInterpolant table(3, 1e-6, diameter + 1.0, 900, quad);

    // Kernel value per offset class (sorted absolute offsets). Midpoint value
    // beyond sup-norm offset 2, cell average up to it, Duffy cell integral at
    // the origin (stored as an average, the h^3 factor is applied once).
    std::vector<double> offset_value(static_cast<size_t>(n) * n * n, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          const size_t idx = (static_cast<size_t>(a) * n + b) * n + c;
          const int sup = std::max({a, b, c});
          if (sup == 0) {
            offset_value[idx] = cell_integral_of_green(h, table) / (h * h * h);
          } else if (sup <= 2) {
            offset_value[idx] = cell_average_of_green(h, a, b, c, table);
          } else {
            const double r = h * std::sqrt(double(a) * a + double(b) * b + double(c) * c);
            offset_value[idx] = table(r);
          }
        }
      }
    }

    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
      grid.unravel(i, k);
      double acc = 0.0;
      for (size_t m = 0; m < support.size(); ++m) {
        const int a = std::abs(k[0] - support_idx[m][0]);
        const int b = std::abs(k[1] - support_idx[m][1]);
        const int c = std::abs(k[2] - support_idx[m][2]);
        acc += offset_value[(static_cast<size_t>(a) * n + b) * n + c] * f[support[m]];
      }
      out.values[i] = acc * h * h * h;
    }
  }

  // Decay diagnostics over the outer probe shell.
  double sup_weighted = 0.0;
  bool finite = out.values.allFinite();
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    grid.unravel(i, k);
    const double r = std::sqrt(std::pow(grid.coordinate(k[0]), 2) +
                               std::pow(grid.coordinate(k[1]), 2) +
                               std::pow(grid.coordinate(k[2]), 2));
    if (r >= out.decay.shell_inner && r <= out.decay.shell_outer) {
      const double weighted = std::exp(r) * std::abs(out.values[i]);
      if (!std::isfinite(weighted)) finite = false;
      sup_weighted = std::max(sup_weighted, weighted);
    }
  }
  out.decay.sup_exp_weighted = sup_weighted;
  out.decay.finite = finite;
  return out;
}

PeriodicField poisson_periodic(const PeriodicField& f) {
  const PeriodicGrid& grid = f.grid();
  const Eigen::VectorXcd& coeffs = f.coefficients();
  const double scale = std::max(f.values().cwiseAbs().maxCoeff(), 1e-300);
  const double mean = std::abs(coeffs[0]) / static_cast<double>(grid.num_cells());
  if (mean > 1e-12 * scale) {
    throw std::domain_error(
        "poisson_periodic: f has nonzero mean (relative " + std::to_string(mean / scale) +
        "), but the symbol log(1 + |xi|^2) vanishes at the zero frequency, so "
        "the zero mode is not invertible");
  }
  const KernelSpec spec = KernelSpec::log_order(grid.dim);
  Eigen::VectorXcd solved(coeffs.size());
  solved[0] = 0.0;
  for (Eigen::Index i = 1; i < coeffs.size(); ++i) {
    solved[i] = coeffs[i] / symbol_value(spec, grid.frequency_squared(i));
  }
  return PeriodicField::from_coefficients(grid, solved);
}

}  // namespace logschro
