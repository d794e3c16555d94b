// Acceptance gate: one criterion per invocation, argv[1] in 1..15.
// Prints supporting measurements, then exactly one [PASS criterion N] or
// [FAIL criterion N] verdict line, and exits nonzero on failure.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "logschro/analysis.hpp"
#include "logschro/fourier.hpp"
#include "logschro/galerkin.hpp"
#include "logschro/green.hpp"
#include "logschro/kernel.hpp"
#include "logschro/quadrature.hpp"
#include "logschro/singular_integral.hpp"
#include "logschro/special.hpp"

using namespace logschro;

namespace {

int g_criterion = 0;
bool g_ok = true;

void fail(const char* fmt, ...) {
  g_ok = false;
  std::fprintf(stderr, "  [x criterion %d] ", g_criterion);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

void require(bool cond, const char* fmt, ...) {
  if (cond) return;
  g_ok = false;
  std::fprintf(stderr, "  [x criterion %d] ", g_criterion);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

void note(const char* fmt, ...) {
  std::printf("  ");
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::putchar('\n');
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

Eigen::VectorXd direction(int dim) {
  Eigen::VectorXd v(dim);
  if (dim == 1) v << 1.0;
  if (dim == 2) v << 0.6, 0.8;
  if (dim == 3) v << 2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0;
  return v;
}

// Least-squares slope of y(x) over n log-spaced radii, with x = log r and
// y chosen per fit kind.
double fit_slope(double r_lo, double r_hi, int n, bool log_abscissa) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, double(i) / (n - 1));
    const double x = log_abscissa ? std::log(r) : r;
    const double y = std::log(green_radial(3, r));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- criterion bodies ------------------------------------------------------

void criterion01() {
  const KernelSpec spec = KernelSpec::log_order(1);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = 1e-3 * std::pow(3e4, i / 99.0);
    Eigen::VectorXd z(1);
    z << (i % 2 ? r : -r);
    worst = std::max(worst, rel_err(j_log(spec, z), std::exp(-r) / r));
  }
  note("j_log vs e^{-r}/r, worst relative error over 100 radii: %.3e", worst);
  require(worst <= 1e-10, "closed form missed: worst rel %.3e > 1e-10", worst);
}

void criterion02() {
  for (int dim : {1, 2, 3}) {
    const KernelSpec spec = KernelSpec::log_order(dim);
    const KernelConstants c = kernel_constants(spec);
    const Eigen::VectorXd e = direction(dim);
    for (double r : {1e-3, 1e-4, 1e-5}) {
      const double ratio = std::pow(r, dim) * j_log(spec, (r * e).eval()) / c.c_near;
      require(ratio >= 0.995 && ratio <= 1.005,
              "dim %d, r=%g: |z|^N J / c_N = %.6f outside [0.995, 1.005]", dim, r,
              ratio);
    }
    // The leading far-field model carries a first-order Bessel correction of
    // (dim^2 - 1)/(8 r); at dim 3 the half-integer expansion terminates and
    // the true ratio is exactly 1 + 1/r = 1.0333 at r = 30, outside the 2%
    // band demanded here, so that sub-check stays red.
    const double far = kernel_radial(spec, 30.0) /
                       kernel_asymptotic_radial(spec, 30.0, KernelRegime::FarField);
    note("dim %d: near ratio at 1e-3 = %.6f, far ratio at 30 = %.6f "
         "(first-order correction predicts %.6f)",
         dim, std::pow(1e-3, dim) * kernel_radial(spec, 1e-3) / c.c_near, far,
         1.0 + (dim * dim - 1.0) / 240.0);
    require(std::abs(far - 1.0) <= 0.02,
            "dim %d: far-field prefactor ratio %.4f off by more than 2%%", dim, far);
  }
}

void criterion03() {
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double r = 1e-2 * std::pow(5e3, i / 59.0);
    const double k_half = std::sqrt(M_PI / (2.0 * r)) * std::exp(-r);
    worst = std::max(worst, rel_err(bessel_k(0.5, r).value, k_half));
    worst = std::max(worst, rel_err(bessel_k(1.5, r).value, k_half * (1.0 + 1.0 / r)));
  }
  note("half-integer orders vs closed forms, worst rel: %.3e", worst);
  require(worst <= 1e-10, "Bessel golden values missed: worst rel %.3e", worst);

  int violations = 0;
  double prev_col[50];
  for (int i = 0; i < 50; ++i) {
    const double nu = 0.1 + (5.0 - 0.1) * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const double r = 1e-2 * std::pow(5e3, j / 49.0);
      const double v = bessel_k(nu, r).value;
      if (j > 0 && v >= bessel_k(nu, 1e-2 * std::pow(5e3, (j - 1) / 49.0)).value) {
        ++violations;  // must decrease in r
      }
      if (i > 0 && v <= prev_col[j]) ++violations;  // must increase in nu
      prev_col[j] = v;
    }
  }
  note("order/argument monotonicity violations on 50x50 grid: %d", violations);
  require(violations == 0, "%d monotonicity violations", violations);
}

void criterion04() {
  PeriodicGrid grid;
  grid.dim = 1;
  grid.extent = 40.0;
  grid.points = 1024;
  grid.validate();
  const KernelSpec spec = KernelSpec::log_order(1);

  const double xi = grid.frequency(25);
  const PeriodicField wave = PeriodicField::from_function(
      grid, [xi](Eigen::Ref<const Eigen::VectorXd> x) { return std::cos(xi * x[0]); });
  const PeriodicField applied = apply_symbol(wave, spec);
  const double sup =
      (applied.values() - std::log1p(xi * xi) * wave.values()).lpNorm<Eigen::Infinity>();
  note("plane-wave eigenrelation sup error: %.3e", sup);
  require(sup <= 1e-12, "plane-wave relation sup %.3e > 1e-12", sup);

  const PeriodicField gauss = PeriodicField::from_function(
      grid, [](Eigen::Ref<const Eigen::VectorXd> x) { return std::exp(-x[0] * x[0]); });
  const PeriodicField spectral = apply_symbol(gauss, spec);
  double worst = 0.0;
  for (int offset : {0, 10, 20, 30, 40}) {
    const int k = grid.points / 2 + offset;
    Eigen::VectorXd x(1);
    x << grid.coordinate(k);
    const double direct = eval_singular_integral(
        [](Eigen::Ref<const Eigen::VectorXd> p) { return std::exp(-p[0] * p[0]); }, x);
    Eigen::VectorXi idx(1);
    idx << k;
    worst = std::max(worst, std::abs(spectral.value_at(idx) - direct));
  }
  note("Gaussian spectral vs pointwise quadrature, worst abs: %.3e", worst);
  require(worst <= 1e-5, "quadrature-vs-spectral gap %.3e > 1e-5", worst);
}

void criterion05() {
  const PointFunction u = [](Eigen::Ref<const Eigen::VectorXd> p) {
    return std::exp(-p[0] * p[0]);
  };
  const double points[5] = {0.0, 0.35, 0.8, 1.3, 2.1};
  double sup[3] = {0.0, 0.0, 0.0};
  const double orders[3] = {0.1, 0.05, 0.025};
  for (double p : points) {
    Eigen::VectorXd x(1);
    x << p;
    const double log_val = eval_singular_integral(u, x);
    for (int i = 0; i < 3; ++i) {
      sup[i] = std::max(sup[i], std::abs(difference_quotient(u, x, orders[i]) - log_val));
    }
  }
  const double r1 = sup[0] / sup[1];
  const double r2 = sup[1] / sup[2];
  note("sup |D_s u - L u| = %.6f, %.6f, %.6f at s = 0.1, 0.05, 0.025", sup[0], sup[1],
       sup[2]);
  note("halving ratios: %.3f, %.3f", r1, r2);
  require(r1 >= 1.6 && r1 <= 2.4, "first halving ratio %.3f outside [1.6, 2.4]", r1);
  require(r2 >= 1.6 && r2 <= 2.4, "second halving ratio %.3f outside [1.6, 2.4]", r2);
}

void criterion06() {
  double worst_cf = 0.0;
  for (double r : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    worst_cf = std::max(worst_cf,
                        rel_err(heat_kernel_radial(1, 1.0, r), 0.5 * std::exp(-r)));
  }
  note("q_1 vs e^{-|x|}/2, worst rel: %.3e", worst_cf);
  require(worst_cf <= 1e-10, "closed form at t=1 missed: %.3e", worst_cf);

  for (int dim : {1, 3}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const double mass = heat_kernel_mass(dim, t);
      require(std::abs(mass - 1.0) <= 1e-6, "dim %d, t=%g: mass %.9f off by > 1e-6",
              dim, t, mass);
    }
  }
  note("mass = 1 within 1e-6 for t in {0.5, 1, 2}, dim in {1, 3}");

  double worst_sg = 0.0;
  for (double x : {0.0, 0.7, 2.5}) {
    worst_sg = std::max(worst_sg, std::abs(heat_kernel_convolution_1d(0.5, 0.5, x) -
                                           heat_kernel_radial(1, 1.0, std::abs(x))));
    worst_sg = std::max(worst_sg, std::abs(heat_kernel_convolution_1d(1.0, 2.0, x) -
                                           heat_kernel_radial(1, 3.0, std::abs(x))));
  }
  note("semigroup q_t * q_tau vs q_{t+tau}, worst abs: %.3e", worst_sg);
  require(worst_sg <= 1e-6, "semigroup defect %.3e > 1e-6", worst_sg);
}

void criterion07() {
  // Near-origin log-log slope. The exact near model carries a log(1/r)^{-2}
  // correction on top of r^{-3}, which steepens measured slopes toward -2.7
  // on this window; the plain power-law reading below misses the stated
  // tolerance and keeps this sub-check red.
  const double near_slope = fit_slope(1e-3, 1e-2, 10, true);
  note("log-log slope on [1e-3, 1e-2]: %.6f (required -3 within 5%%)", near_slope);
  require(std::abs(near_slope - (-3.0)) <= 0.15,
          "near slope %.6f outside -3 +- 0.15", near_slope);

  // Far-field decay rate, semilog fit d log G / dr. The time integral of the
  // heat kernel keeps the long-time diffusive tail, so G crosses over to the
  // Newtonian 1/(4 pi r) regime and the measured rate sits near -0.04, far
  // from an exponential rate of -1; red by construction.
  const double far_rate = fit_slope(20.0, 30.0, 10, false);
  note("semilog decay rate on [20, 30]: %.6f (required -1 within 2%%)", far_rate);
  note("log-log slope on [20, 30]: %.6f (Newtonian tail)", fit_slope(20.0, 30.0, 10, true));
  require(std::abs(far_rate - (-1.0)) <= 0.02,
          "far decay rate %.6f outside -1 +- 0.02", far_rate);

  // Operator-inverse consistency: solve with a radial bump source and compare
  // five interior values against an independent radial convolution oracle
  // (exact kernel-radius integration with a closed-form near-singular part).
  const double R = 1.8;
  const auto bump = [R](double s) {
    const double q = s * s / (R * R);
    return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
  };
  FreeSpaceGrid grid;
  grid.validate();
  Eigen::VectorXd f(grid.num_cells());
  int k[3];
  Eigen::VectorXd x(3);
  for (Eigen::Index lin = 0; lin < grid.num_cells(); ++lin) {
    grid.unravel(lin, k);
    for (int d = 0; d < 3; ++d) x[d] = grid.coordinate(k[d]);
    f[lin] = bump(x.norm());
  }
  const FreeSpacePoisson sol = poisson_free_space(grid, f);

  const GreenInterpolant interp(3, 1e-4, 12.0, 700);
  AdaptiveOptions opt;
  opt.rel_tol = 1e-9;
  const auto shell_mass = [&](double a, double b) {
    b = std::min(b, R);
    if (b <= a) return 0.0;
    return integrate_adaptive([&](double s) { return s * bump(s); }, a, b, opt).value;
  };
  const double kGamma = 0.57721566490153286;
  const double kappa = 4.0 * (kGamma + std::log(2.0) - 1.0);
  const auto u_oracle = [&](double r) {
    // |z| < delta: G integrates to 1/lambda + kappa/(2 lambda^2) exactly at
    // leading orders, with lambda = 2 log(2/delta); the source is flat there.
    const double delta = 1e-3;
    const double lambda = 2.0 * std::log(2.0 / delta);
    const double sliver = bump(r) * (1.0 / lambda + kappa / (2.0 * lambda * lambda));
    const double far =
        integrate_adaptive(
            [&](double v) {
              const double t = std::exp(v);
              return t * t * interp(t) * shell_mass(std::abs(r - t), r + t);
            },
            std::log(delta), std::log(r + R), opt)
            .value;
    return sliver + 2.0 * M_PI / r * far;
  };

  const int c = grid.points_per_axis / 2;
  const auto lin_at = [&](int i, int j, int l) {
    return (Eigen::Index(i) * grid.points_per_axis + j) * grid.points_per_axis + l;
  };
  double worst = 0.0;
  for (int off = 1; off <= 5; ++off) {
    const double r = off * grid.spacing;
    const double grid_u = sol.values[lin_at(c + off, c, c)];
    const double oracle = u_oracle(r);
    const double rel = std::abs(grid_u - oracle) / std::abs(oracle);
    worst = std::max(worst, rel);
    note("bump solve at r=%.2f: grid %.9g, oracle %.9g, rel %.3e", r, grid_u, oracle,
         rel);
  }
  require(worst <= 1e-2, "operator-inverse consistency %.3e > 1e-2", worst);
  require(sol.decay.finite, "decay probe hit a non-finite value");
}

void criterion08() {
  const KernelSpec spec = KernelSpec::log_order(1);
  const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 2.0 / 64);
  const StiffnessMatrix A = assemble_stiffness(mesh, spec);
  const Eigen::Index n = mesh.count();

  const double asym = (A.entries - A.entries.transpose()).cwiseAbs().maxCoeff();
  require(asym == 0.0, "matrix not exactly symmetric: %.3e", asym);

  int positive_offdiag = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && A.entries(i, j) > 0.0) ++positive_offdiag;
    }
  }
  require(positive_offdiag == 0, "%d positive off-diagonal entries", positive_offdiag);

  const double min_rowsum = A.entries.rowwise().sum().minCoeff();
  require(min_rowsum > 0.0, "minimum row sum %.3e not positive", min_rowsum);

  const Eigen::LLT<Eigen::MatrixXd> llt(A.entries);
  require(llt.info() == Eigen::Success, "Cholesky factorization failed");

  // Row sums against an independent quadrature: row i sums to the
  // interaction of cell i with the complement of the interval, one side
  // integral of the half-line tail mass per endpoint.
  const auto half_tail = [&](double d) { return 0.5 * tail_mass(spec, d); };
  const auto side = [&](double d_lo, double d_hi) {
    if (d_lo < 1e-13) return integrate_log_panels(half_tail, 1e-14, d_hi, 16, 14);
    return integrate_panels(half_tail, d_lo, d_hi, 16, 2);
  };
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double center = mesh.centers(i, 0);
    const double h = mesh.h;
    const double expected = side(center - 0.5 * h + 1.0, center + 0.5 * h + 1.0) +
                            side(1.0 - center - 0.5 * h, 1.0 - center + 0.5 * h);
    worst = std::max(worst, rel_err(A.entries.row(i).sum(), expected));
  }
  note("symmetry gap 0, off-diagonals <= 0, row sums > 0, Cholesky ok");
  note("row sums vs complement quadrature, worst rel: %.3e", worst);
  require(worst <= 1e-5, "row-sum cross-check %.3e > 1e-5", worst);
}

void criterion09() {
  const KernelSpec spec = KernelSpec::log_order(1);
  double lambda1[3];
  std::vector<EigenPair> finest;
  const int sizes[3] = {64, 128, 256};
  for (int i = 0; i < 3; ++i) {
    const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 2.0 / sizes[i]);
    const StiffnessMatrix A = assemble_stiffness(mesh, spec);
    std::vector<EigenPair> pairs = solve_eigs(A, 3);
    lambda1[i] = pairs[0].value;
    note("M=%d: lambda_1 = %.10f, lambda_2 = %.10f", sizes[i], pairs[0].value,
         pairs[1].value);
    if (i == 2) finest = std::move(pairs);
  }

  require(finest[0].value > 0.0, "lambda_1 = %.6f not positive", finest[0].value);
  require(finest[1].value > finest[0].value, "spectral gap %.3e not positive",
          finest[1].value - finest[0].value);

  const double min_entry = finest[0].vector.minCoeff();
  require(min_entry > 0.0, "first eigenfunction changes sign (min entry %.3e)",
          min_entry);

  const double h = 2.0 / 256;
  double ortho = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double ip = h * finest[a].vector.dot(finest[b].vector);
      ortho = std::max(ortho, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }
  }
  note("orthonormality defect: %.3e", ortho);
  require(ortho <= 1e-8, "orthonormality defect %.3e > 1e-8", ortho);

  const double bound = poincare_lower_bound(2.0, 1);
  note("certified lower bound %.10f <= lambda_1 %.10f", bound, finest[0].value);
  require(finest[0].value >= bound, "lambda_1 %.6f below certified bound %.6f",
          finest[0].value, bound);

  const double cauchy = std::abs(lambda1[0] - lambda1[1]) /
                        std::abs(lambda1[1] - lambda1[2]);
  note("refinement Cauchy factor: %.3f", cauchy);
  require(cauchy >= 1.5, "Cauchy factor %.3f < 1.5", cauchy);
}

void criterion10() {
  const Mesh interval = build_mesh(DomainSpec::interval(-1.0, 1.0), 2.0 / 64);
  const StiffnessMatrix A1 =
      assemble_stiffness(interval, KernelSpec::log_order(1));
  const MaxPrincipleReport r1 = max_principle_check(A1, 20, 42);
  note("interval, 20 trials: worst min(u)/||u|| = %.3e", r1.worst_min_ratio);
  require(r1.pass, "interval mesh violated the minimum bound: %.3e",
          r1.worst_min_ratio);

  const Mesh square = build_mesh(DomainSpec::square(1.0), 1.0 / 16);
  const StiffnessMatrix A2 = assemble_stiffness(square, KernelSpec::log_order(2));
  const MaxPrincipleReport r2 = max_principle_check(A2, 20, 43);
  note("square, 20 trials: worst min(u)/||u|| = %.3e", r2.worst_min_ratio);
  require(r2.pass, "square mesh violated the minimum bound: %.3e",
          r2.worst_min_ratio);
}

void criterion11() {
  const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 2.0 / 64);
  const StiffnessMatrix A_log =
      assemble_stiffness(mesh, KernelSpec::log_order(1));
  const Eigen::Index n = mesh.count();
  const double orders[3] = {0.1, 0.05, 0.025};
  double defect[3];
  for (int i = 0; i < 3; ++i) {
    const StiffnessMatrix A_s =
        assemble_stiffness(mesh, KernelSpec::frac_order(1, orders[i]));
    const Eigen::MatrixXd quotient =
        (A_s.entries - A_s.mass_scale * Eigen::MatrixXd::Identity(n, n)) / orders[i];
    defect[i] = (quotient - A_log.entries).cwiseAbs().maxCoeff();
  }
  const double r1 = defect[0] / defect[1];
  const double r2 = defect[1] / defect[2];
  note("matrix defects %.6f, %.6f, %.6f at s = 0.1, 0.05, 0.025", defect[0], defect[1],
       defect[2]);
  note("halving ratios: %.3f, %.3f", r1, r2);
  require(r1 >= 1.5 && r1 <= 2.5, "first ratio %.3f outside [1.5, 2.5]", r1);
  require(r2 >= 1.5 && r2 <= 2.5, "second ratio %.3f outside [1.5, 2.5]", r2);
}

void criterion12() {
  const SmallOrderSweep sweep = small_order_sweep(
      DomainSpec::interval(-1.0, 1.0), 2.0 / 128, {0.2, 0.1, 0.05}, 1);
  for (const SmallOrderRow& row : sweep.rows) {
    note("s=%.2f: lambda = %.8f, (lambda-1)/s = %.8f, reference %.8f, deviation %.8f",
         row.s, row.lambda_ks, row.quotient, row.reference, row.deviation);
  }
  const double r1 = sweep.rows[0].deviation / sweep.rows[1].deviation;
  const double r2 = sweep.rows[1].deviation / sweep.rows[2].deviation;
  note("deviation halving ratios: %.3f, %.3f", r1, r2);
  require(r1 >= 1.5 && r1 <= 2.5, "first ratio %.3f outside [1.5, 2.5]", r1);
  require(r2 >= 1.5 && r2 <= 2.5, "second ratio %.3f outside [1.5, 2.5]", r2);
  const double dist = sweep.eigenfunction_distance.back();
  note("eigenfunction L2 distance at s = 0.05: %.6f", dist);
  require(dist <= 0.05, "eigenfunction distance %.6f > 0.05", dist);
}

void criterion13() {
  // Square and 4:1 rectangle of measure one at h = 1/32 mesh into 1024 cells
  // each, so both comparisons run against the same lattice ball.
  const FaberKrahnReport square = faber_krahn(DomainSpec::square(1.0), 1.0 / 32);
  note("square:     lambda = %.10f, ball %.10f, margin %.10f", square.lambda_omega,
       square.lambda_ball, square.margin);
  require(square.margin > 0.0, "square margin %.3e not positive", square.margin);

  const FaberKrahnReport disc = faber_krahn(DomainSpec::disc(1.0), 0.1);
  note("disc:       lambda = %.10f, ball %.10f, margin %.3e", disc.lambda_omega,
       disc.lambda_ball, disc.margin);
  require(std::abs(disc.margin) <= 1e-8, "ball-vs-itself margin %.3e exceeds 1e-8",
          disc.margin);

  const FaberKrahnReport rect =
      faber_krahn(DomainSpec::rectangle(2.0, 0.5), 1.0 / 32);
  note("rectangle:  lambda = %.10f, ball %.10f, margin %.10f", rect.lambda_omega,
       rect.lambda_ball, rect.margin);
  require(rect.margin > square.margin,
          "rectangle margin %.6f not above square margin %.6f", rect.margin,
          square.margin);
}

void criterion14() {
  const Mesh mesh = build_mesh(DomainSpec::disc(1.0), 0.1);
  const Mesh ball = ball_mesh_with_count(2, 0.1, mesh.count());
  const KernelSpec spec = KernelSpec::log_order(2);
  const StiffnessMatrix A = assemble_stiffness(mesh, spec);
  const StiffnessMatrix A_ball = assemble_stiffness(ball, spec);

  std::mt19937_64 rng(20260817);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd u(mesh.count());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = unif(rng);
    const RearrangementReport rep = rearrangement_report(mesh, A, u, ball, A_ball);
    if (!rep.pass) ++violations;
    worst_ratio = std::max(worst_ratio, rep.energy_after / rep.energy_before);
    if (rep.l2_after != rep.l2_before) {
      fail("trial %d: L2 norm changed (%.17g -> %.17g)", trial, rep.l2_before,
           rep.l2_after);
    }
  }
  note("50 trials: worst E(u*)/E(u) = %.6f, violations %d", worst_ratio, violations);
  require(violations == 0, "%d trials exceeded the 1.02 energy slack", violations);
}

void criterion15() {
  const ScalarBoundsReport rep = scalar_bounds_check(10000, 42);
  note("%d samples: worst slack %.6f (first bound), %.3e (second bound)", rep.samples,
       rep.worst_slack_first, rep.worst_slack_second);
  note("tightest sample: r = %.6f, s = %.6f", rep.worst_r, rep.worst_s);
  require(rep.pass, "scalar bounds violated (slacks %.3e, %.3e at r=%g, s=%g)",
          rep.worst_slack_first, rep.worst_slack_second, rep.worst_r, rep.worst_s);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..15>\n", argv[0]);
    return 2;
  }
  g_criterion = std::atoi(argv[1]);
  static const char* kLabels[16] = {
      "",
      "closed-form kernel on the line",
      "kernel asymptotics near zero and at infinity",
      "Bessel golden values and monotonicity",
      "symbol exactness on a periodic grid",
      "difference-quotient convergence rate",
      "heat kernel identities",
      "Green function asymptotics and operator inverse",
      "stiffness matrix structure",
      "Dirichlet eigenvalue suite",
      "discrete maximum principle",
      "matrix small-order limit",
      "eigenvalue small-order expansion",
      "fixed-measure shape comparison",
      "rearrangement energy decrease",
      "elementary scalar bounds",
  };
  if (g_criterion < 1 || g_criterion > 15) {
    std::fprintf(stderr, "criterion must be 1..15, got '%s'\n", argv[1]);
    return 2;
  }

  using Clock = std::chrono::steady_clock;
  const Clock::time_point start = Clock::now();
  switch (g_criterion) {
    case 1: criterion01(); break;
    case 2: criterion02(); break;
    case 3: criterion03(); break;
    case 4: criterion04(); break;
    case 5: criterion05(); break;
    case 6: criterion06(); break;
    case 7: criterion07(); break;
    case 8: criterion08(); break;
    case 9: criterion09(); break;
    case 10: criterion10(); break;
    case 11: criterion11(); break;
    case 12: criterion12(); break;
    case 13: criterion13(); break;
    case 14: criterion14(); break;
    case 15: criterion15(); break;
  }
  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();

  std::printf("[%s criterion %d] %s (%.2f s)\n", g_ok ? "PASS" : "FAIL", g_criterion,
              kLabels[g_criterion], seconds);
  return g_ok ? 0 : 1;
}
