#include "logschro/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace logschro {
namespace {

double unit_uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;  // [0, 1), 53-bit resolution
}

// Cell order by ascending center distance, ties lexicographic.
std::vector<Eigen::Index> radial_order(const Mesh& mesh) {
  std::vector<Eigen::Index> order(mesh.count());
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double da = mesh.centers.row(a).squaredNorm();
    const double db = mesh.centers.row(b).squaredNorm();
    if (da != db) return da < db;
    for (int d = 0; d < mesh.dim; ++d) {
      if (mesh.centers(a, d) != mesh.centers(b, d)) {
        return mesh.centers(a, d) < mesh.centers(b, d);
      }
    }
    return false;
  });
  return order;
}

}  // namespace

Eigen::VectorXd rearrange(const Mesh& source, const Eigen::VectorXd& u,
                          const Mesh& target) {
  if (source.count() != target.count()) {
    throw std::domain_error("rearrange: cell counts differ (" +
                            std::to_string(source.count()) + " vs " +
                            std::to_string(target.count()) + ")");
  }
  if (u.size() != source.count()) {
    throw std::domain_error("rearrange: value count does not match the source mesh");
  }
  if (source.dim != target.dim ||
      std::abs(source.h - target.h) > 1e-12 * std::max(source.h, target.h)) {
    throw std::domain_error("rearrange: meshes must share dimension and cell size");
  }

  std::vector<double> sorted(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) sorted[i] = std::abs(u[i]);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  const std::vector<Eigen::Index> order = radial_order(target);
  Eigen::VectorXd out(u.size());
  for (Eigen::Index rank = 0; rank < u.size(); ++rank) {
    out[order[rank]] = sorted[rank];
  }
  return out;
}

RearrangementReport rearrangement_report(const Mesh& source, const StiffnessMatrix& A,
                                         const Eigen::VectorXd& u, const Mesh& ball,
                                         const StiffnessMatrix& A_ball, double slack) {
  const Eigen::VectorXd u_star = rearrange(source, u, ball);

  // Sum the squared values in one fixed order on both sides, so that exact
  // multiset preservation shows up as exact norm equality.
  auto l2_of_sorted = [&](const Eigen::VectorXd& v) {
    std::vector<double> s(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) s[i] = std::abs(v[i]);
    std::sort(s.begin(), s.end());
    double acc = 0.0;
    for (double x : s) acc += x * x;
    return std::sqrt(acc * A.mass_scale);
  };

  RearrangementReport report;
  report.energy_before = form_energy(A, u);
  report.energy_after = form_energy(A_ball, u_star);
  report.l2_before = l2_of_sorted(u);
  report.l2_after = l2_of_sorted(u_star);
  report.pass = report.energy_after <= report.energy_before * (1.0 + slack);
  return report;
}

FaberKrahnReport faber_krahn(const DomainSpec& domain, double h) {
  const Mesh mesh = build_mesh(domain, h);
  if (mesh.count() < 100) {
    throw std::domain_error("faber_krahn: mesh too coarse (" +
                            std::to_string(mesh.count()) +
                            " cells; need at least 100 to resolve the domain)");
  }
  const KernelSpec spec = KernelSpec::log_order(domain.dim);
  const Mesh ball = ball_mesh_with_count(domain.dim, h, mesh.count());

  FaberKrahnReport report;
  report.lambda_omega = solve_eigs(assemble_stiffness(mesh, spec), 1)[0].value;
  report.lambda_ball = solve_eigs(assemble_stiffness(ball, spec), 1)[0].value;
  report.margin = report.lambda_omega - report.lambda_ball;
  return report;
}

SmallOrderSweep small_order_sweep(const DomainSpec& domain, double h,
                                  const std::vector<double>& s_list, int k) {
  if (k < 1 || k > 5) {
    throw std::domain_error("small_order_sweep: need 1 <= k <= 5");
  }
  if (s_list.empty()) {
    throw std::domain_error("small_order_sweep: empty order list");
  }
  for (size_t i = 0; i < s_list.size(); ++i) {
    if (!(s_list[i] > 0.0) || !(s_list[i] < 0.5)) {
      throw std::domain_error(
          "small_order_sweep: orders must lie in (0, 1/2); indicator cells carry "
          "divergent energy at s = 1/2");
    }
    if (i > 0 && !(s_list[i] < s_list[i - 1])) {
      throw std::domain_error("small_order_sweep: orders must be strictly descending");
    }
  }

  const Mesh mesh = build_mesh(domain, h);
  const double root_mass = std::sqrt(std::pow(h, domain.dim));

  const StiffnessMatrix A_log =
      assemble_stiffness(mesh, KernelSpec::log_order(domain.dim));
  const std::vector<EigenPair> log_pairs = solve_eigs(A_log, k);
  const double reference = log_pairs[k - 1].value;
  const Eigen::VectorXd& psi_log = log_pairs[k - 1].vector;

  SmallOrderSweep sweep;
  for (double s : s_list) {
    const StiffnessMatrix A_s =
        assemble_stiffness(mesh, KernelSpec::frac_order(domain.dim, s));
    const std::vector<EigenPair> pairs = solve_eigs(A_s, k);

    SmallOrderRow row;
    row.s = s;
    row.lambda_ks = pairs[k - 1].value;
    row.quotient = (row.lambda_ks - 1.0) / s;
    row.reference = reference;
    row.deviation = std::abs(row.quotient - reference);
    sweep.rows.push_back(row);

    const Eigen::VectorXd& psi = pairs[k - 1].vector;
    const double dist = std::min((psi - psi_log).norm(), (psi + psi_log).norm());
    sweep.eigenfunction_distance.push_back(dist * root_mass);
  }
  return sweep;
}

ScalarBoundsReport scalar_bounds_check(int samples, std::uint64_t seed) {
  if (samples < 1) {
    throw std::domain_error("scalar_bounds_check: need at least one sample");
  }
  std::mt19937_64 rng(seed);

  ScalarBoundsReport report;
  report.samples = samples;
  report.pass = true;
  report.worst_slack_first = std::numeric_limits<double>::infinity();
  report.worst_slack_second = std::numeric_limits<double>::infinity();

  const double log_lo = std::log(1e-3), log_hi = std::log(1e3);
  for (int i = 0; i < samples; ++i) {
    const double r = std::exp(log_lo + (log_hi - log_lo) * unit_uniform(rng));
    double s = unit_uniform(rng);
    while (s == 0.0) s = unit_uniform(rng);

    const double log_term = std::log1p(r * r);
    const double quotient = std::expm1(s * log_term) / s;
    const double envelope = 2.0 * (1.0 + r * r * r * r);

    const double slack_first = envelope - std::abs(quotient);
    const double slack_second = s * envelope - std::abs(quotient - log_term);
    if (std::min(slack_first, slack_second) <
        std::min(report.worst_slack_first, report.worst_slack_second)) {
      report.worst_r = r;
      report.worst_s = s;
    }
    report.worst_slack_first = std::min(report.worst_slack_first, slack_first);
    report.worst_slack_second = std::min(report.worst_slack_second, slack_second);
    if (slack_first < 0.0 || slack_second < 0.0) report.pass = false;
  }
  return report;
}

MaxPrincipleReport max_principle_check(const StiffnessMatrix& A, int trials,
                                       std::uint64_t seed) {
  if (trials < 1) {
    throw std::domain_error("max_principle_check: need at least one trial");
  }
  if (A.order.order != KernelOrder::Log) {
    throw std::domain_error("max_principle_check: requires the logarithmic form");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(A.entries);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("max_principle_check: stiffness factorization failed");
  }

  std::mt19937_64 rng(seed);
  MaxPrincipleReport report;
  report.trials = trials;
  report.worst_min_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd f(A.entries.rows());
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = unit_uniform(rng);
    const Eigen::VectorXd u = llt.solve(A.mass_scale * f);
    const double sup = u.cwiseAbs().maxCoeff();
    const double ratio = sup > 0.0 ? u.minCoeff() / sup : 0.0;
    report.worst_min_ratio = std::min(report.worst_min_ratio, ratio);
  }
  report.pass = report.worst_min_ratio >= -1e-10;
  return report;
}

}  // namespace logschro
