#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "logschro/galerkin.hpp"

namespace logschro {

// One step of the small-order sweep: eigenvalue of the fractional form at
// order s against the logarithmic reference on the same mesh.
struct SmallOrderRow {
  double s = 0.0;
  double lambda_ks = 0.0;  // k-th eigenvalue of the fractional form, > 1
  double quotient = 0.0;   // (lambda_ks - 1) / s
  double reference = 0.0;  // k-th eigenvalue of the logarithmic form
  double deviation = 0.0;  // |quotient - reference|
};

struct SmallOrderSweep {
  std::vector<SmallOrderRow> rows;
  // min over sign of the L2(h) distance between the order-s and logarithmic
  // k-th eigenfunctions, one entry per s
  std::vector<double> eigenfunction_distance;
};

struct RearrangementReport {
  double energy_before = 0.0;
  double energy_after = 0.0;
  double l2_before = 0.0;
  double l2_after = 0.0;
  bool pass = false;
};

struct FaberKrahnReport {
  double lambda_omega = 0.0;
  double lambda_ball = 0.0;
  double margin = 0.0;  // lambda_omega - lambda_ball
};

struct ScalarBoundsReport {
  int samples = 0;
  bool pass = false;
  double worst_slack_first = 0.0;   // min of 2(1+r^4) - |((1+r^2)^s - 1)/s|
  double worst_slack_second = 0.0;  // min of 2s(1+r^4) - |quotient - log(1+r^2)|
  double worst_r = 0.0;
  double worst_s = 0.0;
};

struct MaxPrincipleReport {
  int trials = 0;
  bool pass = false;
  double worst_min_ratio = 0.0;  // min over trials of min(u) / ||u||_inf
};

// Symmetric decreasing rearrangement at the cell level: values of |u| sorted
// descending, assigned to the target cells sorted ascending by center
// distance, ties broken lexicographically. Meshes must share h and count.
Eigen::VectorXd rearrange(const Mesh& source, const Eigen::VectorXd& u,
                          const Mesh& target);

// Energies of u and its rearrangement through the assembled forms; the L2
// norms are computed over the sorted value multiset on both sides, so exact
// preservation is visible as exact equality.
RearrangementReport rearrangement_report(const Mesh& source, const StiffnessMatrix& A,
                                         const Eigen::VectorXd& u, const Mesh& ball,
                                         const StiffnessMatrix& A_ball,
                                         double slack = 0.02);

// First Dirichlet eigenvalue of the domain against the equal-cell-count ball
// at the same cell size. Requires the mesh to resolve the domain (>= 100
// cells).
FaberKrahnReport faber_krahn(const DomainSpec& domain, double h);

// Eigenvalue and eigenfunction small-order limit on a fixed mesh: for each s
// (descending, in (0, 1/2)) assembles the fractional form and compares
// (lambda_{k,s} - 1)/s with the logarithmic lambda_k.
SmallOrderSweep small_order_sweep(const DomainSpec& domain, double h,
                                  const std::vector<double>& s_list, int k);

// Seeded check of the two elementary scalar bounds that control the
// difference quotient: |((1+r^2)^s - 1)/s| <= 2(1+r^4) and
// |((1+r^2)^s - 1)/s - log(1+r^2)| <= 2s(1+r^4), with r log-uniform in
// [1e-3, 1e3] and s uniform in (0, 1).
ScalarBoundsReport scalar_bounds_check(int samples, std::uint64_t seed);

// Seeded nonnegative right-hand sides solved through the M-matrix; passes
// when min(u) >= -1e-10 ||u||_inf in every trial.
MaxPrincipleReport max_principle_check(const StiffnessMatrix& A, int trials,
                                       std::uint64_t seed);

}  // namespace logschro
