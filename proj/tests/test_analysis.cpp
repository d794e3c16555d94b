#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "logschro/analysis.hpp"

using namespace logschro;

TEST_CASE("rearrangement on four interval cells by hand") {
  // Mesh centers -0.75, -0.25, 0.25, 0.75; distance order is -0.25, 0.25,
  // -0.75, 0.75 (ties broken toward the lexicographically smaller center).
  // |u| = (3, 1, 2, 0) sorted descending lands as (1, 3, 2, 0).
  const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 0.5);
  Eigen::VectorXd u(4);
  u << 3.0, -1.0, 2.0, 0.0;
  const Eigen::VectorXd v = rearrange(mesh, u, mesh);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(3.0));
  CHECK(v[2] == doctest::Approx(2.0));
  CHECK(v[3] == doctest::Approx(0.0));
}

TEST_CASE("rearrangement validates its inputs") {
  const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 0.5);
  const Mesh fine = build_mesh(DomainSpec::interval(-1.0, 1.0), 0.25);
  Eigen::VectorXd u(4);
  u.setZero();
  CHECK_THROWS_AS(rearrange(mesh, u, fine), std::domain_error);
  Eigen::VectorXd wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(rearrange(mesh, wrong, mesh), std::domain_error);
}

TEST_CASE("rearrangement lowers the form energy on the disc") {
  const DomainSpec domain = DomainSpec::disc(1.0);
  const Mesh mesh = build_mesh(domain, 0.2);
  const Mesh ball = ball_mesh_with_count(2, 0.2, mesh.count());
  const KernelSpec spec = KernelSpec::log_order(2);
  const StiffnessMatrix A = assemble_stiffness(mesh, spec);
  const StiffnessMatrix A_ball = assemble_stiffness(ball, spec);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd u(mesh.count());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = unif(rng);
    const RearrangementReport rep = rearrangement_report(mesh, A, u, ball, A_ball);
    CHECK(rep.pass);
    CHECK(rep.energy_after <= rep.energy_before * 1.02);
    // The rearrangement permutes |u|, so the L2 norm is preserved exactly.
    CHECK(rep.l2_after == rep.l2_before);
  }
}

TEST_CASE("scalar bounds hold on a large seeded sample") {
  const ScalarBoundsReport rep = scalar_bounds_check(10000, 42);
  CHECK(rep.pass);
  CHECK(rep.samples == 10000);
  CHECK(rep.worst_slack_first > 0.0);
  CHECK(rep.worst_slack_second > 0.0);
  CHECK_THROWS_AS(scalar_bounds_check(0, 1), std::domain_error);
}

TEST_CASE("discrete maximum principle on the interval") {
  const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 2.0 / 32);
  const StiffnessMatrix A = assemble_stiffness(mesh, KernelSpec::log_order(1));
  const MaxPrincipleReport rep = max_principle_check(A, 20, 3);
  CHECK(rep.pass);
  CHECK(rep.trials == 20);
  CHECK(rep.worst_min_ratio >= -1e-10);
  CHECK_THROWS_AS(max_principle_check(A, 0, 3), std::domain_error);

  const StiffnessMatrix frac =
      assemble_stiffness(mesh, KernelSpec::frac_order(1, 0.25));
  CHECK_THROWS_AS(max_principle_check(frac, 5, 3), std::domain_error);
}

TEST_CASE("small-order sweep halves the eigenvalue deviation") {
  const SmallOrderSweep sweep = small_order_sweep(
      DomainSpec::interval(-1.0, 1.0), 2.0 / 32, {0.1, 0.05, 0.025}, 1);
  REQUIRE(sweep.rows.size() == 3);
  for (const SmallOrderRow& row : sweep.rows) {
    CHECK(row.lambda_ks > 1.0);
    CHECK(row.deviation ==
          doctest::Approx(std::abs(row.quotient - row.reference)).epsilon(1e-12));
  }
  const double r1 = sweep.rows[0].deviation / sweep.rows[1].deviation;
  const double r2 = sweep.rows[1].deviation / sweep.rows[2].deviation;
  CHECK(r1 > 1.8);
  CHECK(r1 < 2.3);
  CHECK(r2 > 1.8);
  CHECK(r2 < 2.3);
  REQUIRE(sweep.eigenfunction_distance.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(sweep.eigenfunction_distance[i] < 0.05);
    if (i > 0) {
      CHECK(sweep.eigenfunction_distance[i] < sweep.eigenfunction_distance[i - 1]);
    }
  }
}

TEST_CASE("small-order sweep input validation") {
  const DomainSpec dom = DomainSpec::interval(-1.0, 1.0);
  CHECK_THROWS_AS(small_order_sweep(dom, 0.25, {}, 1), std::domain_error);
  CHECK_THROWS_AS(small_order_sweep(dom, 0.25, {0.5}, 1), std::domain_error);
  CHECK_THROWS_AS(small_order_sweep(dom, 0.25, {0.05, 0.1}, 1), std::domain_error);
  CHECK_THROWS_AS(small_order_sweep(dom, 0.25, {0.1}, 0), std::domain_error);
  CHECK_THROWS_AS(small_order_sweep(dom, 0.25, {0.1}, 6), std::domain_error);
}

TEST_CASE("disc against the equal-count lattice ball is exactly neutral") {
  // The disc mesh and the comparison ball are the same cell set, so the
  // margin vanishes identically.
  const FaberKrahnReport rep = faber_krahn(DomainSpec::disc(1.0), 0.1);
  CHECK(rep.margin == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.lambda_omega == doctest::Approx(rep.lambda_ball).epsilon(1e-12));
}

TEST_CASE("square pays a positive eigenvalue premium over the ball") {
  const FaberKrahnReport rep = faber_krahn(DomainSpec::square(1.0), 1.0 / 16);
  CHECK(rep.margin > 0.0);
  CHECK(rep.margin == doctest::Approx(0.030244150476051335).epsilon(1e-6));
  CHECK(rep.lambda_omega == doctest::Approx(2.3819422982873952).epsilon(1e-9));
}

TEST_CASE("coarse meshes are rejected for the shape comparison") {
  CHECK_THROWS_AS(faber_krahn(DomainSpec::square(1.0), 0.5), std::domain_error);
}
