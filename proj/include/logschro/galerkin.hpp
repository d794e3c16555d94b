#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "logschro/kernel.hpp"
#include "logschro/quadrature.hpp"

namespace logschro {

// Bounded open set described by an indicator over an axis-aligned bounding
// box. The indicator must be false outside the box.
struct DomainSpec {
  int dim = 1;
  std::function<bool(Eigen::Ref<const Eigen::VectorXd>)> indicator;
  Box bounding_box;
  std::optional<double> measure_hint;

  static DomainSpec interval(double a, double b);
  static DomainSpec square(double side);
  static DomainSpec rectangle(double side_x, double side_y);
  static DomainSpec disc(double radius);
  static DomainSpec ball(double radius);

  // Union of raster cells of size `cell` whose flag is nonzero. `origin` is
  // the lower corner, `shape` the per-axis cell counts, `flags` row-major
  // with the last axis fastest. The measure hint is the flagged-cell volume,
  // exact when the mesh size divides `cell`.
  static DomainSpec from_raster(int dim, double cell, const Eigen::VectorXd& origin,
                                const std::vector<int>& shape,
                                const std::vector<char>& flags);
};

// Uniform cubical mesh: cells of side h centered on the lattice anchored at
// the lower corner of the bounding box, kept when the center lies in the
// domain, listed in lexicographic center order.
struct Mesh {
  int dim = 1;
  double h = 0.0;
  Eigen::MatrixXd centers;  // count x dim

  Eigen::Index count() const { return centers.rows(); }
  double measure() const { return count() * std::pow(h, dim); }
};

Mesh build_mesh(const DomainSpec& domain, double h);

// The `count` cells of the origin-symmetric lattice ((k + 1/2) h)^dim closest
// to the origin; ties in distance broken lexicographically. Serves as the
// equal-measure comparison ball.
Mesh ball_mesh_with_count(int dim, double h, Eigen::Index count);

// Double integral of the kernel over a pair of distinct congruent cells of
// side h centered at center_i, center_j on a common lattice. Three regimes by
// center distance: beyond 3h a 3-point tensor Gauss rule per axis, nearer
// disjoint pairs 5 points per axis, touching pairs a subtraction scheme whose
// singular box-box part is reduced to a graded quadrature of the exact
// convolution weight.
double cell_pair_integral(const KernelSpec& spec, double h,
                          Eigen::Ref<const Eigen::VectorXd> center_i,
                          Eigen::Ref<const Eigen::VectorXd> center_j);

// Interaction of one cell with the whole complement of its own closure,
// sigma(h) = int_Q int_{R^dim \ Q} J(x - y); the diagonal of the stiffness
// matrix, one constant per mesh.
double cell_complement_integral(const KernelSpec& spec, double h);

struct StiffnessMatrix {
  KernelSpec order;
  Eigen::MatrixXd entries;
  double mass_scale = 0.0;  // h^dim, the cell mass
};

// Galerkin matrix of the quadratic form on indicator elements. Logarithmic
// order: A_ij = -pair integral, A_ii = sigma(h); a strict M-matrix.
// Fractional order s in (0, 1/2): adds h^dim times the identity (the form
// includes the L2 part); s >= 1/2 is rejected since indicator elements carry
// divergent energy there. Every distinct cell offset is integrated twice at
// different quadrature resolutions; disagreement beyond tolerance raises an
// assembly error naming the worst pair.
StiffnessMatrix assemble_stiffness(const Mesh& mesh, const KernelSpec& spec);

struct EigenPair {
  int index = 0;  // 1-based
  double value = 0.0;
  Eigen::VectorXd vector;  // L2(h)-normalized, largest-magnitude entry positive
  double residual = 0.0;   // ||A phi - lambda h^dim phi||_2
};

// Smallest k eigenpairs of A phi = lambda h^dim phi, ascending. Dense solve
// up to 4096 cells, blocked shift-invert iteration beyond (force_iterative
// exercises that path on small problems).
std::vector<EigenPair> solve_eigs(const StiffnessMatrix& A, int k,
                                  bool force_iterative = false);

// Certified lower bound for the first Dirichlet eigenvalue from the explicit
// Poincare constant, optimized over the admissible frequency radius.
double poincare_lower_bound(double measure, int dim);

// Value u^T A u of the discrete quadratic form.
double form_energy(const StiffnessMatrix& A, const Eigen::VectorXd& u);

}  // namespace logschro
