#include "logschro/galerkin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace logschro {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Exponent and strength of the kernel's origin singularity: the kernel
// behaves like strength * r^{-exponent} with exponent = dim + 2s.
double singular_exponent(const KernelSpec& spec) {
  return spec.dim + (spec.order == KernelOrder::Frac ? 2.0 * spec.s : 0.0);
}

double singular_strength(const KernelSpec& spec) {
  const KernelConstants c = kernel_constants(spec);
  const double front = spec.order == KernelOrder::Log ? c.d_log : -c.d_frac;
  return front * std::tgamma(0.5 * singular_exponent(spec));
}

// Triangular convolution weight of two unit cells at offset w.
double tent(int dim, const double* w) {
  double t = 1.0;
  for (int d = 0; d < dim; ++d) t *= 1.0 - std::abs(w[d]);
  return t;
}

struct PairRule {
  int far_order;
  int near_order;
  int touch_order;
  int touch_levels;
};

constexpr PairRule kBaseRule{3, 5, 12, 30};
constexpr PairRule kFineRule{5, 7, 14, 34};

// Tensor Gauss over both cells; valid for pairs with disjoint closures.
double product_gauss_pair(const KernelSpec& spec, double h,
                          const std::array<int, 3>& k, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const int dim = spec.dim;
  const int axes = 2 * dim;
  std::vector<int> digit(axes, 0);
  double sum = 0.0;
  while (true) {
    double r2 = 0.0, weight = 1.0;
    for (int d = 0; d < dim; ++d) {
      const double x = 0.5 * h * rule.nodes[digit[d]];
      const double y = h * k[d] + 0.5 * h * rule.nodes[digit[dim + d]];
      r2 += (y - x) * (y - x);
      weight *= rule.weights[digit[d]] * rule.weights[digit[dim + d]];
    }
    sum += weight * kernel_radial(spec, std::sqrt(r2));
    int d = 0;
    while (d < axes && ++digit[d] == order) digit[d++] = 0;
    if (d == axes) break;
  }
  return sum * std::pow(0.5 * h, 2 * dim);
}

// Touching pair: reduce the double cell integral to the tent-weighted offset
// integral h^{2 dim} int_{[-1,1]^dim} T(w) F(h (k + w)) dw, split F into the
// pure power singularity (h-independent graded integral) and the remainder.
double touching_pair(const KernelSpec& spec, double h, const std::array<int, 3>& k,
                     int order, int levels) {
  const int dim = spec.dim;
  const double a = singular_exponent(spec);
  const double strength = singular_strength(spec);

  Box box;
  box.dim = dim;
  for (int d = 0; d < dim; ++d) {
    box.lo[d] = -1.0;
    box.hi[d] = 1.0;
  }
  std::array<double, 3> singular{{0.0, 0.0, 0.0}};
  for (int d = 0; d < dim; ++d) singular[d] = -double(k[d]);

  auto power_part = [&](const double* w) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double z = k[d] + w[d];
      r2 += z * z;
    }
    return tent(dim, w) * std::pow(r2, -0.5 * a);
  };
  auto remainder_part = [&](const double* w) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double z = k[d] + w[d];
      r2 += z * z;
    }
    const double r = h * std::sqrt(r2);
    return tent(dim, w) *
           (kernel_radial(spec, r) - strength * std::pow(r, -a));
  };

  const double power = integrate_box_graded(power_part, box, singular, order, levels);
  const double remainder =
      integrate_box_graded(remainder_part, box, singular, order, levels);
  return strength * std::pow(h, 2 * dim - a) * power +
         std::pow(h, 2 * dim) * remainder;
}

double pair_value(const KernelSpec& spec, double h, const std::array<int, 3>& k,
                  const PairRule& rule) {
  int sup = 0;
  double dist2 = 0.0;
  for (int d = 0; d < spec.dim; ++d) {
    sup = std::max(sup, std::abs(k[d]));
    dist2 += double(k[d]) * k[d];
  }
  if (sup <= 1) return touching_pair(spec, h, k, rule.touch_order, rule.touch_levels);
  if (dist2 <= 9.0) return product_gauss_pair(spec, h, k, rule.near_order);
  return product_gauss_pair(spec, h, k, rule.far_order);
}

// Kernel integral over the shell between the cell's inscribed cube scaled
// copy [-h, h]^dim and its circumscribing ball of radius h sqrt(dim).
double shell_integral(const KernelSpec& spec, double h) {
  const int dim = spec.dim;
  if (dim == 1) return 0.0;  // the ball of radius h is the cube itself
  if (dim == 2) {
    // one octant wedge, phi in [0, pi/4], radii [h / cos phi, h sqrt 2]
    const GaussRule& ang = gauss_legendre(20);
    const GaussRule& rad = gauss_legendre(16);
    double total = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double phi = 0.125 * kPi * (1.0 + ang.nodes[i]);
      const double r_lo = h / std::cos(phi);
      const double r_hi = h * std::sqrt(2.0);
      double inner = 0.0;
      for (int j = 0; j < 16; ++j) {
        const double r = 0.5 * (r_lo + r_hi) + 0.5 * (r_hi - r_lo) * rad.nodes[j];
        inner += rad.weights[j] * kernel_radial(spec, r) * r;
      }
      total += ang.weights[i] * 0.125 * kPi * 0.5 * (r_hi - r_lo) * inner;
    }
    return 8.0 * total;
  }
  // dim == 3: parametrize directions through one face; the solid angle
  // element is da db / ell^3 with ell = |(a, b, 1)|, and ell <= sqrt 3 on the
  // whole face patch, so the radial range [h ell, h sqrt 3] never inverts.
  const GaussRule& face = gauss_legendre(20);
  const GaussRule& rad = gauss_legendre(16);
  double total = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double a = face.nodes[i], b = face.nodes[j];
      const double ell = std::sqrt(1.0 + a * a + b * b);
      const double r_lo = h * ell, r_hi = h * std::sqrt(3.0);
      double inner = 0.0;
      for (int q = 0; q < 16; ++q) {
        const double r = 0.5 * (r_lo + r_hi) + 0.5 * (r_hi - r_lo) * rad.nodes[q];
        inner += rad.weights[q] * kernel_radial(spec, r) * r * r;
      }
      total += face.weights[i] * face.weights[j] * 0.5 * (r_hi - r_lo) * inner /
               (ell * ell * ell);
    }
  }
  return 6.0 * total;
}

void check_domain(const DomainSpec& domain) {
  if (domain.dim < 1 || domain.dim > 3) {
    throw std::domain_error("DomainSpec: dim must be 1, 2, or 3");
  }
  if (!domain.indicator) {
    throw std::domain_error("DomainSpec: indicator is not set");
  }
  if (domain.bounding_box.dim != domain.dim) {
    throw std::domain_error("DomainSpec: bounding box dimension mismatch");
  }
  for (int d = 0; d < domain.dim; ++d) {
    if (!(domain.bounding_box.hi[d] > domain.bounding_box.lo[d]) ||
        !std::isfinite(domain.bounding_box.lo[d]) ||
        !std::isfinite(domain.bounding_box.hi[d])) {
      throw std::domain_error("DomainSpec: bounding box must have positive extent");
    }
  }
}

std::string offset_string(const std::array<int, 3>& k, int dim) {
  std::ostringstream os;
  os << "(";
  for (int d = 0; d < dim; ++d) os << (d ? ", " : "") << k[d];
  os << ")";
  return os.str();
}

}  // namespace

DomainSpec DomainSpec::interval(double a, double b) {
  if (!(a < b)) throw std::domain_error("interval: need a < b");
  DomainSpec dom;
  dom.dim = 1;
  dom.bounding_box.dim = 1;
  dom.bounding_box.lo[0] = a;
  dom.bounding_box.hi[0] = b;
  dom.indicator = [a, b](Eigen::Ref<const Eigen::VectorXd> x) {
    return x[0] > a && x[0] < b;
  };
  dom.measure_hint = b - a;
  return dom;
}

DomainSpec DomainSpec::rectangle(double side_x, double side_y) {
  if (!(side_x > 0.0) || !(side_y > 0.0)) {
    throw std::domain_error("rectangle: sides must be > 0");
  }
  DomainSpec dom;
  dom.dim = 2;
  dom.bounding_box.dim = 2;
  dom.bounding_box.lo = {-0.5 * side_x, -0.5 * side_y, 0.0};
  dom.bounding_box.hi = {0.5 * side_x, 0.5 * side_y, 0.0};
  dom.indicator = [side_x, side_y](Eigen::Ref<const Eigen::VectorXd> x) {
    return std::abs(x[0]) < 0.5 * side_x && std::abs(x[1]) < 0.5 * side_y;
  };
  dom.measure_hint = side_x * side_y;
  return dom;
}

DomainSpec DomainSpec::square(double side) { return rectangle(side, side); }

DomainSpec DomainSpec::disc(double radius) {
  if (!(radius > 0.0)) throw std::domain_error("disc: radius must be > 0");
  DomainSpec dom;
  dom.dim = 2;
  dom.bounding_box.dim = 2;
  dom.bounding_box.lo = {-radius, -radius, 0.0};
  dom.bounding_box.hi = {radius, radius, 0.0};
  dom.indicator = [radius](Eigen::Ref<const Eigen::VectorXd> x) {
    return x.squaredNorm() < radius * radius;
  };
  dom.measure_hint = kPi * radius * radius;
  return dom;
}

DomainSpec DomainSpec::ball(double radius) {
  if (!(radius > 0.0)) throw std::domain_error("ball: radius must be > 0");
  DomainSpec dom;
  dom.dim = 3;
  dom.bounding_box.dim = 3;
  dom.bounding_box.lo = {-radius, -radius, -radius};
  dom.bounding_box.hi = {radius, radius, radius};
  dom.indicator = [radius](Eigen::Ref<const Eigen::VectorXd> x) {
    return x.squaredNorm() < radius * radius;
  };
  dom.measure_hint = 4.0 / 3.0 * kPi * radius * radius * radius;
  return dom;
}

DomainSpec DomainSpec::from_raster(int dim, double cell, const Eigen::VectorXd& origin,
                                   const std::vector<int>& shape,
                                   const std::vector<char>& flags) {
  if (dim < 1 || dim > 3) throw std::domain_error("from_raster: dim must be 1, 2, or 3");
  if (!(cell > 0.0) || !std::isfinite(cell)) {
    throw std::domain_error("from_raster: cell size must be finite and > 0");
  }
  if (origin.size() != dim || static_cast<int>(shape.size()) != dim) {
    throw std::domain_error("from_raster: origin/shape must have dim entries");
  }
  size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    if (shape[d] < 1) throw std::domain_error("from_raster: shape entries must be >= 1");
    total *= static_cast<size_t>(shape[d]);
  }
  if (flags.size() != total) {
    throw std::domain_error("from_raster: expected " + std::to_string(total) +
                            " flags, got " + std::to_string(flags.size()));
  }
  size_t set = 0;
  for (char f : flags) set += f != 0;
  if (set == 0) throw std::domain_error("from_raster: no cell is flagged");

  DomainSpec dom;
  dom.dim = dim;
  dom.bounding_box.dim = dim;
  const Eigen::VectorXd origin_copy = origin;
  const std::vector<int> shape_copy = shape;
  const std::vector<char> flags_copy = flags;
  for (int d = 0; d < dim; ++d) {
    dom.bounding_box.lo[d] = origin[d];
    dom.bounding_box.hi[d] = origin[d] + shape[d] * cell;
  }
  dom.indicator = [dim, cell, origin_copy, shape_copy,
                   flags_copy](Eigen::Ref<const Eigen::VectorXd> x) {
    size_t idx = 0;
    for (int d = 0; d < dim; ++d) {
      const double t = (x[d] - origin_copy[d]) / cell;
      if (!(t >= 0.0)) return false;
      const int i = static_cast<int>(t);
      if (i >= shape_copy[d]) return false;
      idx = idx * shape_copy[d] + static_cast<size_t>(i);
    }
    return flags_copy[idx] != 0;
  };
  dom.measure_hint = double(set) * std::pow(cell, dim);
  return dom;
}

Mesh build_mesh(const DomainSpec& domain, double h) {
  check_domain(domain);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::domain_error("build_mesh: h must be finite and > 0");
  }
  for (int d = 0; d < domain.dim; ++d) {
    if (h >= domain.bounding_box.hi[d] - domain.bounding_box.lo[d]) {
      throw std::domain_error("build_mesh: h must be smaller than the bounding box");
    }
  }

  const int dim = domain.dim;
  int counts[3] = {1, 1, 1};
  for (int d = 0; d < dim; ++d) {
    const double extent = domain.bounding_box.hi[d] - domain.bounding_box.lo[d];
    counts[d] = static_cast<int>(std::floor(extent / h + 0.5)) + 1;
  }

  std::vector<double> kept;
  Eigen::VectorXd c(dim);
  for (int i0 = 0; i0 < counts[0]; ++i0) {
    for (int i1 = 0; i1 < counts[1]; ++i1) {
      for (int i2 = 0; i2 < counts[2]; ++i2) {
        const int idx[3] = {i0, i1, i2};
        for (int d = 0; d < dim; ++d) {
          c[d] = domain.bounding_box.lo[d] + (idx[d] + 0.5) * h;
        }
        if (domain.indicator(c)) {
          for (int d = 0; d < dim; ++d) kept.push_back(c[d]);
        }
      }
    }
  }

  Mesh mesh;
  mesh.dim = dim;
  mesh.h = h;
  const Eigen::Index M = static_cast<Eigen::Index>(kept.size()) / dim;
  if (M == 0) {
    throw std::domain_error("build_mesh: no cell center lies in the domain");
  }
  mesh.centers.resize(M, dim);
  for (Eigen::Index i = 0; i < M; ++i) {
    for (int d = 0; d < dim; ++d) mesh.centers(i, d) = kept[i * dim + d];
  }

  if (domain.measure_hint) {
    const double hint = *domain.measure_hint;
    const double got = mesh.measure();
    if (std::abs(got - hint) > 0.02 * hint) {
      throw std::runtime_error("build_mesh: mesh measure " + std::to_string(got) +
                               " deviates from the domain measure " +
                               std::to_string(hint) + " by more than 2%");
    }
  }
  return mesh;
}

Mesh ball_mesh_with_count(int dim, double h, Eigen::Index count) {
  if (dim < 1 || dim > 3) throw std::domain_error("ball_mesh_with_count: dim must be 1..3");
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::domain_error("ball_mesh_with_count: h must be finite and > 0");
  }
  if (count < 1) throw std::domain_error("ball_mesh_with_count: count must be >= 1");

  const double ball_volume =
      2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim) / dim;
  const double radius = std::pow(count * std::pow(h, dim) / ball_volume, 1.0 / dim);
  int K = static_cast<int>(std::ceil(radius / h)) + 2;

  struct Candidate {
    double dist2;
    std::array<double, 3> c;
  };
  std::vector<Candidate> candidates;
  while (true) {
    candidates.clear();
    const int lo = -K, hi = K;  // lattice indices; centers (k + 1/2) h
    for (int k0 = lo; k0 < hi; ++k0) {
      for (int k1 = (dim > 1 ? lo : 0); k1 < (dim > 1 ? hi : 1); ++k1) {
        for (int k2 = (dim > 2 ? lo : 0); k2 < (dim > 2 ? hi : 1); ++k2) {
          Candidate cand;
          cand.c = {{(k0 + 0.5) * h, dim > 1 ? (k1 + 0.5) * h : 0.0,
                     dim > 2 ? (k2 + 0.5) * h : 0.0}};
          cand.dist2 = 0.0;
          for (int d = 0; d < dim; ++d) cand.dist2 += cand.c[d] * cand.c[d];
          candidates.push_back(cand);
        }
      }
    }
    if (static_cast<Eigen::Index>(candidates.size()) >= count) break;
    K = K * 3 / 2 + 1;
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& x, const Candidate& y) {
              if (x.dist2 != y.dist2) return x.dist2 < y.dist2;
              return x.c < y.c;
            });
  candidates.resize(count);
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& x, const Candidate& y) { return x.c < y.c; });

  Mesh mesh;
  mesh.dim = dim;
  mesh.h = h;
  mesh.centers.resize(count, dim);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (int d = 0; d < dim; ++d) mesh.centers(i, d) = candidates[i].c[d];
  }
  return mesh;
}

double cell_pair_integral(const KernelSpec& spec, double h,
                          Eigen::Ref<const Eigen::VectorXd> center_i,
                          Eigen::Ref<const Eigen::VectorXd> center_j) {
  spec.validate();
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::domain_error("cell_pair_integral: h must be finite and > 0");
  }
  if (center_i.size() != spec.dim || center_j.size() != spec.dim) {
    throw std::domain_error("cell_pair_integral: center dimension mismatch");
  }
  if (spec.order == KernelOrder::Frac && spec.s >= 0.5) {
    throw std::domain_error(
        "cell_pair_integral: indicator cells carry divergent energy for s >= 1/2");
  }
  std::array<int, 3> k{{0, 0, 0}};
  bool identical = true;
  for (int d = 0; d < spec.dim; ++d) {
    const double t = (center_j[d] - center_i[d]) / h;
    k[d] = static_cast<int>(std::llround(t));
    if (std::abs(t - k[d]) > 1e-6) {
      throw std::domain_error(
          "cell_pair_integral: cells are not aligned on a common lattice");
    }
    identical = identical && k[d] == 0;
  }
  if (identical) {
    throw std::domain_error(
        "cell_pair_integral: identical cells (the diagonal is handled by assembly)");
  }
  return pair_value(spec, h, k, kFineRule);
}

double cell_complement_integral(const KernelSpec& spec, double h) {
  spec.validate();
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::domain_error("cell_complement_integral: h must be finite and > 0");
  }
  if (spec.order == KernelOrder::Frac && spec.s >= 0.5) {
    throw std::domain_error(
        "cell_complement_integral: indicator cells carry divergent energy for s >= 1/2");
  }
  const int dim = spec.dim;
  const double a = singular_exponent(spec);
  const double strength = singular_strength(spec);

  // Offset-space form: sigma(h) = int J(z) |Q \ (Q - z)| dz. Inside the
  // doubled cell the miss fraction is 1 - T(z/h), vanishing linearly at 0 and
  // taming one power of the singularity; outside it is the full cell.
  Box box;
  box.dim = dim;
  for (int d = 0; d < dim; ++d) {
    box.lo[d] = -1.0;
    box.hi[d] = 1.0;
  }
  const std::array<double, 3> origin{{0.0, 0.0, 0.0}};
  auto power_part = [&](const double* w) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += w[d] * w[d];
    return (1.0 - tent(dim, w)) * std::pow(r2, -0.5 * a);
  };
  auto remainder_part = [&](const double* w) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += w[d] * w[d];
    const double r = h * std::sqrt(r2);
    return (1.0 - tent(dim, w)) *
           (kernel_radial(spec, r) - strength * std::pow(r, -a));
  };
  const double power = integrate_box_graded(power_part, box, origin, 12, 40);
  const double remainder = integrate_box_graded(remainder_part, box, origin, 12, 40);

  return strength * std::pow(h, 2 * dim - a) * power +
         std::pow(h, 2 * dim) * remainder +
         std::pow(h, dim) *
             (shell_integral(spec, h) + tail_mass(spec, h * std::sqrt(double(dim))));
}

StiffnessMatrix assemble_stiffness(const Mesh& mesh, const KernelSpec& spec) {
  spec.validate();
  if (mesh.dim != spec.dim) {
    throw std::domain_error("assemble_stiffness: mesh and kernel dimension differ");
  }
  if (spec.order == KernelOrder::Frac && spec.s >= 0.5) {
    throw std::domain_error(
        "assemble_stiffness: indicator cells carry divergent energy for s >= 1/2");
  }
  const Eigen::Index M = mesh.count();
  if (M < 1) throw std::domain_error("assemble_stiffness: empty mesh");
  const int dim = mesh.dim;
  const double h = mesh.h;

  // Integer lattice coordinates of the cell centers.
  const Eigen::RowVectorXd anchor = mesh.centers.colwise().minCoeff();
  std::vector<std::array<int, 3>> lattice(M, {{0, 0, 0}});
  int span[3] = {0, 0, 0};
  for (Eigen::Index i = 0; i < M; ++i) {
    for (int d = 0; d < dim; ++d) {
      const double t = (mesh.centers(i, d) - anchor[d]) / h;
      const int l = static_cast<int>(std::llround(t));
      if (std::abs(t - l) > 1e-6) {
        throw std::domain_error("assemble_stiffness: mesh centers are not lattice aligned");
      }
      lattice[i][d] = l;
      span[d] = std::max(span[d], l);
    }
  }

  // One integral per distinct absolute offset, evaluated at two quadrature
  // resolutions; the refined value is kept and the disagreement tracked.
  const size_t ext[3] = {static_cast<size_t>(span[0]) + 1,
                         static_cast<size_t>(span[1]) + 1,
                         static_cast<size_t>(span[2]) + 1};
  std::vector<double> by_offset(ext[0] * ext[1] * ext[2], 0.0);
  std::map<std::array<int, 3>, double> memo;
  double worst_disagreement = 0.0;
  std::array<int, 3> worst_offset{{0, 0, 0}};

  for (size_t a0 = 0; a0 < ext[0]; ++a0) {
    for (size_t a1 = 0; a1 < ext[1]; ++a1) {
      for (size_t a2 = 0; a2 < ext[2]; ++a2) {
        if (a0 == 0 && a1 == 0 && a2 == 0) continue;
        std::array<int, 3> key{{int(a0), int(a1), int(a2)}};
        std::array<int, 3> sorted = key;
        std::sort(sorted.begin(), sorted.end(), std::greater<int>());
        auto found = memo.find(sorted);
        double value;
        if (found != memo.end()) {
          value = found->second;
        } else {
          const double coarse = pair_value(spec, h, sorted, kBaseRule);
          const double fine = pair_value(spec, h, sorted, kFineRule);
          value = fine;
          if (std::abs(fine) > 1e-250) {
            const double rel = std::abs(fine - coarse) / std::abs(fine);
            if (rel > worst_disagreement) {
              worst_disagreement = rel;
              worst_offset = sorted;
            }
          }
          if (std::abs(value) < 1e-15) value = 0.0;  // certified negligible
          memo.emplace(sorted, value);
        }
        by_offset[(a0 * ext[1] + a1) * ext[2] + a2] = value;
      }
    }
  }
  if (worst_disagreement > 5e-4) {
    throw std::runtime_error(
        "assemble_stiffness: quadrature resolutions disagree by relative " +
        std::to_string(worst_disagreement) + " at cell offset " +
        offset_string(worst_offset, dim));
  }

  const double diagonal = cell_complement_integral(spec, h) +
                          (spec.order == KernelOrder::Frac ? std::pow(h, dim) : 0.0);

  StiffnessMatrix A;
  A.order = spec;
  A.mass_scale = std::pow(h, dim);
  A.entries.resize(M, M);
  for (Eigen::Index i = 0; i < M; ++i) {
    A.entries(i, i) = diagonal;
    for (Eigen::Index j = i + 1; j < M; ++j) {
      size_t off[3] = {0, 0, 0};
      for (int d = 0; d < dim; ++d) {
        off[d] = static_cast<size_t>(std::abs(lattice[i][d] - lattice[j][d]));
      }
      const double value = by_offset[(off[0] * ext[1] + off[1]) * ext[2] + off[2]];
      A.entries(i, j) = -value;
      A.entries(j, i) = -value;
    }
  }

  if (spec.order == KernelOrder::Log) {
    const double min_row_sum = A.entries.rowwise().sum().minCoeff();
    if (!(min_row_sum > 0.0)) {
      throw std::runtime_error(
          "assemble_stiffness: nonpositive row sum " + std::to_string(min_row_sum) +
          "; the assembled matrix lost the M-matrix structure");
    }
  }
  return A;
}

std::vector<EigenPair> solve_eigs(const StiffnessMatrix& A, int k, bool force_iterative) {
  const Eigen::Index M = A.entries.rows();
  if (A.entries.cols() != M || M < 1) {
    throw std::domain_error("solve_eigs: matrix must be square and nonempty");
  }
  if (k < 1 || k > M) {
    throw std::domain_error("solve_eigs: need 1 <= k <= " + std::to_string(M));
  }
  if (!(A.mass_scale > 0.0)) {
    throw std::domain_error("solve_eigs: mass scale must be > 0");
  }

  const Eigen::MatrixXd B = A.entries / A.mass_scale;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  if (M <= 4096 && !force_iterative) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("solve_eigs: dense eigensolver failed to converge");
    }
    values = solver.eigenvalues().head(k);
    vectors = solver.eigenvectors().leftCols(k);
  } else {
    // Blocked inverse iteration with Rayleigh-Ritz extraction; B is positive
    // definite, so plain B^{-1} powers converge to the low end.
    const Eigen::Index block = std::min<Eigen::Index>(M, std::max(2 * k, k + 8));
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("solve_eigs: factorization failed; matrix not positive definite");
    }
    std::mt19937_64 rng(0x2545f4914f6cdd1dULL);
    Eigen::MatrixXd Q(M, block);
    for (Eigen::Index j = 0; j < block; ++j) {
      for (Eigen::Index i = 0; i < M; ++i) {
        Q(i, j) = 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
      }
    }
    const double norm_b = B.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::VectorXd theta;
    for (int iter = 0; iter < 1000; ++iter) {
      Eigen::MatrixXd Z = llt.solve(Q);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
      Q = qr.householderQ() * Eigen::MatrixXd::Identity(M, block);
      const Eigen::MatrixXd small = Q.transpose() * B * Q;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(small);
      Q = Q * ritz.eigenvectors();
      theta = ritz.eigenvalues();
      double worst = 0.0;
      for (int j = 0; j < k; ++j) {
        worst = std::max(worst, (B * Q.col(j) - theta[j] * Q.col(j)).norm());
      }
      if (worst <= 1e-11 * norm_b) break;
    }
    values = theta.head(k);
    vectors = Q.leftCols(k);
  }

  const double norm_a = A.entries.cwiseAbs().rowwise().sum().maxCoeff();
  std::vector<EigenPair> pairs(k);
  std::string residual_report;
  bool residual_failure = false;
  for (int j = 0; j < k; ++j) {
    EigenPair& p = pairs[j];
    p.index = j + 1;
    p.value = values[j];
    p.vector = vectors.col(j) / std::sqrt(A.mass_scale);
    Eigen::Index peak;
    p.vector.cwiseAbs().maxCoeff(&peak);
    if (p.vector[peak] < 0.0) p.vector = -p.vector;
    p.residual = (A.entries * p.vector - p.value * A.mass_scale * p.vector).norm();
    if (j < 5 && p.residual > 1e-8 * norm_a) residual_failure = true;
    residual_report += (j ? ", " : "") + std::to_string(p.residual);
  }
  if (residual_failure) {
    throw std::runtime_error("solve_eigs: residuals exceed tolerance: " + residual_report);
  }
  return pairs;
}

double poincare_lower_bound(double measure, int dim) {
  if (!(measure > 0.0) || !std::isfinite(measure)) {
    throw std::domain_error("poincare_lower_bound: measure must be finite and > 0");
  }
  if (dim < 1) throw std::domain_error("poincare_lower_bound: dim must be >= 1");

  const double ball_volume =
      2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim) / dim;
  const double c = std::pow(2.0 * kPi, -dim) * measure * ball_volume;
  const double r_max = std::pow(1.0 / c, 1.0 / dim);
  auto bound = [&](double r) {
    return 0.25 * std::log1p(r * r) * (1.0 - c * std::pow(r, dim));
  };

  // Coarse scan, then golden-section refinement of the bracketing interval.
  const int scan = 512;
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < scan; ++i) {
    const double r = r_max * (i + 0.5) / scan;
    const double v = bound(r);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = r_max * std::max(0, best - 1) / scan;
  double hi = r_max * std::min(scan, best + 2) / scan;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
  double f1 = bound(x1), f2 = bound(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = bound(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = bound(x1);
    }
  }
  return std::max(best_value, std::max(f1, f2));
}

double form_energy(const StiffnessMatrix& A, const Eigen::VectorXd& u) {
  if (u.size() != A.entries.rows()) {
    throw std::domain_error("form_energy: vector length does not match the matrix");
  }
  return u.dot(A.entries * u);
}

}  // namespace logschro
