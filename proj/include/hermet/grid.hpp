// Complex polydisc grids and sampled fields. A grid over a polydisc in C^n is
// a 2n-dimensional lattice: each complex axis j contributes a real and an
// imaginary axis, both with points_per_axis[j] cell-centered samples and the
// same stored spacing. Coordinates are anchored at the center, so a grid
// expanded symmetrically by whole cells reproduces the original node
// coordinates bit-identically; cell-centering also keeps nodes off axis
// crossings, where catalog generators may be singular.

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hermet {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;

struct GridSpec {
  int dim = 1;
  std::vector<cxd> center;
  std::vector<double> spacing;        // stored, never recomputed from radii
  std::vector<int> points_per_axis;   // per complex axis, even
  int halo = 2;

  void validate() const;

  int real_axes() const { return 2 * dim; }
  int axis_count(int axis) const { return points_per_axis[axis / 2]; }
  double radius(int j) const { return 0.5 * spacing[j] * points_per_axis[j]; }
  double min_spacing() const;
  double max_spacing() const;

  std::size_t num_nodes() const;
  std::vector<std::size_t> strides() const;  // last real axis fastest

  double coord(int axis, int k) const;
  std::vector<cxd> point(std::size_t linear) const;
  void to_multi(std::size_t linear, std::vector<int>& multi) const;
  std::size_t to_linear(const std::vector<int>& multi) const;

  // Cell volume of the underlying R^{2n} lattice.
  double cell_volume() const;

  bool same_layout(const GridSpec& o) const;
};

GridSpec make_grid(std::vector<cxd> center, const std::vector<double>& radii,
                   std::vector<int> points_per_axis, int halo = 2);
// Convenience for the common isotropic case.
GridSpec make_grid(int dim, cxd center, double radius, int points, int halo = 2);
// Same center and spacing, points_per_axis[j] += 2*extra_cells[j].
GridSpec expanded_grid(const GridSpec& g, const std::vector<int>& extra_cells);

// Node validity mask; empty means every node is valid.
using Mask = std::vector<std::uint8_t>;

Mask full_mask(const GridSpec& g);
Mask interior_mask(const GridSpec& g);
Mask mask_where(const GridSpec& g,
                const std::function<bool(const std::vector<cxd>&)>& pred);
Mask mask_and(const Mask& a, const Mask& b);
std::size_t mask_count(const GridSpec& g, const Mask& m);
// Shrinks the valid set by `cells` nodes along every real axis of complex
// axis j (all axes when j < 0).
Mask erode_mask(const GridSpec& g, const Mask& m, int cells, int j = -1);
bool mask_is_interior(const GridSpec& g, const Mask& support);

struct ScalarField {
  GridSpec spec;
  std::vector<cxd> values;
  Mask mask;     // empty = all valid
  bool partial = false;

  bool valid_at(std::size_t i) const { return mask.empty() || mask[i] != 0; }
  void check_shape() const;
  void check_finite() const;  // throws unless partial covers the holes
};

struct MatrixField {
  GridSpec spec;
  int rank = 1;
  std::vector<cxd> values;  // node-major r x r blocks, column-major in block
  Mask mask;
  bool partial = false;

  std::size_t block() const { return static_cast<std::size_t>(rank) * rank; }
  Eigen::Map<const MatC> at(std::size_t i) const {
    return {values.data() + i * block(), rank, rank};
  }
  Eigen::Map<MatC> at(std::size_t i) {
    return {values.data() + i * block(), rank, rank};
  }
  bool valid_at(std::size_t i) const { return mask.empty() || mask[i] != 0; }
  void check_shape() const;
};

ScalarField make_scalar_field(
    const GridSpec& g, const std::function<cxd(const std::vector<cxd>&)>& f);
MatrixField make_matrix_field(
    const GridSpec& g, int rank,
    const std::function<void(const std::vector<cxd>&, Eigen::Ref<MatC>)>& f);

// Deterministic pairwise reduction; result is independent of how callers
// might batch the addends.
cxd pairwise_sum(const cxd* data, std::size_t n);
double pairwise_sum(const double* data, std::size_t n);

// d/dz_j = (d/dx - i d/dy)/2 and d/dzb_j = (d/dx + i d/dy)/2 by second-order
// central differences; the output mask is the input mask eroded by one cell
// in the two real axes of complex axis j.
ScalarField wirtinger_d(const ScalarField& f, int j);
ScalarField wirtinger_dbar(const ScalarField& f, int j);
MatrixField wirtinger_d(const MatrixField& f, int j);
MatrixField wirtinger_dbar(const MatrixField& f, int j);

// Midpoint quadrature against Lebesgue measure of C^n ~ R^{2n}.
cxd integrate(const ScalarField& f, const Mask& region);

// <f, phi> = integral of f*phi over the support of phi, which must stay
// clear of the halo.
cxd pair_with_test(const ScalarField& f, const ScalarField& phi);

// Smooth radial bump centered at c, value 1 at the center, support |z-c|<rho
// (Euclidean distance in C^n).
ScalarField radial_bump(const GridSpec& g, const std::vector<cxd>& c, double rho);
Mask support_mask(const ScalarField& phi);

}  // namespace hermet
