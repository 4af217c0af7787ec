// Connection and curvature fields of a metric on the trivial bundle, and the
// pointwise Griffiths/Nakano pencil tests for smooth metrics.

#pragma once

#include "hermet/metric.hpp"

namespace hermet {

struct ConnectionField {
  int dim = 1;
  std::vector<MatrixField> coeff;  // coeff[j] = theta_j (dz_j coefficient)
  Mask mask;                       // common validity

  const MatrixField& theta(int j) const { return coeff[j]; }
};

struct CurvatureField {
  int dim = 1;
  std::vector<MatrixField> blocks;  // blocks[j*dim+k] = Theta_{jk}
  Mask mask;

  const MatrixField& block(int j, int k) const { return blocks[j * dim + k]; }
};

// theta_j = h^{-1} d_j h (adjugate/determinant route), valid on the stencil-
// eroded mask intersected with {det h > floor}. A nonempty `request` must sit
// inside that set or the call throws.
ConnectionField connection(const MetricField& h, double floor_det,
                           const Mask& request = {});
// Theta_{jk} = dbar_k theta_j; mask eroded once more.
CurvatureField curvature(const MetricField& h, double floor_det,
                         const Mask& request = {});

// Theta~(xi) = -sum_{j,k} Theta_{jk} xi_j conj(xi_k). The sign makes
// h = e^{|z|^2} I come out as -I, so Griffiths-negative metrics have
// Theta~ negative definite with respect to h.
MatrixField contract(const CurvatureField& c, const std::vector<cxd>& xi);

struct PencilReport {
  std::string test;
  bool pass = false;
  double delta_declared = 0.0;
  double delta_empirical = 0.0;  // inf over points (and xi) of -lambda_max
  double worst_margin = 0.0;     // delta_empirical - delta_declared
  std::size_t worst_index = 0;
  std::size_t points_tested = 0;
  std::size_t failing_points = 0;
  double tol = 0.0;
};

// n coordinate directions plus `extra_random` random unit vectors.
std::vector<std::vector<cxd>> default_xi_set(int dim, int extra_random, Rng& rng);

// lambda_max of the pencil (h Theta~(xi), h) <= -(delta - tol) |xi|^2 at every
// masked interior point, for every xi in the set.
PencilReport griffiths_test(const MetricField& h, const CurvatureField& c,
                            double delta,
                            const std::vector<std::vector<cxd>>& xi_set,
                            double tol);

// Block pencil: N with block (k,j) = h * (-Theta_{jk}) against blockdiag(h);
// s* N s = sum (Theta_{jk} s_j, s_k)_h in the paper's sign. For n = 1 this is
// exactly griffiths_test with xi = e_1.
PencilReport nakano_test(const MetricField& h, const CurvatureField& c,
                         double delta, double tol);

ScalarField trace_field(const MatrixField& m);
ScalarField trace_curvature(const CurvatureField& c, const std::vector<cxd>& xi);

// LHS - RHS of i ddbar ||u||^2(xi,xi) = -(Theta~ u,u)_h + ||D'u(xi)||^2_h.
// The section derivative d_j u is exact (sections are polynomials); all other
// ingredients are the discrete pipeline's.
ScalarField bochner_residual(const MetricField& h, const SectionField& u,
                             const std::vector<cxd>& xi, double floor_det);

}  // namespace hermet
