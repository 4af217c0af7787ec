// Mollifier regularization h_nu = h * chi_nu and the convergence diagnostics
// built on it: Loewner monotonicity, uniform convergence, weak-convergence
// probes for the contracted curvature, and Lp/L2 integrability profiles.

#pragma once

#include "hermet/chern.hpp"
#include "hermet/metric.hpp"

namespace hermet {

// Discrete radial approximate identity with support radius 1/nu. Weights are
// chi(|q| * nu) with chi(t) = exp(-1/(1-t^2)) on [0,1), normalized to unit
// mass; on uniform grids |q|^2 is assembled from integers, so weights are
// exactly equal under axis reflections and swaps.
struct Mollifier {
  double nu = 1.0;
  int dim = 1;
  std::vector<int> displacements;  // size() * 2*dim cell offsets
  std::vector<double> weights;
  std::vector<double> radius_sq;   // |q|^2 per kernel point

  std::size_t size() const { return weights.size(); }
  double support_radius() const { return 1.0 / nu; }
  double mass() const;
  double second_moment() const;  // sum w |q|^2
  // Margin in cells per complex axis.
  std::vector<int> margins(const GridSpec& g) const;
};

Mollifier make_mollifier(const GridSpec& g, double nu);

// Geometric schedule nu_i = 2^i * nu_0, kernels shrinking; the largest
// support is min_j(P_j * spacing_j)/16 clamped to at least 4 cells.
std::vector<double> default_nu_schedule(const GridSpec& g, int steps);

// Entrywise discrete convolution at the generator's native resolution: the
// generator is resampled on the symmetrically expanded grid and the result
// lands back on h's grid. Output is smooth-flagged and keeps no generator.
MetricField mollify(const MetricField& h, double nu);

// Scalar convolution sharing the exact accumulation order of mollify; f must
// live on expanded_grid(out_grid, kern.margins(out_grid)).
ScalarField mollify_scalar(const ScalarField& f, const Mollifier& kern,
                           const GridSpec& out_grid);

struct MonotonicityReport {
  std::vector<double> nus;
  std::vector<std::size_t> points_compared;  // per consecutive pair
  std::vector<std::size_t> violations;
  std::vector<double> worst_violation;  // most negative eig of h_nu - h_nu'
  bool pass = false;
};

// Checks h_{nu'} <= h_nu (Loewner, tol = 1e-9*(1+trace)) for consecutive
// nu < nu' at every grid node. Violations are reported, not thrown: for
// metrics that are not Griffiths-negative the report is expected to be
// non-vacuous.
MonotonicityReport monotonicity_check(const MetricField& h,
                                      const std::vector<double>& nu_schedule);

struct UniformConvergenceReport {
  std::vector<double> nus;
  std::vector<double> sup_err;  // sup ||h_nu - h||_HS per nu
  double tol = 0.0;
  bool pass = false;  // non-increasing and below tol at the final nu
};

UniformConvergenceReport uniform_convergence_check(
    const MetricField& h, const std::vector<double>& nu_schedule, double tol);

// Pairings of the contracted curvature against test functions use the volume
// form dV = i^n dz wedge dzb ... = 2^n * Lebesgue.
cxd pair_current(const ScalarField& f, const ScalarField& phi);

struct WeakProbePhi {
  std::vector<std::vector<cxd>> pairings;  // [nu][r*r entries]
  std::vector<cxd> limit;                  // empty when unavailable
  std::string limit_source;                // symbolic | direct | none
  std::vector<double> cauchy;              // max-entry increment per step
};

struct WeakConvergenceTable {
  std::vector<double> nus;
  std::vector<cxd> xi;
  std::vector<WeakProbePhi> per_phi;
};

// P(nu, phi)_{ab} = <(Theta~^{h_nu})_{ab}, phi>; the limit row comes from the
// symbolic kernel when the generator has one, else from direct masked
// differentiation when h is smooth-flagged. det h > floor must hold on every
// test-function support.
WeakConvergenceTable weak_convergence_probe(const MetricField& h,
                                            const std::vector<double>& nu_schedule,
                                            const std::vector<cxd>& xi,
                                            const std::vector<ScalarField>& phi_set,
                                            double floor_det);

struct LpProfileTable {
  double p = 1.0;
  std::vector<double> radii;                    // ascending annulus boundaries
  std::vector<std::vector<double>> annulus;     // [entry a*r+b][annulus]
  std::vector<std::vector<double>> cumulative;  // summed outer -> inner
};

// Per-annulus integrals of |theta_{ab}|^p around `center` (n = 1 only);
// cumulative sums toward the center expose divergence.
LpProfileTable lp_profile(const ConnectionField& theta, double p,
                          const std::vector<double>& annuli_radii, cxd center);

struct L2BoundReport {
  std::vector<double> nus;
  std::vector<double> l2_mass;  // integral of sum_j ||d_j h_nu||_HS^2
  bool bounded = false;
  double band = 0.0;
  std::vector<std::vector<std::vector<cxd>>> pairings;  // [phi][nu][entries]
  std::vector<std::vector<double>> cauchy;              // [phi][step]
};

L2BoundReport l2_bound_check(const MetricField& h,
                             const std::vector<double>& nu_schedule,
                             const Mask& region,
                             const std::vector<ScalarField>& phi_set = {},
                             double band = 0.10);

}  // namespace hermet
