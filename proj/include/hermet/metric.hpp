// Singular hermitian metric fields, polynomial holomorphic sections, and the
// basic scalar observables (norms, pairings, determinant machinery).

#pragma once

#include <optional>

#include "hermet/grid.hpp"
#include "hermet/rng.hpp"

namespace hermet {

// Regularity of the metric as a map into hermitian forms, as declared by the
// generator; numeric code never infers it.
enum class Smoothness { kSmooth, kContinuous, kMeasurable };

bool at_least_continuous(Smoothness s);
std::string smoothness_name(Smoothness s);

// Catalog handle for exact resampling at other grids.
struct GeneratorRef {
  std::string name;
  int rank = 1;
  int dim = 1;
  std::vector<double> params;
  std::string profile;  // for the diagonal family
};

struct MetricField {
  MatrixField samples;
  Smoothness smoothness = Smoothness::kMeasurable;
  std::optional<GeneratorRef> generator;

  int rank() const { return samples.rank; }
  const GridSpec& grid() const { return samples.spec; }
};

// Validates shape, symmetrizes every sample (recording the worst hermitian
// defect) and optionally checks pointwise positive semidefiniteness.
MetricField make_metric_field(MatrixField samples, Smoothness smoothness,
                              std::optional<GeneratorRef> generator = std::nullopt,
                              bool validate_psd = true);

// Holomorphic polynomial section: rank components, each a polynomial in
// z_1..z_n with complex coefficients, canonical sorted monomial form.
struct SectionField {
  int rank = 1;
  int dim = 1;
  // components[c] = list of (exponents over z_1..z_n, coefficient)
  std::vector<std::vector<std::pair<std::vector<unsigned>, cxd>>> components;

  void canonicalize();
  int total_degree() const;
  Eigen::VectorXcd eval(const std::vector<cxd>& z) const;
  SectionField derivative(int j) const;  // exact d/dz_j
};

SectionField make_section(int rank, int dim,
                          std::vector<std::vector<std::pair<std::vector<unsigned>, cxd>>> comps);
// e_c * monomial z^expo
SectionField monomial_section(int rank, int dim, int component,
                              const std::vector<unsigned>& expo, cxd coeff = 1.0);
SectionField constant_section(int rank, int dim, const Eigen::VectorXcd& v);
SectionField random_section(int rank, int dim, int max_degree, Rng& rng,
                            double coeff_scale = 1.0);
// All monomial sections of total degree <= max_degree times coordinate basis
// vectors, plus `extra_random` random sections of the same degree bound.
std::vector<SectionField> default_section_corpus(int rank, int dim, int max_degree,
                                                 int extra_random, Rng& rng);

struct SectionTuple {
  std::vector<SectionField> parts;  // one per coordinate direction

  void validate(int dim) const;
};

// Cached node evaluations of every component.
std::vector<Eigen::VectorXcd> evaluate_on(const SectionField& u, const GridSpec& g);

// ||u||_h^2 as a real scalar field, pointwise u* h u; throws if a valid node
// comes out negative beyond tolerance.
ScalarField eval_norm_sq(const MetricField& h, const SectionField& u);
// (u, v)_h = v* h u.
ScalarField pairing_field(const MetricField& h, const SectionField& u,
                          const SectionField& v);

ScalarField det_field(const MetricField& h);
// log det h, partial with validity mask {det > 0}.
ScalarField log_det_field(const MetricField& h);

// Node set {det h > eps}; monotone in eps.
Mask sublevel_mask(const MetricField& h, double eps);

// Pointwise dual metric on `request` (defaults to {det > floor}); partial
// outside. Throws if the floor is violated inside the requested mask.
MetricField dual_metric_field(const MetricField& h, double floor_det,
                              const Mask& request = {});

}  // namespace hermet
