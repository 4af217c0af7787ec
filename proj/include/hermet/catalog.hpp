// Closed-world metric catalog. Every metric ships as a generator (a pure
// function of the node coordinates), so fields can be resampled exactly on
// any grid; entries with rational entries also carry an exact symbolic form.

#pragma once

#include <optional>

#include "hermet/metric.hpp"
#include "hermet/rational.hpp"

namespace hermet {

struct CatalogEntry {
  std::string name;
  std::string description;
  int default_rank = 1;
  int default_dim = 1;
  bool rank_free = false;
  bool dim_free = false;
  bool griffiths_negative = false;  // declared curvature sign of the family
  bool has_symbolic = false;        // may further depend on parameters
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry* find_catalog_entry(const std::string& name);

// Validates the request against the entry and samples it on the grid.
// params/profile semantics per entry:
//   lelong:      params[0] = a > 0, fiber |z|^{2a}        (rank 1, dim 1)
//   diag-psh:    profile in {sq, relu, log}, params[0]=a for log
//   others:      no parameters
MetricField make_catalog_metric(const std::string& name, int rank, int dim,
                                const GridSpec& grid,
                                const std::vector<double>& params = {},
                                const std::string& profile = "");

// Exact resampling through the generator; bit-identical on the same grid.
MetricField resample(const MetricField& h, const GridSpec& grid);

// Exact rational form, when the entry (with these parameters) has one.
std::optional<sym::RationalMatrix> symbolic_metric(const GeneratorRef& gen);

// True when the generator is s(z) * Identity; convolution-type operations
// then only need the scalar profile.
bool generator_is_isotropic_scalar(const GeneratorRef& gen);

// Oracle bridge: exact rational evaluation at the node coordinates (doubles
// are dyadic rationals, so the evaluation point is exact) with one final
// rounding to double. Nodes where the denominator vanishes are masked out.
ScalarField sample(const sym::RationalExpr& e, const GridSpec& g);
MatrixField sample(const sym::RationalMatrix& m, const GridSpec& g);

}  // namespace hermet
