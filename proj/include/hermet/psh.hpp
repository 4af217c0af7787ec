// Plurisubharmonicity tests. Two methods: a complex-Hessian eigenvalue test
// for C^2-sampled fields and a sub-mean-value test on discretized circles for
// merely continuous fields. Both carry pointwise noise floors scaled by local
// derivative estimates; near log-type singularities a flat tolerance would
// reject genuinely psh fields at any desk-scale resolution, so the floors are
// part of the verdict contract and are recorded in the report.

#pragma once

#include "hermet/chern.hpp"
#include "hermet/metric.hpp"

namespace hermet {

enum class PshVerdict { kPass, kFail, kInconclusive };
std::string verdict_name(PshVerdict v);

struct PshReport {
  PshVerdict verdict = PshVerdict::kInconclusive;
  std::string method;
  double worst_margin = 0.0;         // raw margin at the decisive point
  double worst_scaled_margin = 0.0;  // margin / pointwise tolerance
  std::size_t worst_index = 0;
  std::size_t points_tested = 0;
  double tol = 0.0;                  // base tolerance
  std::vector<double> radii;         // submean schedule, when used
  std::string note;
};

enum class PshMethod { kHessian, kSubmean };

// H_jk = dbar_k d_j f, hermitian-symmetrized; mask eroded by both stencils.
MatrixField complex_hessian(const ScalarField& f);
// Real field sum_jk H_jk xi_j conj(xi_k).
ScalarField hessian_quad(const MatrixField& hess, const std::vector<cxd>& xi);

double default_psh_tol(const GridSpec& g);  // 10 * max_spacing^2

// Verdict bands on the scaled margin m = margin / tol_eff(p):
// pass m >= -1/10, fail m < -1, inconclusive between.
PshReport is_psh(const ScalarField& f, PshMethod method, double tol);
PshReport is_psh(const ScalarField& f, PshMethod method);

// Worst case of is_psh(eval_norm_sq(h,u)) over the corpus.
PshReport griffiths_negative_test(const MetricField& h,
                                  const std::vector<SectionField>& corpus,
                                  PshMethod method, double tol);

struct LogPshReport {
  PshReport exponential;  // worst over ||u e^q||^2 tests
  PshReport direct_log;   // is_psh(log ||u||^2) on the positivity mask
};
// q_corpus entries are rank-1 holomorphic polynomials.
LogPshReport log_psh_equivalence_test(const MetricField& h, const SectionField& u,
                                      const std::vector<SectionField>& q_corpus,
                                      double tol);

// S_U = sum_jk d_j dbar_k (u_j, u_k)_h; nonnegative exactly when the
// (n-1,n-1)-form built from the tuple is plurisubharmonic. Sign anchored so
// that Nakano-negative smooth metrics give S_U >= 0.
ScalarField nakano_form_coefficient(const MetricField& h, const SectionTuple& U);

struct NakanoNegReport {
  PshReport form_psh;                // part (i), worst over the tuple corpus
  std::vector<double> nus;           // empty when the pencil ran directly
  std::vector<PencilReport> pencil;  // part (ii) reports
  bool pass = false;
};

// Part (i) tests S_U >= 0 for every corpus tuple; part (ii) runs the block
// pencil on {det h > floor} directly for smooth metrics, and on the mollified
// sequence otherwise.
NakanoNegReport nakano_negative_test(const MetricField& h,
                                     const std::vector<SectionTuple>& corpus,
                                     double delta, double tol, double floor_det,
                                     const std::vector<double>& nu_schedule = {});

}  // namespace hermet
