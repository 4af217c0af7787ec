#include "hermet/regularize.hpp"

#include <algorithm>
#include <cmath>

#include "hermet/catalog.hpp"
#include "hermet/hermitian.hpp"

namespace hermet {

double Mollifier::mass() const {
  return pairwise_sum(weights.data(), weights.size());
}

double Mollifier::second_moment() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * radius_sq[k];
  return acc;
}

std::vector<int> Mollifier::margins(const GridSpec& g) const {
  std::vector<int> m(g.dim, 0);
  for (std::size_t k = 0; k < size(); ++k)
    for (int j = 0; j < g.dim; ++j) {
      m[j] = std::max(m[j], std::abs(displacements[k * 2 * g.dim + 2 * j]));
      m[j] = std::max(m[j], std::abs(displacements[k * 2 * g.dim + 2 * j + 1]));
    }
  return m;
}

Mollifier make_mollifier(const GridSpec& g, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("make_mollifier: nu must be positive");
  const double s = 1.0 / nu;
  const int R = g.real_axes();

  bool uniform = true;
  for (int j = 1; j < g.dim; ++j)
    if (g.spacing[j] != g.spacing[0]) uniform = false;

  std::vector<int> reach(g.dim);
  for (int j = 0; j < g.dim; ++j) {
    reach[j] = static_cast<int>(std::floor(s / g.spacing[j]));
    if (reach[j] > 2 * g.points_per_axis[j])
      throw std::invalid_argument("make_mollifier: nu too small for domain");
  }

  Mollifier kern;
  kern.nu = nu;
  kern.dim = g.dim;
  std::vector<int> d(R, 0);
  // Odometer over the stencil cube, lexicographic order fixes the
  // accumulation sequence everywhere this kernel is applied.
  std::function<void(int)> rec = [&](int a) {
    if (a == R) {
      double r2;
      if (uniform) {
        long s2 = 0;
        for (int t = 0; t < R; ++t) s2 += static_cast<long>(d[t]) * d[t];
        r2 = static_cast<double>(s2) * g.spacing[0] * g.spacing[0];
      } else {
        r2 = 0.0;
        for (int j = 0; j < g.dim; ++j) {
          const long s2 =
              static_cast<long>(d[2 * j]) * d[2 * j] +
              static_cast<long>(d[2 * j + 1]) * d[2 * j + 1];
          r2 += static_cast<double>(s2) * g.spacing[j] * g.spacing[j];
        }
      }
      const double t2 = r2 * nu * nu;
      if (t2 < 1.0) {
        kern.displacements.insert(kern.displacements.end(), d.begin(), d.end());
        kern.weights.push_back(std::exp(-1.0 / (1.0 - t2)));
        kern.radius_sq.push_back(r2);
      }
      return;
    }
    const int m = reach[a / 2];
    for (int k = -m; k <= m; ++k) {
      d[a] = k;
      rec(a + 1);
    }
  };
  rec(0);

  const double total = pairwise_sum(kern.weights.data(), kern.weights.size());
  for (double& w : kern.weights) w /= total;
  return kern;
}

std::vector<double> default_nu_schedule(const GridSpec& g, int steps) {
  double s0 = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.dim; ++j)
    s0 = std::min(s0, g.points_per_axis[j] * g.spacing[j] / 16.0);
  s0 = std::max(s0, 4.0 * g.max_spacing());
  std::vector<double> nus(steps);
  for (int i = 0; i < steps; ++i) nus[i] = std::pow(2.0, i) / s0;
  return nus;
}

namespace {

struct ConvPlan {
  GridSpec expanded;
  std::vector<long> lin_offsets;  // per kernel point, on the expanded grid
  std::vector<int> margins;
};

ConvPlan make_plan(const GridSpec& out_grid, const Mollifier& kern) {
  ConvPlan plan;
  plan.margins = kern.margins(out_grid);
  plan.expanded = expanded_grid(out_grid, plan.margins);
  const auto strides = plan.expanded.strides();
  const int R = out_grid.real_axes();
  plan.lin_offsets.resize(kern.size());
  for (std::size_t k = 0; k < kern.size(); ++k) {
    long off = 0;
    for (int a = 0; a < R; ++a)
      off += static_cast<long>(kern.displacements[k * R + a]) *
             static_cast<long>(strides[a]);
    plan.lin_offsets[k] = off;
  }
  return plan;
}

// Base index of output node i inside the expanded grid.
std::size_t expanded_base(const GridSpec& out_grid, const GridSpec& expanded,
                          const std::vector<int>& margins, std::size_t i,
                          std::vector<int>& scratch) {
  out_grid.to_multi(i, scratch);
  for (int a = 0; a < out_grid.real_axes(); ++a) scratch[a] += margins[a / 2];
  return expanded.to_linear(scratch);
}

cxd convolve_at(const cxd* base, const std::vector<long>& offs,
                const std::vector<double>& w, std::size_t block) {
  cxd acc(0.0, 0.0);
  for (std::size_t k = 0; k < offs.size(); ++k)
    acc += w[k] * base[offs[k] * static_cast<long>(block)];
  return acc;
}

}  // namespace

MetricField mollify(const MetricField& h, double nu) {
  if (!h.generator)
    throw std::invalid_argument("mollify: metric needs a generator for exact resampling");
  const GridSpec& g = h.grid();
  const Mollifier kern = make_mollifier(g, nu);
  const ConvPlan plan = make_plan(g, kern);
  const MetricField src = resample(h, plan.expanded);

  const int r = h.rank();
  MatrixField out;
  out.spec = g;
  out.rank = r;
  out.values.assign(g.num_nodes() * out.block(), cxd(0.0, 0.0));

  const bool isotropic = generator_is_isotropic_scalar(*h.generator);
  const std::size_t blk = out.block();
  const std::size_t n = g.num_nodes();
  std::vector<int> scratch(g.real_axes());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = expanded_base(g, plan.expanded, plan.margins, i, scratch);
    if (isotropic) {
      const cxd s = convolve_at(src.samples.values.data() + base * blk,
                                plan.lin_offsets, kern.weights, blk);
      for (int t = 0; t < r; ++t) out.values[i * blk + t * r + t] = s;
    } else {
      for (std::size_t t = 0; t < blk; ++t)
        out.values[i * blk + t] =
            convolve_at(src.samples.values.data() + base * blk + t,
                        plan.lin_offsets, kern.weights, blk);
    }
  }
  return make_metric_field(std::move(out), Smoothness::kSmooth, std::nullopt,
                           /*validate_psd=*/false);
}

ScalarField mollify_scalar(const ScalarField& f, const Mollifier& kern,
                           const GridSpec& out_grid) {
  const ConvPlan plan = make_plan(out_grid, kern);
  if (!f.spec.same_layout(plan.expanded))
    throw std::invalid_argument("mollify_scalar: field must live on the expanded grid");
  ScalarField out;
  out.spec = out_grid;
  out.values.assign(out_grid.num_nodes(), cxd(0.0, 0.0));
  std::vector<int> scratch(out_grid.real_axes());
  const std::size_t n = out_grid.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base =
        expanded_base(out_grid, plan.expanded, plan.margins, i, scratch);
    out.values[i] =
        convolve_at(f.values.data() + base, plan.lin_offsets, kern.weights, 1);
  }
  return out;
}

MonotonicityReport monotonicity_check(const MetricField& h,
                                      const std::vector<double>& nu_schedule) {
  if (nu_schedule.size() < 2)
    throw std::invalid_argument("monotonicity_check: need at least two nu values");
  for (std::size_t i = 1; i < nu_schedule.size(); ++i)
    if (!(nu_schedule[i] > nu_schedule[i - 1]))
      throw std::invalid_argument("monotonicity_check: schedule must be increasing");

  MonotonicityReport rep;
  rep.nus = nu_schedule;
  std::vector<MetricField> seq;
  seq.reserve(nu_schedule.size());
  for (double nu : nu_schedule) seq.push_back(mollify(h, nu));

  const std::size_t n = h.grid().num_nodes();
  for (std::size_t s = 0; s + 1 < seq.size(); ++s) {
    const MetricField& big = seq[s];      // larger kernel
    const MetricField& small = seq[s + 1];
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const MatC a = big.samples.at(i);
      const MatC b = small.samples.at(i);
      const double tol = 1e-9 * (1.0 + std::abs(a.trace().real()));
      const double lam = min_eigenvalue(a - b);  // want small <= big
      if (lam < -tol) {
        ++bad;
        worst = std::min(worst, lam);
      }
    }
    rep.points_compared.push_back(n);
    rep.violations.push_back(bad);
    rep.worst_violation.push_back(worst);
  }
  rep.pass = std::all_of(rep.violations.begin(), rep.violations.end(),
                         [](std::size_t v) { return v == 0; });
  return rep;
}

UniformConvergenceReport uniform_convergence_check(
    const MetricField& h, const std::vector<double>& nu_schedule, double tol) {
  if (!at_least_continuous(h.smoothness))
    throw std::invalid_argument(
        "uniform_convergence_check: metric must be flagged continuous");
  if (!(tol > 0.0))
    throw std::invalid_argument("uniform_convergence_check: tol must be positive");

  UniformConvergenceReport rep;
  rep.nus = nu_schedule;
  rep.tol = tol;
  const std::size_t n = h.grid().num_nodes();
  for (double nu : nu_schedule) {
    const MetricField hn = mollify(h, nu);
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sup = std::max(sup, (MatC(hn.samples.at(i)) - MatC(h.samples.at(i))).norm());
    rep.sup_err.push_back(sup);
  }
  rep.pass = true;
  for (std::size_t i = 0; i + 1 < rep.sup_err.size(); ++i)
    if (rep.sup_err[i + 1] > rep.sup_err[i] * (1.0 + 1e-12)) rep.pass = false;
  if (rep.sup_err.empty() || rep.sup_err.back() > tol) rep.pass = false;
  return rep;
}

cxd pair_current(const ScalarField& f, const ScalarField& phi) {
  return std::pow(2.0, f.spec.dim) * pair_with_test(f, phi);
}

WeakConvergenceTable weak_convergence_probe(const MetricField& h,
                                            const std::vector<double>& nu_schedule,
                                            const std::vector<cxd>& xi,
                                            const std::vector<ScalarField>& phi_set,
                                            double floor_det) {
  if (phi_set.empty())
    throw std::invalid_argument("weak_convergence_probe: empty test set");
  const GridSpec& g = h.grid();
  const Mask sub = sublevel_mask(h, floor_det);
  for (const ScalarField& phi : phi_set) {
    const Mask supp = support_mask(phi);
    for (std::size_t i = 0; i < supp.size(); ++i)
      if (supp[i] && !sub[i])
        throw std::domain_error(
            "weak_convergence_probe: det h <= floor on a test-function support");
  }

  const int r = h.rank();
  WeakConvergenceTable table;
  table.nus = nu_schedule;
  table.xi = xi;
  table.per_phi.resize(phi_set.size());

  for (double nu : nu_schedule) {
    const MetricField hn = mollify(h, nu);
    const CurvatureField curv = curvature(hn, floor_det);
    const MatrixField tt = contract(curv, xi);
    for (std::size_t p = 0; p < phi_set.size(); ++p) {
      std::vector<cxd> entries(static_cast<std::size_t>(r) * r);
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
          ScalarField comp;
          comp.spec = g;
          comp.mask = tt.mask;
          comp.partial = true;
          comp.values.resize(g.num_nodes());
          for (std::size_t i = 0; i < comp.values.size(); ++i)
            comp.values[i] = tt.valid_at(i) ? tt.at(i)(a, b) : cxd(0.0, 0.0);
          entries[a * r + b] = pair_current(comp, phi_set[p]);
        }
      }
      table.per_phi[p].pairings.push_back(std::move(entries));
    }
  }

  // Limit row: exact symbolic samples when available, else direct masked
  // differentiation of smooth-flagged metrics.
  std::optional<MatrixField> limit_tt;
  std::string source = "none";
  if (h.generator) {
    if (auto sm = symbolic_metric(*h.generator)) {
      const auto blocks = sym::sym_curvature(*sm);
      CurvatureField cf;
      cf.dim = g.dim;
      cf.mask = sub;
      for (const auto& b : blocks) {
        MatrixField mf = sample(b, g);
        mf.mask = mask_and(mf.mask, sub);
        cf.mask = mask_and(cf.mask, mf.mask);
        cf.blocks.push_back(std::move(mf));
      }
      for (auto& b : cf.blocks) b.mask = cf.mask;
      limit_tt = contract(cf, xi);
      source = "symbolic";
    }
  }
  if (!limit_tt && h.smoothness == Smoothness::kSmooth) {
    const CurvatureField curv = curvature(h, floor_det);
    limit_tt = contract(curv, xi);
    source = "direct";
  }

  for (std::size_t p = 0; p < phi_set.size(); ++p) {
    WeakProbePhi& row = table.per_phi[p];
    row.limit_source = source;
    if (limit_tt) {
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
          ScalarField comp;
          comp.spec = g;
          comp.mask = limit_tt->mask;
          comp.partial = true;
          comp.values.resize(g.num_nodes());
          for (std::size_t i = 0; i < comp.values.size(); ++i)
            comp.values[i] = limit_tt->valid_at(i) ? limit_tt->at(i)(a, b)
                                                   : cxd(0.0, 0.0);
          row.limit.push_back(pair_current(comp, phi_set[p]));
        }
      }
    }
    for (std::size_t s = 0; s + 1 < row.pairings.size(); ++s) {
      double inc = 0.0;
      for (std::size_t e = 0; e < row.pairings[s].size(); ++e)
        inc = std::max(inc, std::abs(row.pairings[s + 1][e] - row.pairings[s][e]));
      row.cauchy.push_back(inc);
    }
  }
  return table;
}

LpProfileTable lp_profile(const ConnectionField& theta, double p,
                          const std::vector<double>& annuli_radii, cxd center) {
  if (theta.dim != 1)
    throw std::invalid_argument("lp_profile: only one-dimensional bases");
  if (annuli_radii.size() < 2)
    throw std::invalid_argument("lp_profile: need at least two radii");
  for (std::size_t i = 1; i < annuli_radii.size(); ++i)
    if (!(annuli_radii[i] > annuli_radii[i - 1]))
      throw std::invalid_argument("lp_profile: radii must be ascending");

  const MatrixField& th = theta.coeff[0];
  const GridSpec& g = th.spec;
  const int r = th.rank;
  const std::size_t annuli = annuli_radii.size() - 1;

  LpProfileTable table;
  table.p = p;
  table.radii = annuli_radii;
  table.annulus.assign(static_cast<std::size_t>(r) * r,
                       std::vector<double>(annuli, 0.0));
  table.cumulative = table.annulus;

  for (std::size_t k = 0; k < annuli; ++k) {
    const double lo = annuli_radii[k], hi = annuli_radii[k + 1];
    const Mask region = mask_where(g, [&](const std::vector<cxd>& z) {
      const double d = std::abs(z[0] - center);
      return d > lo && d < hi;
    });
    if (mask_count(g, region) == 0)
      throw std::invalid_argument("lp_profile: empty annulus at this resolution");
    for (std::size_t i = 0; i < region.size(); ++i)
      if (region[i] && !th.valid_at(i))
        throw std::domain_error("lp_profile: annulus leaves the connection mask");
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) {
        ScalarField f;
        f.spec = g;
        f.values.resize(g.num_nodes());
        for (std::size_t i = 0; i < f.values.size(); ++i)
          f.values[i] = region[i]
                            ? cxd(std::pow(std::abs(th.at(i)(a, b)), p), 0.0)
                            : cxd(0.0, 0.0);
        table.annulus[a * r + b][k] = integrate(f, region).real();
      }
    }
  }
  for (std::size_t e = 0; e < table.annulus.size(); ++e) {
    double acc = 0.0;
    for (std::size_t k = annuli; k-- > 0;) {
      acc += table.annulus[e][k];
      table.cumulative[e][k] = acc;
    }
  }
  return table;
}

L2BoundReport l2_bound_check(const MetricField& h,
                             const std::vector<double>& nu_schedule,
                             const Mask& region,
                             const std::vector<ScalarField>& phi_set,
                             double band) {
  const GridSpec& g = h.grid();
  L2BoundReport rep;
  rep.nus = nu_schedule;
  rep.band = band;
  rep.pairings.resize(phi_set.size());
  rep.cauchy.resize(phi_set.size());

  const int r = h.rank();
  for (double nu : nu_schedule) {
    const MetricField hn = mollify(h, nu);
    std::vector<MatrixField> dh;
    Mask common;
    for (int j = 0; j < g.dim; ++j) {
      dh.push_back(wirtinger_d(hn.samples, j));
      common = mask_and(common, dh.back().mask);
    }
    for (std::size_t i = 0; i < region.size(); ++i)
      if (region[i] && !common[i])
        throw std::domain_error("l2_bound_check: region exceeds the stencil mask");

    ScalarField e;
    e.spec = g;
    e.values.assign(g.num_nodes(), cxd(0.0, 0.0));
    for (std::size_t i = 0; i < e.values.size(); ++i) {
      if (!common[i]) continue;
      double acc = 0.0;
      for (int j = 0; j < g.dim; ++j) acc += MatC(dh[j].at(i)).squaredNorm();
      e.values[i] = cxd(acc, 0.0);
    }
    rep.l2_mass.push_back(integrate(e, region).real());

    for (std::size_t p = 0; p < phi_set.size(); ++p) {
      std::vector<cxd> entries;
      entries.reserve(static_cast<std::size_t>(g.dim) * r * r);
      for (int j = 0; j < g.dim; ++j) {
        for (int a = 0; a < r; ++a) {
          for (int b = 0; b < r; ++b) {
            ScalarField comp;
            comp.spec = g;
            comp.mask = common;
            comp.partial = true;
            comp.values.resize(g.num_nodes());
            for (std::size_t i = 0; i < comp.values.size(); ++i)
              comp.values[i] = common[i] ? dh[j].at(i)(a, b) : cxd(0.0, 0.0);
            entries.push_back(pair_with_test(comp, phi_set[p]));
          }
        }
      }
      rep.pairings[p].push_back(std::move(entries));
    }
  }

  for (std::size_t p = 0; p < phi_set.size(); ++p) {
    for (std::size_t s = 0; s + 1 < rep.pairings[p].size(); ++s) {
      double inc = 0.0;
      for (std::size_t e = 0; e < rep.pairings[p][s].size(); ++e)
        inc = std::max(inc,
                       std::abs(rep.pairings[p][s + 1][e] - rep.pairings[p][s][e]));
      rep.cauchy[p].push_back(inc);
    }
  }

  const auto [mn, mx] =
      std::minmax_element(rep.l2_mass.begin(), rep.l2_mass.end());
  rep.bounded = !rep.l2_mass.empty() && (*mx - *mn) <= band * (1.0 + *mn);
  return rep;
}

}  // namespace hermet
