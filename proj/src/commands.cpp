#include "hermet/commands.hpp"

#include <cmath>
#include <functional>

#include "hermet/catalog.hpp"
#include "hermet/chern.hpp"
#include "hermet/psh.hpp"
#include "hermet/regularize.hpp"

namespace hermet {

namespace {

GridSpec build_grid(const RunConfig& cfg) {
  return make_grid(cfg.dim, cxd(0.0, 0.0), cfg.radius, cfg.grid_points, cfg.halo);
}

MetricField build_metric(const RunConfig& cfg, const GridSpec& g) {
  return make_catalog_metric(cfg.metric, cfg.rank, cfg.dim, g, cfg.params,
                             cfg.profile);
}

std::vector<double> build_schedule(const RunConfig& cfg, const GridSpec& g) {
  if (cfg.nu_start > 0.0) {
    std::vector<double> nus(cfg.nu_steps);
    for (int i = 0; i < cfg.nu_steps; ++i)
      nus[i] = cfg.nu_start * std::pow(2.0, i);
    return nus;
  }
  return default_nu_schedule(g, cfg.nu_steps);
}

double base_tol(const RunConfig& cfg, const GridSpec& g) {
  return cfg.tol > 0.0 ? cfg.tol : default_psh_tol(g);
}

std::string location_string(const GridSpec& g, std::size_t idx) {
  const auto z = g.point(idx);
  std::string s = std::to_string(idx) + ":";
  for (int j = 0; j < g.dim; ++j) {
    if (j) s += ";";
    s += "(" + format_double(z[j].real()) + "," + format_double(z[j].imag()) + ")";
  }
  return s;
}

Json psh_report_json(const GridSpec& g, const PshReport& r) {
  Json j;
  j["verdict"] = verdict_name(r.verdict);
  j["method"] = r.method;
  j["worst_margin"] = r.worst_margin;
  j["worst_scaled_margin"] = r.worst_scaled_margin;
  j["worst_location"] = location_string(g, r.worst_index);
  j["points_tested"] = r.points_tested;
  j["tol"] = r.tol;
  if (!r.radii.empty()) j["radii"] = r.radii;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json pencil_report_json(const GridSpec& g, const PencilReport& r) {
  Json j;
  j["test"] = r.test;
  j["pass"] = r.pass;
  j["delta_declared"] = r.delta_declared;
  j["delta_empirical"] = r.delta_empirical;
  j["worst_margin"] = r.worst_margin;
  j["worst_location"] = location_string(g, r.worst_index);
  j["points_tested"] = r.points_tested;
  j["failing_points"] = r.failing_points;
  j["tol"] = r.tol;
  return j;
}

int guarded(const RunConfig& cfg, bool needs_seed, const std::function<int()>& body) {
  try {
    cfg.validate(needs_seed);
    if (cfg.out_path.empty())
      throw std::invalid_argument("config: --out is required");
    return body();
  } catch (const std::invalid_argument&) {
    return 2;
  } catch (const std::exception&) {
    return 1;
  }
}

struct AnalyzeRow {
  std::string test;
  std::size_t point_count = 0;
  double worst_margin = 0.0;
  std::string worst_location;
  std::string verdict;
};

void append_analyze_csv(CsvTable& t, const AnalyzeRow& r) {
  t.add_row({r.test, std::to_string(r.point_count), format_double(r.worst_margin),
             r.worst_location, r.verdict, std::to_string(kSchemaVersion)});
}

}  // namespace

int cmd_verify_counterexample(const RunConfig& cfg, bool corrupt_fixture) {
  return guarded(cfg, /*needs_seed=*/false, [&]() -> int {
    const sym::CounterexampleReport rep = sym::verify_counterexample(corrupt_fixture);

    // Connection blow-up profile on dyadic annuli 2^{-k-1} < |z| < 2^{-k}.
    const int annuli = 8;
    std::vector<double> i21(annuli, 0.0), i11(annuli, 0.0);
    for (int k = 1; k <= annuli; ++k) {
      const double outer = std::pow(2.0, -k);
      const GridSpec g =
          make_grid(1, cxd(0.0, 0.0), 1.25 * outer, cfg.grid_points, cfg.halo);
      const MetricField h = make_catalog_metric("paper-counterexample", 2, 1, g);
      const double inner = 0.5 * outer;
      const double floor_k = 0.25 * std::pow(inner, 4.0);
      const ConnectionField conn = connection(h, floor_k);
      const LpProfileTable prof = lp_profile(conn, 1.0, {inner, outer}, cxd(0, 0));
      i21[k - 1] = prof.annulus[1 * 2 + 0][0];
      i11[k - 1] = prof.annulus[0][0];
    }
    const double per_annulus = 2.0 * M_PI * std::log(2.0);
    bool growth_ok = true;
    std::vector<double> cum(annuli, 0.0);
    double acc = 0.0;
    for (int k = 0; k < annuli; ++k) {
      acc += i21[k];
      cum[k] = acc;
      if (acc < 0.95 * per_annulus * k) growth_ok = false;  // k annuli so far: >= (k-1+1)-1
    }

    const bool pass = rep.ok() && growth_ok;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "verify-counterexample";
    j["config"] = cfg.to_json();
    j["exact"] = {{"dh_matches", rep.dh_matches},
                  {"inverse_matches", rep.inverse_matches},
                  {"theta_matches", rep.theta_matches},
                  {"norm_identity_matches", rep.norm_identity_matches},
                  {"curvature_vanishes_off_origin", rep.curvature_vanishes_off_origin},
                  {"theta21_pole_degree", rep.theta21_pole_degree},
                  {"non_integrability_flagged", rep.non_integrability_flagged}};
    j["theta"] = rep.theta_str;
    j["dh"] = rep.dh_str;
    j["h_inverse"] = rep.inverse_str;
    j["lp"] = {{"per_annulus_expected", per_annulus},
               {"theta21_annulus_integrals", i21},
               {"theta11_annulus_integrals", i11},
               {"theta21_cumulative", cum},
               {"growth_ok", growth_ok}};
    j["pass"] = pass;
    write_json_report(cfg.out_path, j);

    if (cfg.format == "csv") {
      CsvTable t;
      t.header = {"annulus_inner", "annulus_outer", "int_abs_theta21",
                  "int_abs_theta11", "cumulative_theta21", "schema_version"};
      for (int k = 0; k < annuli; ++k)
        t.add_row({format_double(std::pow(2.0, -k - 2)),
                   format_double(std::pow(2.0, -k - 1)), format_double(i21[k]),
                   format_double(i11[k]), format_double(cum[k]),
                   std::to_string(kSchemaVersion)});
      write_text_atomic(csv_sibling(cfg.out_path), t.to_string());
    }
    return pass ? 0 : 1;
  });
}

int cmd_analyze(const RunConfig& cfg) {
  return guarded(cfg, /*needs_seed=*/true, [&]() -> int {
    const GridSpec g = build_grid(cfg);
    const MetricField h = build_metric(cfg, g);
    Rng rng(cfg.seed);
    const double tol = base_tol(cfg, g);

    std::vector<AnalyzeRow> rows;
    Json extras;

    const auto corpus = default_section_corpus(cfg.rank, cfg.dim, 2, 16, rng);
    {
      const PshReport r = griffiths_negative_test(h, corpus, PshMethod::kHessian, tol);
      rows.push_back({"griffiths-psh", r.points_tested, r.worst_margin,
                      location_string(g, r.worst_index), verdict_name(r.verdict)});
      extras["griffiths_psh"] = psh_report_json(g, r);
    }
    {
      const PshReport r = is_psh(log_det_field(h), PshMethod::kHessian, tol);
      rows.push_back({"log-det-psh", r.points_tested, r.worst_margin,
                      location_string(g, r.worst_index), verdict_name(r.verdict)});
      extras["log_det_psh"] = psh_report_json(g, r);
    }
    if (h.smoothness == Smoothness::kSmooth) {
      const CurvatureField curv = curvature(h, cfg.floor_det);
      const auto xi_set = default_xi_set(cfg.dim, 8, rng);
      {
        const PencilReport r = griffiths_test(h, curv, cfg.delta, xi_set, tol);
        rows.push_back({"griffiths-pencil", r.points_tested, r.worst_margin,
                        location_string(g, r.worst_index),
                        r.pass ? "pass" : "fail"});
        extras["griffiths_pencil"] = pencil_report_json(g, r);
      }
      {
        const PencilReport r = nakano_test(h, curv, cfg.delta, tol);
        rows.push_back({"nakano-pencil", r.points_tested, r.worst_margin,
                        location_string(g, r.worst_index),
                        r.pass ? "pass" : "fail"});
        extras["nakano_pencil"] = pencil_report_json(g, r);
      }
      {
        // Residual of the curvature identity over a few corpus sections.
        double sup = 0.0, scale = 1.0;
        std::size_t pts = 0, worst = 0;
        std::vector<cxd> xi(cfg.dim, cxd(0.0, 0.0));
        xi[0] = cxd(1.0, 0.0);
        for (int s = 0; s < 4 && s < static_cast<int>(corpus.size()); ++s) {
          const ScalarField res = bochner_residual(h, corpus[s], xi, cfg.floor_det);
          const ScalarField nsq = eval_norm_sq(h, corpus[s]);
          for (std::size_t i = 0; i < res.values.size(); ++i) {
            if (!res.valid_at(i)) continue;
            ++pts;
            scale = std::max(scale, std::abs(nsq.values[i].real()));
            if (std::abs(res.values[i]) > sup) {
              sup = std::abs(res.values[i]);
              worst = i;
            }
          }
        }
        const bool ok = sup <= tol * scale;
        rows.push_back({"bochner", pts, sup, location_string(g, worst),
                        ok ? "pass" : "fail"});
        extras["bochner"] = {{"sup_residual", sup}, {"scale", scale}, {"pass", ok}};
      }
    }

    bool pass = true;
    for (const auto& r : rows) pass = pass && r.verdict != "fail";

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "analyze";
    j["config"] = cfg.to_json();
    j["metric_smoothness"] = smoothness_name(h.smoothness);
    Json jrows = Json::array();
    for (const auto& r : rows)
      jrows.push_back({{"test", r.test},
                       {"point_count", r.point_count},
                       {"worst_margin", r.worst_margin},
                       {"worst_location", r.worst_location},
                       {"verdict", r.verdict}});
    j["tests"] = jrows;
    j["details"] = extras;
    j["pass"] = pass;
    write_json_report(cfg.out_path, j);

    if (cfg.format == "csv") {
      CsvTable t;
      t.header = {"test", "point_count", "worst_margin", "worst_location",
                  "verdict", "schema_version"};
      for (const auto& r : rows) append_analyze_csv(t, r);
      write_text_atomic(csv_sibling(cfg.out_path), t.to_string());
    }
    return pass ? 0 : 1;
  });
}

int cmd_regularize(const RunConfig& cfg) {
  return guarded(cfg, /*needs_seed=*/true, [&]() -> int {
    const GridSpec g = build_grid(cfg);
    const MetricField h = build_metric(cfg, g);
    const std::vector<double> nus = build_schedule(cfg, g);
    Rng rng(cfg.seed);

    const MonotonicityReport mono = monotonicity_check(h, nus);

    UniformConvergenceReport uni;
    bool uni_ran = false;
    if (at_least_continuous(h.smoothness)) {
      double scale = 0.0;
      for (std::size_t i = 0; i < h.grid().num_nodes(); ++i)
        scale = std::max(scale, MatC(h.samples.at(i)).norm());
      uni = uniform_convergence_check(
          h, nus, cfg.tol > 0.0 ? cfg.tol : 0.05 * (1.0 + scale));
      uni_ran = true;
    }

    // Off-center bump keeps det h above the floor for every catalog metric.
    const ScalarField phi =
        radial_bump(g, {cxd(0.7 * cfg.radius, 0.0)}, 0.18 * cfg.radius);
    std::vector<cxd> xi(cfg.dim, cxd(0.0, 0.0));
    xi[0] = cxd(1.0, 0.0);
    const WeakConvergenceTable weak =
        weak_convergence_probe(h, nus, xi, {phi}, cfg.floor_det);

    const Mask region = mask_and(
        mask_where(g, [&](const std::vector<cxd>& z) {
          double r2 = 0.0;
          for (const auto& zz : z) r2 += std::norm(zz);
          return std::sqrt(r2) < 0.5 * cfg.radius;
        }),
        interior_mask(g));
    const L2BoundReport l2 = l2_bound_check(h, nus, region, {phi});

    // Empirical strictness per step (mollified metrics are smooth).
    std::vector<double> delta_emp(nus.size(), 0.0);
    {
      Rng xr(cfg.seed + 1);
      const auto xi_set = default_xi_set(cfg.dim, 2, xr);
      for (std::size_t s = 0; s < nus.size(); ++s) {
        const MetricField hn = mollify(h, nus[s]);
        const CurvatureField curv = curvature(hn, cfg.floor_det);
        const PencilReport r =
            griffiths_test(hn, curv, cfg.delta, xi_set, base_tol(cfg, g));
        delta_emp[s] = r.delta_empirical;
      }
    }

    const bool pass = mono.pass && (!uni_ran || uni.pass);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "regularize";
    j["config"] = cfg.to_json();
    j["nus"] = nus;
    j["monotonicity"] = {{"pass", mono.pass},
                         {"violations", mono.violations},
                         {"worst_violation", mono.worst_violation},
                         {"points_compared", mono.points_compared}};
    if (uni_ran)
      j["uniform_convergence"] = {{"pass", uni.pass},
                                  {"sup_err", uni.sup_err},
                                  {"tol", uni.tol}};
    Json jw;
    jw["limit_source"] = weak.per_phi[0].limit_source;
    jw["cauchy"] = weak.per_phi[0].cauchy;
    Json jp = Json::array();
    for (const auto& row : weak.per_phi[0].pairings) {
      Json jr = Json::array();
      for (const cxd& v : row) jr.push_back({{"re", v.real()}, {"im", v.imag()}});
      jp.push_back(jr);
    }
    jw["pairings"] = jp;
    if (!weak.per_phi[0].limit.empty()) {
      Json jl = Json::array();
      for (const cxd& v : weak.per_phi[0].limit)
        jl.push_back({{"re", v.real()}, {"im", v.imag()}});
      jw["limit"] = jl;
    }
    j["weak_convergence"] = jw;
    j["l2"] = {{"mass", l2.l2_mass}, {"bounded", l2.bounded}};
    j["delta_empirical"] = delta_emp;
    j["pass"] = pass;
    write_json_report(cfg.out_path, j);

    if (cfg.format == "csv") {
      CsvTable t;
      t.header = {"nu",       "sup_err",    "monotone",        "delta_emp",
                  "l2_dh",    "pairing_re", "pairing_im",      "cauchy_increment",
                  "schema_version"};
      for (std::size_t s = 0; s < nus.size(); ++s) {
        const cxd p0 = weak.per_phi[0].pairings[s][0];
        t.add_row({format_double(nus[s]),
                   uni_ran ? format_double(uni.sup_err[s]) : "nan",
                   s == 0 ? "1" : (mono.violations[s - 1] == 0 ? "1" : "0"),
                   format_double(delta_emp[s]), format_double(l2.l2_mass[s]),
                   format_double(p0.real()), format_double(p0.imag()),
                   s == 0 ? "0" : format_double(weak.per_phi[0].cauchy[s - 1]),
                   std::to_string(kSchemaVersion)});
      }
      write_text_atomic(csv_sibling(cfg.out_path), t.to_string());
    }
    return pass ? 0 : 1;
  });
}

int cmd_psh_test(const RunConfig& cfg) {
  return guarded(cfg, /*needs_seed=*/true, [&]() -> int {
    const GridSpec g = build_grid(cfg);
    const MetricField h = build_metric(cfg, g);
    Rng rng(cfg.seed);
    const double tol = base_tol(cfg, g);
    const auto corpus = default_section_corpus(cfg.rank, cfg.dim, 2, 16, rng);

    const PshReport hess = griffiths_negative_test(h, corpus, PshMethod::kHessian, tol);
    const PshReport sub = griffiths_negative_test(h, corpus, PshMethod::kSubmean, tol);
    const PshReport logdet = is_psh(log_det_field(h), PshMethod::kHessian, tol);

    // log-psh equivalence on the first basis section.
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(cfg.rank);
    e1(0) = cxd(1.0, 0.0);
    const SectionField u = constant_section(cfg.rank, cfg.dim, e1);
    std::vector<SectionField> q_corpus;
    q_corpus.push_back(make_section(1, cfg.dim, {{}}));  // q = 0
    std::vector<unsigned> ez(cfg.dim, 0u);
    ez[0] = 1;
    q_corpus.push_back(monomial_section(1, cfg.dim, 0, ez, cxd(0.5, 0.25)));
    const LogPshReport lp = log_psh_equivalence_test(h, u, q_corpus, tol);

    const bool pass = hess.verdict != PshVerdict::kFail &&
                      sub.verdict != PshVerdict::kFail &&
                      logdet.verdict != PshVerdict::kFail &&
                      lp.exponential.verdict != PshVerdict::kFail &&
                      lp.direct_log.verdict != PshVerdict::kFail;

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "psh-test";
    j["config"] = cfg.to_json();
    j["griffiths_hessian"] = psh_report_json(g, hess);
    j["griffiths_submean"] = psh_report_json(g, sub);
    j["log_det"] = psh_report_json(g, logdet);
    j["log_psh_exponential"] = psh_report_json(g, lp.exponential);
    j["log_psh_direct"] = psh_report_json(g, lp.direct_log);
    j["pass"] = pass;
    write_json_report(cfg.out_path, j);
    return pass ? 0 : 1;
  });
}

int cmd_nakano_test(const RunConfig& cfg) {
  return guarded(cfg, /*needs_seed=*/true, [&]() -> int {
    const GridSpec g = build_grid(cfg);
    const MetricField h = build_metric(cfg, g);
    Rng rng(cfg.seed);
    const double tol = base_tol(cfg, g);

    std::vector<SectionTuple> corpus;
    {
      // Constant coordinate tuple plus a few random ones.
      SectionTuple base;
      for (int j = 0; j < cfg.dim; ++j) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cfg.rank);
        v(j % cfg.rank) = cxd(1.0, 0.0);
        base.parts.push_back(constant_section(cfg.rank, cfg.dim, v));
      }
      corpus.push_back(std::move(base));
      for (int t = 0; t < 4; ++t) {
        SectionTuple tup;
        for (int j = 0; j < cfg.dim; ++j)
          tup.parts.push_back(random_section(cfg.rank, cfg.dim, 1, rng));
        corpus.push_back(std::move(tup));
      }
    }

    const std::vector<double> nus =
        h.smoothness == Smoothness::kSmooth ? std::vector<double>{}
                                            : build_schedule(cfg, g);
    const NakanoNegReport rep =
        nakano_negative_test(h, corpus, cfg.delta, tol, cfg.floor_det, nus);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "nakano-test";
    j["config"] = cfg.to_json();
    j["form_psh"] = psh_report_json(g, rep.form_psh);
    Json jp = Json::array();
    for (std::size_t s = 0; s < rep.pencil.size(); ++s) {
      Json row = pencil_report_json(g, rep.pencil[s]);
      if (!rep.nus.empty()) row["nu"] = rep.nus[s];
      jp.push_back(row);
    }
    j["pencil"] = jp;
    j["pass"] = rep.pass;
    write_json_report(cfg.out_path, j);
    return rep.pass ? 0 : 1;
  });
}

int cmd_export(const RunConfig& cfg) {
  return guarded(cfg, /*needs_seed=*/false, [&]() -> int {
    const GridSpec g = build_grid(cfg);
    const MetricField h = build_metric(cfg, g);
    const ScalarField det = det_field(h);

    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "export";
    j["config"] = cfg.to_json();
    j["smoothness"] = smoothness_name(h.smoothness);
    j["nodes"] = g.num_nodes();
    if (h.generator) {
      if (auto sm = symbolic_metric(*h.generator)) {
        j["symbolic"] = {{"h", sm->str()}};
        const auto theta = sym::sym_connection(*sm);
        Json jt = Json::array();
        for (const auto& t : theta) jt.push_back(t.str());
        j["symbolic"]["theta"] = jt;
        const auto curv = sym::sym_curvature(*sm);
        Json jc = Json::array();
        for (const auto& c : curv) jc.push_back(c.str());
        j["symbolic"]["curvature"] = jc;
      }
    }
    write_json_report(cfg.out_path, j);

    if (cfg.format == "csv") {
      CsvTable t;
      t.header = {"index"};
      for (int d = 0; d < cfg.dim; ++d) {
        t.header.push_back("z" + std::to_string(d + 1) + "_re");
        t.header.push_back("z" + std::to_string(d + 1) + "_im");
      }
      for (int a = 0; a < cfg.rank; ++a)
        for (int b = 0; b < cfg.rank; ++b) {
          t.header.push_back("h" + std::to_string(a + 1) + std::to_string(b + 1) + "_re");
          t.header.push_back("h" + std::to_string(a + 1) + std::to_string(b + 1) + "_im");
        }
      t.header.push_back("det");
      t.header.push_back("schema_version");
      const std::size_t n = g.num_nodes();
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> row;
        row.push_back(std::to_string(i));
        const auto z = g.point(i);
        for (int d = 0; d < cfg.dim; ++d) {
          row.push_back(format_double(z[d].real()));
          row.push_back(format_double(z[d].imag()));
        }
        const auto m = h.samples.at(i);
        for (int a = 0; a < cfg.rank; ++a)
          for (int b = 0; b < cfg.rank; ++b) {
            row.push_back(format_double(m(a, b).real()));
            row.push_back(format_double(m(a, b).imag()));
          }
        row.push_back(format_double(det.values[i].real()));
        row.push_back(std::to_string(kSchemaVersion));
        t.add_row(std::move(row));
      }
      write_text_atomic(csv_sibling(cfg.out_path), t.to_string());
    }
    return 0;
  });
}

}  // namespace hermet
