// hermet: curvature analysis of singular hermitian metrics on trivial
// holomorphic vector bundles over polydiscs.

#include <iostream>

#include "CLI11.hpp"
#include "hermet/catalog.hpp"
#include "hermet/commands.hpp"

namespace {

void add_common_flags(CLI::App* sub, hermet::RunConfig& cfg, bool require_seed) {
  sub->add_option("--metric", cfg.metric, "catalog metric name");
  sub->add_option("--rank", cfg.rank, "fiber rank");
  sub->add_option("--dim", cfg.dim, "complex dimension of the base");
  sub->add_option("--param", cfg.params, "numeric parameters for the entry");
  sub->add_option("--profile", cfg.profile, "diag-psh profile: sq|relu|log");
  sub->add_option("--grid", cfg.grid_points, "points per real axis");
  sub->add_option("--radius", cfg.radius, "polyradius");
  sub->add_option("--halo", cfg.halo, "stencil margin in cells");
  sub->add_option("--nu-start", cfg.nu_start, "first mollifier scale (0 = auto)");
  sub->add_option("--nu-steps", cfg.nu_steps, "mollifier schedule length");
  sub->add_option("--delta", cfg.delta, "declared strictness constant");
  sub->add_option("--p", cfg.p_exponent, "Lp exponent");
  sub->add_option("--tol", cfg.tol, "base tolerance (0 = method default)");
  sub->add_option("--annuli", cfg.annuli, "ascending annulus radii");
  sub->add_option("--floor", cfg.floor_det, "determinant floor");
  auto* seed = sub->add_option_function<std::uint64_t>(
      "--seed",
      [&cfg](std::uint64_t s) {
        cfg.seed = s;
        cfg.seed_set = true;
      },
      "RNG seed (reports are reproducible byte-for-byte)");
  if (require_seed) seed->required();
  sub->add_option("--out", cfg.out_path, "output report path")->required();
  sub->add_option("--format", cfg.format, "json|csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singular hermitian metric curvature toolkit"};
  app.require_subcommand(1);

  hermet::RunConfig cfg;
  bool corrupt_fixture = false;
  int rc = 0;

  auto* verify = app.add_subcommand(
      "verify-counterexample",
      "exact connection identities and the non-integrability profile");
  add_common_flags(verify, cfg, /*require_seed=*/false);
  verify->add_flag("--corrupt-fixture", corrupt_fixture,
                   "perturb the metric (test fixture; must fail)")
      ->group("");  // hidden
  verify->callback([&]() {
    hermet::RunConfig c = cfg;
    if (c.grid_points == 128) c.grid_points = 256;
    rc = hermet::cmd_verify_counterexample(c, corrupt_fixture);
  });

  auto* analyze = app.add_subcommand("analyze", "curvature and psh test battery");
  add_common_flags(analyze, cfg, /*require_seed=*/true);
  analyze->callback([&]() { rc = hermet::cmd_analyze(cfg); });

  auto* regularize =
      app.add_subcommand("regularize", "mollifier schedule diagnostics");
  add_common_flags(regularize, cfg, /*require_seed=*/true);
  regularize->callback([&]() { rc = hermet::cmd_regularize(cfg); });

  auto* psh = app.add_subcommand("psh-test", "plurisubharmonicity tests");
  add_common_flags(psh, cfg, /*require_seed=*/true);
  psh->callback([&]() { rc = hermet::cmd_psh_test(cfg); });

  auto* nakano = app.add_subcommand("nakano-test", "Nakano negativity tests");
  add_common_flags(nakano, cfg, /*require_seed=*/true);
  nakano->callback([&]() { rc = hermet::cmd_nakano_test(cfg); });

  auto* exp = app.add_subcommand("export", "dump metric samples and symbolic forms");
  add_common_flags(exp, cfg, /*require_seed=*/false);
  exp->callback([&]() { rc = hermet::cmd_export(cfg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError&) {
    std::cerr << "usage error; see --help\n";
    return 2;
  }
  return rc;
}
