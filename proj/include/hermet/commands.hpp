// Command layer behind the CLI: each command runs the analysis, writes the
// JSON (and optionally CSV) report atomically, and returns the process exit
// code (0 pass, 1 analytic failure, 2 usage/config error).

#pragma once

#include "hermet/report.hpp"

namespace hermet {

int cmd_verify_counterexample(const RunConfig& cfg, bool corrupt_fixture = false);
int cmd_analyze(const RunConfig& cfg);
int cmd_regularize(const RunConfig& cfg);
int cmd_psh_test(const RunConfig& cfg);
int cmd_nakano_test(const RunConfig& cfg);
int cmd_export(const RunConfig& cfg);

}  // namespace hermet
