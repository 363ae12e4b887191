#pragma once

#include <optional>
#include <string>
#include <vector>

#include "factorlab/coinvariants.hpp"
#include "factorlab/selftest.hpp"

namespace factorlab {

// Exit code contract of the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFalse = 1,
  kExitInvalidConfig = 2,
  kExitFuelExhausted = 3,
};

enum class RunMode { Factorize, Properties, Smoke };

struct RunConfig {
  RunMode mode = RunMode::Factorize;
  unsigned n = 2;
  Rational level = 1;
  std::vector<Cyc> points;
  std::vector<std::string> rep_exprs;  // one constructor expression per point
  int max_depth = 6;
  std::string out_path;      // empty: stdout
  bool deterministic = false;  // zero out timing fields
  long fuel_limit = 200'000'000;

  // echoes for the report
  std::vector<std::string> point_exprs;
};

// Cyclotomic literal: product of rational factors `p/q` and root-of-unity
// factors `e(a)` joined by '*'.
std::optional<Cyc> parse_point(unsigned n, const std::string& text);
// Module constructor expression: `def`, `dual`, or tensor products joined
// by '*', e.g. "def*dual".
std::optional<FinRep> parse_rep(unsigned n, const std::string& text);

struct ConfigOutcome {
  std::optional<RunConfig> config;
  std::vector<std::string> diagnostics;  // every violated invariant
};

// Flags in the style `--n 2 --level 1 --points 1,2 --reps def,def`; a JSON
// config file provides the same fields flat.
ConfigOutcome parse_config(const std::vector<std::string>& args);
ConfigOutcome parse_config_json(const std::string& json_text);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string report_json;
  std::string table;  // per-suite table for the properties mode
};

RunOutcome run_check(const RunConfig& cfg);

}  // namespace factorlab
