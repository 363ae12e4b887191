#include "factorlab/runner.hpp"

#include <chrono>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace factorlab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::optional<Cyc> parse_point(unsigned n, const std::string& text) {
  Cyc acc(1);
  for (const std::string& raw : split(text, '*')) {
    std::string f = trim(raw);
    if (f.empty()) return std::nullopt;
    if (f.size() >= 4 && f.substr(0, 2) == "e(" && f.back() == ')') {
      std::string inside = f.substr(2, f.size() - 3);
      try {
        long a = std::stol(inside);
        acc *= Cyc::eps_pow(n, a);
      } catch (...) {
        return std::nullopt;
      }
      continue;
    }
    if (f.size() >= 5 && f.substr(0, 3) == "-e(" && f.back() == ')') {
      try {
        acc *= Cyc::eps_pow(n, std::stol(f.substr(3, f.size() - 4)));
        acc = -acc;
      } catch (...) {
        return std::nullopt;
      }
      continue;
    }
    auto r = parse_rational(f);
    if (!r) return std::nullopt;
    acc *= Cyc(*r);
  }
  return acc;
}

std::optional<FinRep> parse_rep(unsigned n, const std::string& text) {
  std::optional<FinRep> acc;
  for (const std::string& raw : split(text, '*')) {
    std::string f = trim(raw);
    FinRep factor;
    if (f == "def")
      factor = FinRep::defining(n);
    else if (f == "dual")
      factor = FinRep::dual(FinRep::defining(n));
    else
      return std::nullopt;
    acc = acc ? FinRep::tensor(*acc, factor) : factor;
  }
  return acc;
}

namespace {

ConfigOutcome finish_config(RunConfig cfg, std::vector<std::string> diags) {
  if (cfg.n < 2) diags.push_back("N must be >= 2");
  if (cfg.max_depth < 1) diags.push_back("max-depth must be >= 1");
  if (cfg.points.empty()) diags.push_back("at least one marked point required");
  if (cfg.rep_exprs.size() != cfg.points.size())
    diags.push_back("reps length (" + std::to_string(cfg.rep_exprs.size()) +
                    ") must equal points length (" +
                    std::to_string(cfg.points.size()) + ")");
  if (cfg.n >= 2)
    for (const auto& v : SiteSet::violations(cfg.n, cfg.points))
      diags.push_back(v);
  for (const auto& e : cfg.rep_exprs)
    if (!parse_rep(cfg.n, e))
      diags.push_back("unknown module constructor: " + e);
  if (!diags.empty()) return {std::nullopt, std::move(diags)};
  return {std::move(cfg), {}};
}

}  // namespace

ConfigOutcome parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  std::vector<std::string> diags;
  std::size_t i = 0;
  if (i < args.size() && !args[i].empty() && args[i][0] != '-') {
    const std::string& m = args[i];
    if (m == "factorize")
      cfg.mode = RunMode::Factorize;
    else if (m == "properties")
      cfg.mode = RunMode::Properties;
    else if (m == "smoke")
      cfg.mode = RunMode::Smoke;
    else
      diags.push_back("unknown mode: " + m);
    ++i;
  }
  auto need_value = [&](const std::string& flag) -> std::optional<std::string> {
    if (i + 1 >= args.size()) {
      diags.push_back("missing value for " + flag);
      return std::nullopt;
    }
    return args[++i];
  };
  std::string points_text, reps_text;
  for (; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--n") {
      if (auto v = need_value(a)) {
        try {
          cfg.n = static_cast<unsigned>(std::stoul(*v));
        } catch (...) {
          diags.push_back("bad integer for --n: " + *v);
        }
      }
    } else if (a == "--level") {
      if (auto v = need_value(a)) {
        auto r = parse_rational(*v);
        if (r)
          cfg.level = *r;
        else
          diags.push_back("bad rational for --level: " + *v);
      }
    } else if (a == "--points") {
      if (auto v = need_value(a)) points_text = *v;
    } else if (a == "--reps") {
      if (auto v = need_value(a)) reps_text = *v;
    } else if (a == "--max-depth") {
      if (auto v = need_value(a)) {
        try {
          cfg.max_depth = std::stoi(*v);
        } catch (...) {
          diags.push_back("bad integer for --max-depth: " + *v);
        }
      }
    } else if (a == "--fuel") {
      if (auto v = need_value(a)) {
        try {
          cfg.fuel_limit = std::stol(*v);
        } catch (...) {
          diags.push_back("bad integer for --fuel: " + *v);
        }
      }
    } else if (a == "--out") {
      if (auto v = need_value(a)) cfg.out_path = *v;
    } else if (a == "--deterministic") {
      cfg.deterministic = true;
    } else {
      diags.push_back("unknown flag: " + a);
    }
  }
  if (!points_text.empty())
    for (const auto& p : split(points_text, ',')) {
      cfg.point_exprs.push_back(trim(p));
      auto c = parse_point(cfg.n, trim(p));
      if (c)
        cfg.points.push_back(*c);
      else
        diags.push_back("bad point literal: " + trim(p));
    }
  if (!reps_text.empty())
    for (const auto& r : split(reps_text, ',')) cfg.rep_exprs.push_back(trim(r));
  return finish_config(std::move(cfg), std::move(diags));
}

ConfigOutcome parse_config_json(const std::string& json_text) {
  using nlohmann::json;
  RunConfig cfg;
  std::vector<std::string> diags;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    return {std::nullopt, {std::string("bad JSON: ") + e.what()}};
  }
  try {
    if (j.contains("mode")) {
      std::string m = j["mode"];
      if (m == "factorize")
        cfg.mode = RunMode::Factorize;
      else if (m == "properties")
        cfg.mode = RunMode::Properties;
      else if (m == "smoke")
        cfg.mode = RunMode::Smoke;
      else
        diags.push_back("unknown mode: " + m);
    }
    if (j.contains("n")) cfg.n = j["n"].get<unsigned>();
    if (j.contains("level")) {
      auto r = parse_rational(j["level"].is_string()
                                  ? j["level"].get<std::string>()
                                  : std::to_string(j["level"].get<long>()));
      if (r)
        cfg.level = *r;
      else
        diags.push_back("bad rational level");
    }
    if (j.contains("points"))
      for (const auto& p : j["points"]) {
        std::string text = p.is_string() ? p.get<std::string>()
                                         : std::to_string(p.get<long>());
        cfg.point_exprs.push_back(text);
        auto c = parse_point(cfg.n, text);
        if (c)
          cfg.points.push_back(*c);
        else
          diags.push_back("bad point literal: " + text);
      }
    if (j.contains("reps"))
      for (const auto& r : j["reps"])
        cfg.rep_exprs.push_back(r.get<std::string>());
    if (j.contains("max_depth")) cfg.max_depth = j["max_depth"].get<int>();
    if (j.contains("fuel")) cfg.fuel_limit = j["fuel"].get<long>();
    if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
    if (j.contains("deterministic"))
      cfg.deterministic = j["deterministic"].get<bool>();
  } catch (const std::exception& e) {
    diags.push_back(std::string("bad config field: ") + e.what());
  }
  return finish_config(std::move(cfg), std::move(diags));
}

namespace {

nlohmann::json config_echo(const RunConfig& cfg) {
  nlohmann::json j;
  j["mode"] = cfg.mode == RunMode::Factorize
                  ? "factorize"
                  : (cfg.mode == RunMode::Properties ? "properties" : "smoke");
  j["n"] = cfg.n;
  j["level"] = rational_to_string(cfg.level);
  j["points"] = cfg.point_exprs.empty()
                    ? nlohmann::json::array()
                    : nlohmann::json(cfg.point_exprs);
  if (cfg.point_exprs.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& p : cfg.points) arr.push_back(p.to_string());
    j["points"] = arr;
  }
  j["reps"] = cfg.rep_exprs;
  j["max_depth"] = cfg.max_depth;
  j["deterministic"] = cfg.deterministic;
  return j;
}

nlohmann::json weight_json(const Weight& w) {
  auto arr = nlohmann::json::array();
  for (const auto& v : w.values) arr.push_back(v.to_string());
  return arr;
}

}  // namespace

RunOutcome run_check(const RunConfig& cfg) {
  using nlohmann::json;
  RunOutcome out;
  json report;
  report["config"] = config_echo(cfg);

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    if (cfg.deterministic) return 0L;
    return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count());
  };

  try {
    auto sites = SiteSet::create(cfg.n, cfg.points);
    std::vector<FinRep> reps;
    for (const auto& e : cfg.rep_exprs) reps.push_back(*parse_rep(cfg.n, e));

    if (cfg.mode == RunMode::Factorize) {
      CoinvReport r = factorization_report(sites, cfg.level, reps,
                                           cfg.max_depth, cfg.fuel_limit);
      report["dim_cc_trig"] = r.dim_cc_trig;
      report["dim_cb_trig"] = r.dim_cb_trig;
      auto comps = json::array();
      for (const auto& c : r.components) {
        json jc;
        jc["lambda"] = weight_json(c.lambda);
        jc["dim"] = c.dim;
        jc["multiplicity"] = c.multiplicity;
        comps.push_back(jc);
      }
      report["components"] = comps;
      report["verdict"] = r.verdict;
      report["fuel"] = {{"macro_steps", r.macro_steps},
                        {"ticks", r.fuel_ticks},
                        {"depth", r.depth}};
      std::ostringstream dg;
      dg << std::hex << std::setw(16) << std::setfill('0') << r.trace_digest;
      report["trace_digest"] = dg.str();
      out.exit_code = r.verdict ? kExitOk : kExitVerdictFalse;
    } else if (cfg.mode == RunMode::Smoke) {
      SmokeResult r = general_factorization_smoke(sites, cfg.level, reps,
                                                  cfg.max_depth, cfg.fuel_limit);
      report["dim_cc_trig"] = r.dim_cc_trig;
      report["diagonal_sum"] = r.diagonal_sum;
      report["off_diagonal_vanishes"] = r.off_diagonal_vanishes;
      report["diagonal_untouched_by_rho"] = r.diagonal_untouched_by_rho;
      report["tilde_injective"] = r.tilde_injective;
      auto blocks = json::array();
      for (const auto& b : r.blocks) {
        json jb;
        jb["lambda"] = weight_json(b.lambda);
        jb["mu"] = weight_json(b.mu);
        jb["dim_cc_orb"] = b.dim_cc_orb;
        jb["dim_after_rho"] = b.dim_after_rho;
        blocks.push_back(jb);
      }
      report["blocks"] = blocks;
      report["verdict"] = r.verdict;
      out.exit_code = r.verdict ? kExitOk : kExitVerdictFalse;
    } else {
      auto results = run_property_suites();
      bool ok = all_passed(results);
      auto suites = json::array();
      std::ostringstream table;
      table << std::left << std::setw(12) << "suite" << std::setw(56) << "check"
            << std::setw(10) << "asserts" << "result\n";
      for (const auto& r : results) {
        json js;
        js["suite"] = r.suite;
        js["name"] = r.name;
        js["pass"] = r.pass;
        js["checks"] = r.checks;
        if (!r.pass) js["first_violation"] = r.detail;
        suites.push_back(js);
        table << std::left << std::setw(12) << r.suite << std::setw(56)
              << r.name << std::setw(10) << r.checks
              << (r.pass ? "pass" : "FAIL: " + r.detail) << "\n";
      }
      report["suites"] = suites;
      report["verdict"] = ok;
      out.table = table.str();
      out.exit_code = ok ? kExitOk : kExitVerdictFalse;
    }
  } catch (const FuelExhausted& e) {
    report["error"] = std::string("fuel exhausted: ") + e.what();
    report["verdict"] = false;
    out.exit_code = kExitFuelExhausted;
  }

  report["timing_ms"] = elapsed_ms();
  out.report_json = report.dump(2) + "\n";
  return out;
}

}  // namespace factorlab
