#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardy/config.hpp"
#include "hardy/examples.hpp"
#include "hardy/hardy_engine.hpp"
#include "hardy/report.hpp"
#include "hardy/sharpness.hpp"

namespace hardy {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitConfig = 2, kExitViolated = 3 };

inline void write_error(std::ostream& err, std::string_view kind, std::string_view message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

/// Evaluates every (u, p, lhs kind, beta) row of the validated runs, in config order.
inline std::vector<ReportRow> evaluate_runs(const std::vector<RunSpec>& runs) {
  std::vector<ReportRow> rows;
  for (std::size_t ri = 0; ri < runs.size(); ++ri) {
    const auto& run = runs[ri];
    const HardyEvaluator ev(run.group, run.domain, run.rule);
    for (std::size_t ui = 0; ui < run.functions.size(); ++ui)
      for (double p : run.ps)
        for (LhsKind k : run.lhs_kinds) {
          if (run.lhs_both && k == LhsKind::full_gradient && p < 2.0) continue;
          for (auto& r : evaluate_statement(run.statement, ev, run.functions[ui], run.betas, p, k))
            rows.push_back({ri, ui, std::move(r)});
        }
  }
  return rows;
}

/// verify <config>: writes the CSV to `csv` and, when given, the JSON mirror.
inline int cmd_verify(const std::filesystem::path& config, std::ostream& csv, std::ostream* json_out,
                      std::ostream& err) {
  std::vector<RunSpec> runs;
  try {
    runs = load_runs_file(config);
  } catch (const ConfigError& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  }
  std::vector<ReportRow> rows;
  try {
    rows = evaluate_runs(runs);
  } catch (const PreconditionError& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  }
  write_csv(csv, rows);
  if (json_out) write_json(*json_out, rows);
  for (const auto& r : rows)
    if (!r.report.holds) return kExitViolated;
  return kExitOk;
}

struct BetaRange {
  double lo, hi, step;
};

/// "lo:hi:step".
inline BetaRange parse_beta_range(const std::string& s) {
  BetaRange r{};
  std::stringstream ss(s);
  std::string a, b, c, extra;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':') || std::getline(ss, extra))
    throw ConfigError("beta range must look like lo:hi:step");
  try {
    std::size_t ia = 0, ib = 0, ic = 0;
    r.lo = std::stod(a, &ia);
    r.hi = std::stod(b, &ib);
    r.step = std::stod(c, &ic);
    if (ia != a.size() || ib != b.size() || ic != c.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("beta range must look like lo:hi:step");
  }
  if (!(r.lo < r.hi) || !(r.step > 0.0)) throw ConfigError("beta range needs lo < hi and step > 0");
  return r;
}

struct SweepOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> statement;
  std::string beta_range = "-2:1:0.001";
  std::optional<double> p;
  bool refine = false;
};

/// sweep: the statement's constant as a function of beta (C1, or C2 for Lp
/// statements). When the config lists test functions, the objective is the
/// right-hand side total for the first one instead.
inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    nlohmann::json cfg = nlohmann::json::object();
    std::filesystem::path base;
    if (opt.config) {
      cfg = detail::read_json_file(*opt.config);
      base = opt.config->parent_path();
      if (cfg.contains("runs")) {
        if (!cfg.at("runs").is_array() || cfg.at("runs").empty()) throw ConfigError("'runs' must be a non-empty array");
        cfg = cfg.at("runs").at(0);
      }
    }
    if (opt.statement) cfg["statement"] = *opt.statement;
    if (!cfg.contains("statement")) throw ConfigError("sweep needs --statement or a config with 'statement'");
    Statement st;
    try {
      st = parse_statement(cfg.at("statement").get<std::string>());
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
    const auto& info = statement_info(st);
    double p = 2.0;
    if (opt.p) p = *opt.p;
    else if (cfg.contains("p")) p = detail::number_list(cfg.at("p"), "p").at(0);
    if (info.uses_p && !(p > 1.0)) throw ConfigError("p must exceed 1");
    const BetaRange br = parse_beta_range(opt.beta_range);

    std::function<double(double)> objective;
    const bool with_u = cfg.contains("u") && cfg.at("u").is_array() && !cfg.at("u").empty();
    std::optional<HardyEvaluator> ev;
    std::optional<L2Integrals> l2;
    std::optional<LpIntegrals> lp;
    Statement family = st;
    if (!info.uses_beta) family = Statement::thm2_1;  // fixed-constant corollaries come from the beta family
    if (with_u) {
      cfg.erase("beta");
      cfg["statement"] = std::string(statement_info(family).key);
      if (!info.uses_p) cfg.erase("p");
      else cfg["p"] = p;
      RunSpec run = run_from_json(cfg, base);
      if (run.functions.empty()) throw ConfigError("sweep: no test functions");
      for (double b : {br.lo, br.hi})
        try {
          check_hypotheses(family, run.group, run.domain, b, info.uses_p ? p : 2.0, LhsKind::sum);
        } catch (const PreconditionError& e) {
          throw ConfigError(std::string("beta range: ") + e.what());
        }
      ev.emplace(run.group, run.domain, run.rule);
      if (info.uses_p) lp = ev->lp(run.functions.front(), p);
      else l2 = ev->l2(run.functions.front());
      objective = [&, family, p](double b) {
        AssembleArgs a{family, ev->group().name(), b, p, LhsKind::sum, 0.0, ev->rule().describe()};
        if (family == Statement::cor2_2)
          a.k_constant = step2_K_constant(ev->group(), std::get<HalfSpace>(ev->domain()).nu, b);
        return assemble(a, l2 ? &*l2 : nullptr, lp ? &*lp : nullptr).rhs_total;
      };
    } else if (info.uses_p) {
      objective = [p](double b) { return C2(b, p); };
    } else {
      objective = [](double b) { return C1(b); };
    }
    const SweepResult r = sweep_beta(objective, br.lo, br.hi, br.step, opt.refine);
    out << "beta,objective\n";
    for (std::size_t k = 0; k < r.grid.size(); ++k)
      out << format_number(r.grid[k]) << ',' << format_number(r.values[k]) << '\n';
    nlohmann::json summary{{"statement", std::string(info.key)}, {"argmax", r.argmax}, {"max", r.max}};
    if (r.refined_argmax) {
      summary["refined_argmax"] = *r.refined_argmax;
      summary["refined_max"] = *r.refined_max;
    }
    err << summary.dump() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  } catch (const PreconditionError& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  }
}

/// probe <config> [--family file]: Rayleigh quotients of the family members.
inline int cmd_probe(const std::filesystem::path& config, const std::optional<std::filesystem::path>& family_file,
                     std::ostream& out, std::ostream& err) {
  try {
    nlohmann::json cfg = detail::read_json_file(config);
    const auto base = config.parent_path();
    if (cfg.contains("runs")) cfg = cfg.at("runs").at(0);
    if (family_file) {
      nlohmann::json fam = detail::read_json_file(*family_file);
      cfg["u"] = fam.is_array() ? fam : detail::field(fam, "u", "family");
    }
    const GroupSpec g = resolve_group(detail::field(cfg, "group", "probe"), base);
    const Domain domain = domain_from_json(detail::field(cfg, "domain", "probe"), base);
    const auto* h = std::get_if<HalfSpace>(&domain);
    if (!h) throw ConfigError("probe needs a half-space domain");
    std::vector<TestFunction> family;
    for (const auto& f : detail::field(cfg, "u", "probe")) functions_from_json(f, &domain, family);
    if (family.empty()) throw ConfigError("probe: empty family");
    const RuleSpec rule = cfg.contains("rule") ? rule_from_json(cfg.at("rule")) : RuleSpec::default_for(g.n());
    const HardyEvaluator check(g, domain, rule);
    for (const auto& f : family) check.check_support(f);
    const ProbeResult r = probe_constant(g, *h, family, rule);
    out << "index,kind,quotient,err_est\n";
    for (std::size_t k = 0; k < family.size(); ++k)
      out << k << ',' << family[k].kind_name() << ',' << format_number(r.quotients[k].value) << ','
          << format_number(r.quotients[k].error) << '\n';
    err << nlohmann::json{{"min", r.min}, {"argmin", r.argmin}, {"err_est", r.min_error}}.dump() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  } catch (const PreconditionError& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    write_error(err, "config", e.what());
    return kExitConfig;
  }
}

inline void cmd_list_statements(std::ostream& out) {
  for (const auto& s : statement_table()) {
    out << s.key << "\n  " << s.summary << "\n  hypotheses: " << s.hypotheses
        << "\n  domain: " << (s.domain == DomainKind::halfspace ? "halfspace" : "polytope")
        << "; beta: " << (s.uses_beta ? (s.domain == DomainKind::polytope ? "beta < 0" : "any real") : "fixed -1/2")
        << "; p: " << (s.uses_p ? "1 < p < inf" : "2") << '\n';
  }
}

inline int cmd_emit_example_configs(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    write_error(err, "io", "cannot create '" + dir.string() + "': " + ec.message());
    return kExitInternal;
  }
  for (const auto& [name, text] : example_configs()) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    if (!f) {
      write_error(err, "io", "cannot write '" + (dir / name).string() + "'");
      return kExitInternal;
    }
    out << (dir / name).string() << '\n';
  }
  return kExitOk;
}

}  // namespace hardy
