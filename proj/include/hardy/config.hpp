#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardy/geometry.hpp"
#include "hardy/group.hpp"
#include "hardy/hardy_engine.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/testfns.hpp"

namespace hardy {

using json = nlohmann::json;

/// Invalid or unreadable configuration; reported with exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline Vec vec_of(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  Vec v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(what + " must be an array of numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::vector<double> number_list(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError(what + " must be a number or an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(what + " must be a number or an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline Rational rational_of(const json& m, const std::string& where) {
  if (!m.contains("num")) throw ConfigError(where + ": monomial needs 'num'");
  const auto num = m.at("num").get<std::int64_t>();
  const auto den = m.value("den", std::int64_t{1});
  if (den == 0) throw ConfigError(where + ": zero denominator");
  return Rational(num, den);
}

inline Polynomial polynomial_of(const json& monomials, std::size_t n, const std::string& where) {
  if (!monomials.is_array()) throw ConfigError(where + ": 'monomials' must be an array");
  std::vector<Monomial> terms;
  for (const auto& m : monomials) {
    const auto& e = field(m, "exps", where);
    if (!e.is_array() || e.size() != n)
      throw ConfigError(where + ": 'exps' must have " + std::to_string(n) + " entries");
    Exponents ex;
    for (const auto& v : e) ex.push_back(v.get<int>());
    terms.push_back({ex, rational_of(m, where)});
  }
  return Polynomial::from_terms(n, std::move(terms));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

/// Group-definition JSON: {"strata": [...], "coeffs": [{"k","l","m","monomials"}]}.
inline GroupSpec group_from_json(const json& j, std::string name = "custom") {
  try {
    const auto& strata_j = detail::field(j, "strata", "group");
    std::vector<int> strata;
    for (const auto& s : strata_j) strata.push_back(s.get<int>());
    std::size_t n = 0;
    for (int s : strata) n += static_cast<std::size_t>(std::max(s, 0));
    std::map<CoeffKey, Polynomial> coeffs;
    for (const auto& c : j.value("coeffs", json::array())) {
      const CoeffKey key{c.at("k").get<int>(), c.at("l").get<int>(), c.at("m").get<int>()};
      const std::string where = "group coefficient (" + std::to_string(key.k) + "," + std::to_string(key.l) + "," +
                                std::to_string(key.m) + ")";
      Polynomial p = detail::polynomial_of(detail::field(c, "monomials", where), n, where);
      auto [it, fresh] = coeffs.emplace(key, p);
      if (!fresh) it->second = it->second + p;
    }
    return GroupSpec(std::move(strata), coeffs, std::move(name));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("group: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

inline json group_to_json(const GroupSpec& g) {
  json j;
  j["strata"] = g.strata_dims();
  j["coeffs"] = json::array();
  for (const auto& [key, poly] : g.coefficients()) {
    json c{{"k", key.k}, {"l", key.l}, {"m", key.m}, {"monomials", json::array()}};
    for (const auto& mono : poly.terms()) {
      std::vector<int> e(mono.exps.begin(), mono.exps.end());
      c["monomials"].push_back({{"exps", e}, {"num", mono.coeff.numerator()}, {"den", mono.coeff.denominator()}});
    }
    j["coeffs"].push_back(c);
  }
  return j;
}

/// Resolves "euclidean:n", "heisenberg", "engel", "step2:<file>", or an inline definition.
inline GroupSpec resolve_group(const json& ref, const std::filesystem::path& base_dir = {}) {
  if (ref.is_object()) return group_from_json(ref);
  if (!ref.is_string()) throw ConfigError("group must be a name or an inline definition");
  const auto name = ref.get<std::string>();
  try {
    if (name == "heisenberg") return make_heisenberg();
    if (name == "engel") return make_engel();
    if (name.rfind("euclidean:", 0) == 0) {
      const std::string dim = name.substr(10);
      std::size_t used = 0;
      int n = 0;
      try {
        n = std::stoi(dim, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != dim.size()) throw ConfigError("bad euclidean dimension in '" + name + "'");
      return make_euclidean(n);
    }
    if (name.rfind("step2:", 0) == 0) {
      const std::filesystem::path file = base_dir / name.substr(6);
      GroupSpec g = group_from_json(detail::read_json_file(file), name);
      if (g.step() != 2) throw ConfigError("'" + name + "' does not define a step-2 group");
      return g;
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown group '" + name + "'");
}

// ---------------------------------------------------------------------------
// Domains, functions, rules
// ---------------------------------------------------------------------------

/// {"halfspace": {"nu": [...], "d": v}} or {"polytope": {"facets": [...], "witness": [...]}}.
/// Normals are rescaled to unit length on load. A polytope may also be given
/// as a path to a polytope file.
inline Domain domain_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  try {
    if (j.contains("halfspace")) {
      const auto& h = j.at("halfspace");
      return HalfSpace::normalized(detail::vec_of(detail::field(h, "nu", "halfspace"), "halfspace.nu"),
                                   h.value("d", 0.0));
    }
    if (j.contains("polytope")) {
      json p = j.at("polytope");
      if (p.is_string()) p = detail::read_json_file(base_dir / p.get<std::string>());
      std::vector<Facet> facets;
      for (const auto& f : detail::field(p, "facets", "polytope")) {
        Vec nu = detail::vec_of(detail::field(f, "nu", "facet"), "facet.nu");
        const double len = norm(nu);
        if (!(len > 0.0)) throw ConfigError("polytope: zero facet normal");
        for (double& v : nu) v /= len;
        facets.push_back({nu, f.value("d", 0.0) / len});
      }
      return ConvexPolytope(std::move(facets), detail::vec_of(detail::field(p, "witness", "polytope"), "witness"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("domain must contain 'halfspace' or 'polytope'");
}

inline Box box_from_json(const json& j, const std::string& what) {
  Box b{detail::vec_of(detail::field(j, "lo", what), what + ".lo"), detail::vec_of(detail::field(j, "hi", what), what + ".hi")};
  try {
    b.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(what + ": " + e.what());
  }
  return b;
}

/// Appends the functions described by one entry of the "u" list.
///   {"kind":"bump","center":[...],"widths":[...]}
///   {"kind":"poly_bump","center","widths","monomials":[...]}   (polynomial in local coordinates)
///   {"kind":"probe","alpha":a,"cutoff":{"lo","hi"}}            (needs a half-space domain)
///   {"kind":"random","seed":s,"count":n,"box":{"lo","hi"},"tilted":false}
inline void functions_from_json(const json& j, const Domain* domain, std::vector<TestFunction>& out) {
  try {
    const std::string kind = detail::field(j, "kind", "u").get<std::string>();
    if (kind == "bump") {
      out.push_back(TestFunction::bump(detail::vec_of(detail::field(j, "center", "u"), "center"),
                                       detail::vec_of(detail::field(j, "widths", "u"), "widths")));
    } else if (kind == "poly_bump") {
      Vec c = detail::vec_of(detail::field(j, "center", "u"), "center");
      Vec w = detail::vec_of(detail::field(j, "widths", "u"), "widths");
      Polynomial q = detail::polynomial_of(detail::field(j, "monomials", "u"), c.size(), "poly_bump");
      out.push_back(TestFunction::poly_bump(c, w, q));
    } else if (kind == "probe") {
      const HalfSpace* h = domain ? std::get_if<HalfSpace>(domain) : nullptr;
      if (!h) throw ConfigError("probe functions need a half-space domain");
      out.push_back(TestFunction::boundary_power_probe(*h, detail::field(j, "alpha", "probe").get<double>(),
                                                       box_from_json(detail::field(j, "cutoff", "probe"), "cutoff")));
    } else if (kind == "random") {
      const auto seed = detail::field(j, "seed", "random").get<std::uint64_t>();
      const auto count = detail::field(j, "count", "random").get<std::size_t>();
      const Box box = box_from_json(detail::field(j, "box", "random"), "random.box");
      for (auto& f : random_family(seed, count, box, j.value("tilted", false))) out.push_back(std::move(f));
    } else {
      throw ConfigError("unknown test-function kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("u: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

/// {"kind":"gauss","nodes":32} | {"kind":"riemann","nodes":n} | {"kind":"montecarlo","samples":s,"seed":k}.
inline RuleSpec rule_from_json(const json& j) {
  try {
    const std::string kind = detail::field(j, "kind", "rule").get<std::string>();
    if (kind == "gauss" || kind == "riemann") {
      const auto nodes = j.value("nodes", std::int64_t{32});
      if (nodes <= 0) throw ConfigError("rule: nodes must be positive");
      return kind == "gauss" ? RuleSpec::gauss(static_cast<std::size_t>(nodes))
                             : RuleSpec::riemann(static_cast<std::size_t>(nodes));
    }
    if (kind == "montecarlo") {
      const auto samples = j.value("samples", std::int64_t{2000000});
      if (samples <= 0) throw ConfigError("rule: samples must be positive");
      return RuleSpec::montecarlo(static_cast<std::size_t>(samples), j.value("seed", std::uint64_t{7}));
    }
    throw ConfigError("unknown rule kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("rule: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunSpec {
  Statement statement = Statement::thm2_1;
  GroupSpec group = make_euclidean(1);
  Domain domain = HalfSpace(Vec{1.0}, 0.0);
  std::vector<TestFunction> functions;
  std::vector<double> betas;
  std::vector<double> ps;
  std::vector<LhsKind> lhs_kinds;
  bool lhs_both = false;  // full-gradient rows are skipped where p < 2
  RuleSpec rule;
};

inline std::vector<LhsKind> lhs_kinds_of(const json& j, bool lp) {
  const std::string v = j.value("lhs", std::string("sum"));
  if (v == "sum") return {LhsKind::sum};
  if (v == "full") return {LhsKind::full_gradient};
  if (v == "both") {
    if (!lp) throw ConfigError("'lhs' = both applies to Lp statements only");
    return {LhsKind::sum, LhsKind::full_gradient};
  }
  throw ConfigError("'lhs' must be sum, full or both");
}

/// Parses and validates one run. Hypotheses are checked for every (beta, p, lhs)
/// combination before anything is evaluated.
inline RunSpec run_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("run must be a JSON object");
  RunSpec r;
  try {
    r.statement = parse_statement(detail::field(j, "statement", "run").get<std::string>());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("statement: ") + e.what());
  }
  const auto& info = statement_info(r.statement);
  r.group = resolve_group(detail::field(j, "group", "run"), base_dir);
  if (j.contains("domain")) {
    r.domain = domain_from_json(j.at("domain"), base_dir);
  } else if (r.statement == Statement::cor2_5) {
    r.domain = HalfSpace(Vec{0.0, 0.0, 1.0}, 0.0);
  } else {
    throw ConfigError("run: missing field 'domain'");
  }
  if (j.contains("u")) {
    const auto& u = j.at("u");
    if (!u.is_array()) throw ConfigError("'u' must be an array");
    for (const auto& f : u) functions_from_json(f, &r.domain, r.functions);
  }
  r.betas = j.contains("beta") ? detail::number_list(j.at("beta"), "beta") : std::vector<double>{-0.5};
  if (info.uses_p) {
    if (!j.contains("p")) throw ConfigError(std::string(info.key) + " needs 'p'");
    r.ps = detail::number_list(j.at("p"), "p");
  } else {
    r.ps = j.contains("p") ? detail::number_list(j.at("p"), "p") : std::vector<double>{2.0};
  }
  // "both" keeps only the legal kinds for each p (full gradient needs p >= 2)
  r.lhs_kinds = lhs_kinds_of(j, info.uses_p);
  r.lhs_both = r.lhs_kinds.size() == 2;
  r.rule = j.contains("rule") ? rule_from_json(j.at("rule")) : RuleSpec::default_for(r.group.n());
  for (const auto& f : r.functions)
    if (f.dim() != r.group.n())
      throw ConfigError("test function dimension " + std::to_string(f.dim()) + " does not match the group (" +
                        std::to_string(r.group.n()) + ")");
  try {
    for (double b : r.betas)
      for (double p : r.ps)
        for (LhsKind k : r.lhs_kinds) {
          if (r.lhs_both && k == LhsKind::full_gradient && p < 2.0) continue;
          check_hypotheses(r.statement, r.group, r.domain, b, p, k);
        }
    const HardyEvaluator probe(r.group, r.domain, r.rule);
    for (const auto& f : r.functions) probe.check_support(f);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return r;
}

/// A config is one run object or {"runs": [...]}.
inline std::vector<RunSpec> load_runs(const json& j, const std::filesystem::path& base_dir = {}) {
  std::vector<RunSpec> runs;
  if (j.is_object() && j.contains("runs")) {
    if (!j.at("runs").is_array()) throw ConfigError("'runs' must be an array");
    for (const auto& r : j.at("runs")) runs.push_back(run_from_json(r, base_dir));
  } else {
    runs.push_back(run_from_json(j, base_dir));
  }
  return runs;
}

inline std::vector<RunSpec> load_runs_file(const std::filesystem::path& path) {
  return load_runs(detail::read_json_file(path), path.parent_path());
}

}  // namespace hardy
