// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <sys/wait.h>

#include "hardy/config.hpp"
#include "hardy/hardy_engine.hpp"
#include "hardy/invariance.hpp"
#include "hardy/sharpness.hpp"

using namespace hardy;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

HalfSpace half(Vec nu, double d) { return HalfSpace::normalized(std::move(nu), d); }

ConvexPolytope square_prism() {
  return ConvexPolytope({{Vec{1, 0, 0}, -1}, {Vec{-1, 0, 0}, -1}, {Vec{0, 1, 0}, -1}, {Vec{0, -1, 0}, -1}},
                        Vec{0, 0, 0});
}

GroupSpec synthetic_step2() {
  Step2Constants a(1, std::vector<std::vector<Rational>>(2, std::vector<Rational>(2, Rational(0))));
  a[0][0][0] = 1;
  a[0][1][0] = 1;
  a[0][0][1] = -1;
  return make_step2(2, 1, a, "step2");
}

// ---------------------------------------------------------------------------

struct SuiteCase {
  Statement statement;
  GroupSpec group;
  Domain domain;
  Box box;
  std::vector<double> betas;
  std::vector<double> ps{2.0};
  bool tilted = false;
};

constexpr std::size_t kFunctionsPerCase = 20;

Outcome inequality_suite() {
  const auto R1 = make_euclidean(1), R2 = make_euclidean(2), R3 = make_euclidean(3);
  const auto H = make_heisenberg(), E = make_engel(), S = synthetic_step2();
  const std::vector<double> any_beta{-1.0, -0.5, 0.25, 1.0};
  const std::vector<double> fixed{-0.5};
  const std::vector<double> all_p{1.5, 2.0, 3.0, 4.0};
  const Box heis_up{Vec{-1, -1, 0.5}, Vec{1, 1, 2.5}};
  const Box engel_up{Vec{-1, -1, -1, 0.5}, Vec{1, 1, 1, 2.5}};
  const Box quadrant{Vec{0.5, 0.5}, Vec{3, 3}};
  const Box prism{Vec{-1, -1, -1}, Vec{1, 1, 1}};
  const Box square{Vec{-1, -1}, Vec{1, 1}};
  const ConvexPolytope square_poly({{Vec{1, 0}, -1}, {Vec{-1, 0}, -1}, {Vec{0, 1}, -1}, {Vec{0, -1}, -1}}, Vec{0, 0});

  const std::vector<SuiteCase> cases{
      {Statement::thm2_1, R1, half(Vec{1}, 0), Box{Vec{0.2}, Vec{3}}, any_beta},
      {Statement::thm2_1, R2, half(Vec{1, 2}, 0), quadrant, any_beta, {2.0}, true},
      {Statement::thm2_1, R3, half(Vec{0, 0, 1}, 0), heis_up, any_beta},
      {Statement::thm2_1, H, half(Vec{0, 0.6, 0.8}, 0.5), Box{Vec{-1, -1, 1.5}, Vec{1, 1, 3.5}}, any_beta, {2.0}, true},
      {Statement::thm2_1, E, half(Vec{0, 0, 0, 1}, 0), engel_up, any_beta},
      {Statement::cor2_2, S, half(Vec{0, 0, 1}, 0), heis_up, {-1.0, -0.5, 0.5}, {2.0}, true},
      {Statement::cor2_3, R2, half(Vec{1, 1}, 0), quadrant, fixed},
      {Statement::cor2_3, H, half(Vec{0.6, -0.8, 0}, 0), Box{Vec{0.5, -2.5, -1}, Vec{2.5, -0.5, 1}}, fixed, {2.0}, true},
      {Statement::cor2_4, R1, half(Vec{1}, 0), Box{Vec{0.2}, Vec{3}}, fixed},
      {Statement::cor2_4, H, half(Vec{1, 0, 0}, 0), Box{Vec{0.3, -1, -1}, Vec{2.3, 1, 1}}, fixed, {2.0}, true},
      {Statement::cor2_5, H, half(Vec{0, 0, 1}, 0), heis_up, fixed, {2.0}, true},
      {Statement::corE, E, half(Vec{0, 0, 0, 1}, 0), engel_up, any_beta},
      {Statement::corE, E, half(Vec{0.6, 0, 0, 0.8}, 0), Box{Vec{0.3, -1, -1, 0.3}, Vec{2.3, 1, 1, 2.3}}, {-0.5, 0.5}},
      {Statement::thm2_6, R2, half(Vec{1, 2}, 0), quadrant, {-0.5, 0.5}, all_p, true},
      {Statement::thm2_6, H, half(Vec{0, 0, 1}, 0), heis_up, {-0.5, 0.5}, all_p, true},
      {Statement::thm3_1, R2, square_poly, square, {-1.0, -0.5, -0.25}},
      {Statement::thm3_1, H, square_prism(), prism, {-1.0, -0.5, -0.25}, {2.0}, true},
      {Statement::thm3_2, R2, square_poly, square, {-0.5, -0.25}, all_p},
      {Statement::thm3_2, H, square_prism(), prism, {-0.5, -0.25}, all_p, true},
  };

  std::size_t reports = 0, violated = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_at;
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const HardyEvaluator ev(c.group, c.domain, RuleSpec::default_for(c.group.n()));
    const auto fam = random_family(seed++, kFunctionsPerCase, c.box, c.tilted);
    const bool lp = statement_info(c.statement).uses_p;
    for (const auto& u : fam)
      for (double p : c.ps)
        for (LhsKind k : {LhsKind::sum, LhsKind::full_gradient}) {
          if (k == LhsKind::full_gradient && (!lp || p < 2.0)) continue;
          for (const auto& r : evaluate_statement(c.statement, ev, u, c.betas, p, k)) {
            ++reports;
            if (!r.holds) ++violated;
            // margin relative to the left side, for the report line
            const double margin = r.slack / std::max(r.lhs, 1e-300);
            if (margin < worst) {
              worst = margin;
              worst_at = r.statement + "/" + r.group + fmt(" beta=%g p=%g", r.beta, r.p);
            }
          }
        }
  }
  return {violated == 0 && reports > 0,
          fmt("%zu reports over %zu cases, %zu violated; tightest slack/lhs %.3g at %s", reports, cases.size(),
              violated, worst, worst_at.c_str())};
}

Outcome factorization() {
  const auto H = make_heisenberg();
  const auto fam = random_family(200, 3, Box{Vec{-1, -1, 0.5}, Vec{1, 1, 2.5}}, true);
  double worst32 = 0.0;
  bool monotone = true;
  for (const auto& u : fam) {
    const HalfSpace h(Vec{0, 0, 1}, 0.0);
    const double r16 = check_factorization_identity(H, h, u, -0.5, RuleSpec::gauss(16)).residual;
    const double r32 = check_factorization_identity(H, h, u, -0.5, RuleSpec::gauss(32)).residual;
    const double r48 = check_factorization_identity(H, h, u, -0.5, RuleSpec::gauss(48)).residual;
    monotone = monotone && r16 > r32 && r32 > r48;
    worst32 = std::max(worst32, r32);
  }
  return {monotone && worst32 < 1e-6, fmt("max residual at 32 nodes %.3g, monotone over 16/32/48: %s", worst32,
                                          monotone ? "yes" : "no")};
}

Outcome beta_sweep() {
  const auto r = sweep_beta([](double b) { return C1(b); }, -2.0, 1.0, 1e-3);
  const bool ok = std::abs(r.argmax + 0.5) <= 1e-3 && std::abs(r.max - 0.25) <= 1e-6;
  return {ok, fmt("argmax %.6f, max %.12f", r.argmax, r.max)};
}

Outcome engel_algebra() {
  const auto E = make_engel();
  std::mt19937_64 rng(300);
  std::uniform_int_distribution<int> pick(-12, 12);
  auto q = [&] { return Rational(pick(rng), 4); };
  std::size_t checked = 0, bad = 0;
  for (int k = 0; k < 10; ++k) {
    std::vector<Rational> nu(4);
    for (auto& v : nu) v = q();
    for (int t = 0; t < 100; ++t) {
      std::vector<Rational> x(4);
      for (auto& v : x) v = q();
      const Rational d1 = field_normal_derivative_exact(E, nu, 0, x);
      const Rational d2 = field_normal_derivative_exact(E, nu, 1, x);
      const Rational want = x[1] * nu[3] / Rational(3);
      ++checked;
      if (d1.numerator() != want.numerator() || d1.denominator() != want.denominator() || d2.numerator() != 0) ++bad;
    }
  }
  return {bad == 0, fmt("%zu exact rational checks, %zu mismatches", checked, bad)};
}

Outcome heisenberg_algebra() {
  const auto H = make_heisenberg();
  const HalfSpace e3(Vec{0, 0, 1}, 0.0);
  const Vec nu{0, 0, 1};
  std::mt19937_64 rng(400);
  std::uniform_int_distribution<int> pick(-12, 12), up(1, 16);
  std::size_t bad = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    // quarter-integer points keep every product exact in double
    const Vec x{pick(rng) / 4.0, pick(rng) / 4.0, up(rng) / 4.0};
    const double W = angle_W(H, e3, x);
    const double d = dist_halfspace(e3, x);
    const double want = 4.0 * (x[0] * x[0] + x[1] * x[1]) / (x[2] * x[2]);
    const bool ok = normal_pairing(H, 0, nu, x) == 2 * x[1] && normal_pairing(H, 1, nu, x) == -2 * x[0] &&
                    field_normal_derivative(H, e3, 0, x) == 0.0 && field_normal_derivative(H, e3, 1, x) == 0.0 &&
                    std::abs(W * W / (d * d) - want) <= 4 * std::numeric_limits<double>::epsilon() * want;
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("%d points, %zu mismatches", trials, bad)};
}

Outcome p2_reduction() {
  const auto H = make_heisenberg();
  const auto R2 = make_euclidean(2);
  double worst = 0.0;
  int configs = 0;
  auto rel = [](double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); };
  auto compare = [&](const InequalityReport& a, const InequalityReport& c) {
    const double scale = std::max(std::abs(a.lhs), std::abs(a.rhs_total));
    worst = std::max({worst, rel(a.lhs, c.lhs, scale), rel(a.rhs_total, c.rhs_total, scale)});
    ++configs;
  };
  const HalfSpace e3(Vec{0, 0, 1}, 0.0);
  const auto fam = random_family(500, 4, Box{Vec{-1, -1, 0.5}, Vec{1, 1, 2.5}}, true);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const double b = -1.0 + 0.6 * static_cast<double>(k);
    compare(eval_hardy_l2_halfspace(H, e3, fam[k], b, RuleSpec::gauss(24)),
            eval_hardy_lp_halfspace(H, e3, fam[k], b, 2.0, RuleSpec::gauss(24)));
  }
  const HalfSpace diag = half(Vec{1, 2}, 0);
  for (const auto& u : random_family(501, 2, Box{Vec{0.5, 0.5}, Vec{3, 3}}, true))
    compare(eval_hardy_l2_halfspace(R2, diag, u, 0.5, RuleSpec::gauss(32)),
            eval_hardy_lp_halfspace(R2, diag, u, 0.5, 2.0, RuleSpec::gauss(32)));
  const auto prism = square_prism();
  for (const auto& u : random_family(502, 4, Box{Vec{-1, -1, -1}, Vec{1, 1, 1}}, true))
    compare(eval_hardy_l2_convex(H, prism, u, -0.5, RuleSpec::gauss(24)),
            eval_hardy_lp_convex(H, prism, u, -0.5, 2.0, RuleSpec::gauss(24)));
  return {configs >= 10 && worst < 1e-10, fmt("%d configs, max relative difference %.3g", configs, worst)};
}

Outcome sign_identity() {
  std::mt19937_64 rng(600);
  std::uniform_real_distribution<double> ab(0.0, 5.0), pp(1.0001, 6.0);
  std::size_t negative = 0;
  for (int t = 0; t < 10000; ++t)
    if (check_lp_sign_identity(ab(rng), ab(rng), pp(rng)) < 0.0) ++negative;
  const auto H = make_heisenberg();
  const Box box{Vec{-1, -1, -1}, Vec{1, 1, 1}};
  std::string audit;
  bool ok = negative == 0;
  for (double p : {2.0, 3.0}) {
    const auto a = audit_interface_sign(H, square_prism(), 0, 2, -0.5, p, 1000, box);
    ok = ok && a.samples == 1000 && a.nonnegative() && a.identity_violations == 0;
    audit += fmt("; p=%g: %zu samples, min integrand %.3g", p, a.samples, a.min_integrand);
  }
  return {ok, fmt("%zu of 10000 triples negative", negative) + audit};
}

Outcome divergence_invariance() {
  const std::vector<std::pair<GroupSpec, Box>> groups{
      {make_euclidean(3), Box{Vec{-1, -1, -1}, Vec{1, 1, 1}}},
      {make_heisenberg(), Box{Vec{-1, -1, -1}, Vec{1, 1, 1}}},
      {make_engel(), Box{Vec{-1, -1, -1, -1}, Vec{1, 1, 1, 1}}},
  };
  double div = 0.0, inv = 0.0;
  std::uint64_t seed = 700;
  for (const auto& [g, box] : groups) {
    for (int t = 0; t < 10; ++t)
      div = std::max(div, check_divergence(g, random_family(seed++, g.generators(), box, true), box,
                                           RuleSpec::gauss(g.n() <= 3 ? 48 : 32)));
    std::mt19937_64 rng(seed++);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    for (int t = 0; t < 100; ++t) {
      Vec x(g.n()), y(g.n()), c(g.n());
      for (std::size_t k = 0; k < g.n(); ++k) x[k] = U(rng), y[k] = U(rng);
      const Vec xy = group_law(g, x, y);
      for (std::size_t k = 0; k < g.n(); ++k) c[k] = xy[k] + 0.6 * U(rng);
      const auto u = TestFunction::bump(c, Vec(g.n(), 1.0));
      for (std::size_t i = 0; i < g.generators(); ++i) inv = std::max(inv, check_left_invariance(g, i, u, x, y));
    }
  }
  return {div < 1e-6 && inv < 1e-8, fmt("max divergence residual %.3g, max invariance residual %.3g", div, inv)};
}

Outcome sharpness_bracket() {
  const auto R1 = make_euclidean(1);
  const HalfSpace line(Vec{1}, 0.0);
  double prev = std::numeric_limits<double>::infinity(), lowest = prev;
  bool monotone = true, above = true;
  std::string seq;
  // alpha decreasing toward 1/2 drives the quotient down toward 1/4
  for (double alpha : {1.0, 0.75, 0.6, 0.51}) {
    const auto u = TestFunction::boundary_power_probe(line, alpha, Box{Vec{0}, Vec{1}});
    const auto q = rayleigh_quotient(R1, line, u, RuleSpec::gauss(128));
    monotone = monotone && q.value < prev;
    above = above && q.value >= 0.25 - q.error;
    lowest = std::min(lowest, q.value);
    prev = q.value;
    seq += fmt("%s%.6f", seq.empty() ? "" : ", ", q.value);
  }
  return {monotone && above && lowest <= 0.30,
          "quotients at alpha 1, 0.75, 0.6, 0.51: " + seq + (monotone ? "" : " (not monotone)")};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("hardy_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cfg = (fs::path(HARDY_CONFIG_DIR) / "acceptance.json").string();
  std::string out[2];
  int codes[2];
  for (int k = 0; k < 2; ++k) {
    const auto path = dir / ("run" + std::to_string(k) + ".csv");
    const std::string cmd =
        std::string("\"") + HARDY_CLI_PATH + "\" verify \"" + cfg + "\" >\"" + path.string() + "\"";
    const int status = std::system(cmd.c_str());
    codes[k] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    out[k] = slurp(path);
  }
  fs::remove_all(dir);
  const auto lines = std::count(out[0].begin(), out[0].end(), '\n');
  const bool ok = codes[0] == 0 && codes[1] == 0 && out[0] == out[1] && lines > 1;
  return {ok, fmt("exit codes %d/%d, %zu bytes, %ld lines, identical: %s", codes[0], codes[1], out[0].size(),
                  static_cast<long>(lines), out[0] == out[1] ? "yes" : "no")};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion(1, "inequality suite", inequality_suite);
  criterion(2, "factorization identity", factorization);
  criterion(3, "beta optimization", beta_sweep);
  criterion(4, "engel algebra", engel_algebra);
  criterion(5, "heisenberg algebra", heisenberg_algebra);
  criterion(6, "p=2 reduction", p2_reduction);
  criterion(7, "sign identity", sign_identity);
  criterion(8, "divergence and invariance", divergence_invariance);
  criterion(9, "sharpness bracket", sharpness_bracket);
  criterion(10, "determinism", determinism);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %d of 10 criteria failed (%.1fs)\n", failures ? "FAIL" : "PASS", failures, secs);
  return failures ? 1 : 0;
}
