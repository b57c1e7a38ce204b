#include <gtest/gtest.h>

#include <cstdlib>

#include "hardy/quadrature.hpp"
#include "hardy/testfns.hpp"
#include "test_support.hpp"

using namespace hardy;

TEST(GaussLegendre, ExactForHighDegreeMonomials) {
  for (std::size_t n : {1u, 2u, 5u, 8u, 32u, 128u}) {
    const auto r = gauss_legendre(n);
    for (std::size_t deg = 0; deg <= 2 * n - 1 && deg <= 40; ++deg) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(deg));
      const double exact = deg % 2 ? 0.0 : 2.0 / static_cast<double>(deg + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(GaussJacobi, MomentsOfTheWeight) {
  // int_{-1}^{1} (1+x)^b x^k dx against direct Gauss-Legendre on the substituted form
  for (double b : {-0.49, 0.0, 0.5, 2.0}) {
    const auto r = gauss_jacobi_lower(12, b);
    double w = 0.0;
    for (double v : r.weights) w += v;
    EXPECT_NEAR(w, std::pow(2.0, b + 1) / (b + 1), 1e-12);
    // int (1+x)^b (1+x) dx = 2^{b+2}/(b+2)
    double m1 = 0.0;
    for (std::size_t i = 0; i < 12; ++i) m1 += r.weights[i] * (1 + r.nodes[i]);
    EXPECT_NEAR(m1, std::pow(2.0, b + 2) / (b + 2), 1e-12);
  }
  EXPECT_THROW(gauss_jacobi_lower(4, -1.0), PreconditionError);
}

TEST(Rule, VolumeAndPolynomials) {
  const Box unit{Vec{0, 0, 0}, Vec{1, 1, 1}};
  for (auto spec : {RuleSpec::gauss(4), RuleSpec::riemann(10)}) {
    const QuadratureRule q(spec, unit);
    EXPECT_NEAR(q.weight_sum(), 1.0, 1e-14);
    EXPECT_NEAR(integrate(q, [](std::span<const double>) { return 1.0; }), 1.0, 1e-14);
  }
  const QuadratureRule g8(RuleSpec::gauss(8), Box{Vec{0}, Vec{1}});
  EXPECT_NEAR(integrate(g8, [](std::span<const double> x) { return x[0] * x[0]; }), 1.0 / 3.0, 1e-14);
  // tensor polynomial of per-axis degree 2n-1
  const QuadratureRule g5(RuleSpec::gauss(5), Box{Vec{-1, 0}, Vec{2, 3}});
  const double v = integrate(g5, [](std::span<const double> x) { return std::pow(x[0], 9) * std::pow(x[1], 9); });
  const double exact = (std::pow(2.0, 10) - 1.0) / 10.0 * std::pow(3.0, 10) / 10.0;
  EXPECT_LT(std::abs(v - exact) / exact, 1e-12);
}

TEST(Rule, WeightsPositive) {
  const QuadratureRule q(RuleSpec::gauss(16), Box{Vec{-1, 2}, Vec{1, 5}});
  for (const auto& ax : q.axes())
    for (double w : ax.weights) EXPECT_GT(w, 0.0);
  EXPECT_NEAR(q.weight_sum(), 6.0, 1e-12);
}

TEST(Rule, GaussAgreesWithRiemannOnBump) {
  const auto u = TestFunction::bump(Vec{0, 0}, Vec{1, 1});
  const Box b = *u.support();
  auto f = [&](std::span<const double> x) { return u.value(x); };
  const double g = integrate(QuadratureRule(RuleSpec::gauss(32), b), f);
  const double r = integrate(QuadratureRule(RuleSpec::riemann(256), b), f);
  EXPECT_LT(std::abs(g - r) / g, 1e-6);
}

TEST(Rule, GradedRuleHandlesEndpointPower) {
  // int_0^1 s^{-0.98} (1 + s) ds
  const double b = -0.98;
  const QuadratureRule q(RuleSpec::gauss(16), Box{Vec{0}, Vec{1}}, EndpointGrading{0, true, b});
  const double v = integrate(q, [&](std::span<const double> x) { return std::pow(x[0], b) * (1 + x[0]); });
  EXPECT_NEAR(v, 1.0 / (b + 1) + 1.0 / (b + 2), 1e-10);
  // mirrored endpoint
  const QuadratureRule u(RuleSpec::gauss(16), Box{Vec{0}, Vec{1}}, EndpointGrading{0, false, 0.5});
  const double w = integrate(u, [](std::span<const double> x) { return std::sqrt(1 - x[0]); });
  EXPECT_NEAR(w, 2.0 / 3.0, 1e-13);
}

TEST(MonteCarlo, DeterministicAndUnbiased) {
  const Box b{Vec{0, 0, 0, 0, 0}, Vec{1, 1, 1, 1, 1}};
  const QuadratureRule q(RuleSpec::montecarlo(200000, 9), b);
  auto f = [](std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  };
  const auto a = integrate_all(q, f);
  const auto c = integrate_all(q, f);
  EXPECT_EQ(a.value[0], c.value[0]);
  EXPECT_LT(std::abs(a.value[0] - 5.0 / 3.0), 5 * a.mc_stderr[0]);
  EXPECT_GT(a.mc_stderr[0], 0.0);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeTheBits) {
  const Box b{Vec{-1, -1}, Vec{1, 1}};
  auto f = [](std::span<const double> x) { return std::exp(x[0] * x[1]); };
  setenv("HARDY_THREADS", "1", 1);
  const double one = integrate(QuadratureRule(RuleSpec::montecarlo(100000, 3), b), f);
  const double g1 = integrate(QuadratureRule(RuleSpec::gauss(200), b), f);
  setenv("HARDY_THREADS", "4", 1);
  const double four = integrate(QuadratureRule(RuleSpec::montecarlo(100000, 3), b), f);
  const double g4 = integrate(QuadratureRule(RuleSpec::gauss(200), b), f);
  unsetenv("HARDY_THREADS");
  EXPECT_EQ(one, four);
  EXPECT_EQ(g1, g4);
}

TEST(Adaptive, ConvergesOnSmoothBump) {
  const auto u = TestFunction::bump(Vec{0, 0}, Vec{1, 1});
  const QuadratureRule q(RuleSpec::gauss(6), *u.support());
  const auto r = integrate_adaptive(q, [&](std::span<const double> x) { return u.value(x); }, 3);
  ASSERT_EQ(r.estimates.size(), 3u);
  EXPECT_GT(r.estimates[0], r.estimates[1]);
  EXPECT_GT(r.estimates[1], r.estimates[2]);
  EXPECT_EQ(r.value, r.levels.back());
}

TEST(Adaptive, ConstantHasZeroError) {
  const QuadratureRule q(RuleSpec::gauss(3), Box{Vec{0, 0}, Vec{2, 2}});
  const auto r = integrate_adaptive(q, [](std::span<const double>) { return 3.0; }, 2);
  EXPECT_NEAR(r.value, 12.0, 1e-13);
  EXPECT_LT(r.error_estimate, 1e-13);
  EXPECT_THROW(integrate_adaptive(q, [](std::span<const double>) { return 3.0; }, 0), PreconditionError);
}

TEST(Adaptive, UnderresolvedOscillationIsReported) {
  const QuadratureRule q(RuleSpec::gauss(4), Box{Vec{0}, Vec{1}});
  const auto r = integrate_adaptive(q, [](std::span<const double> x) { return std::sin(200 * x[0]); }, 2);
  EXPECT_GT(r.error_estimate, 1e-3);
}

TEST(Estimate, TensorErrorIsDifferenceToCoarserRule) {
  const Box b{Vec{0}, Vec{1}};
  auto f = [](std::span<const double> x) { return std::array<double, 2>{std::exp(x[0]), 1.0}; };
  const auto e = estimate(RuleSpec::gauss(8), b, std::nullopt, f);
  EXPECT_NEAR(e.value[0], std::exp(1.0) - 1.0, 1e-14);
  EXPECT_LT(e.error[0], 1e-12);
  EXPECT_LT(e.error[1], 1e-14);
  EXPECT_EQ(RuleSpec::gauss(32).coarser().nodes, 24u);
  EXPECT_EQ(RuleSpec::default_for(4).kind, RuleSpec::Kind::gauss);
  EXPECT_EQ(RuleSpec::default_for(5).kind, RuleSpec::Kind::montecarlo);
}
