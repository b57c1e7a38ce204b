#include <gtest/gtest.h>

#include "hardy/testfns.hpp"
#include "test_support.hpp"

using namespace hardy;
using hardy::testing::Sampler;

namespace {

void expect_derivatives_match(const TestFunction& u, const Vec& x) {
  const std::size_t n = x.size();
  const Vec g = u.gradient(x);
  const SymMat H = u.hessian(x);
  for (std::size_t k = 0; k < n; ++k) {
    const double h = 1e-5;
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const double fd = (u.value(xp) - u.value(xm)) / (2 * h);
    EXPECT_LT(std::abs(fd - g[k]), 1e-6 * std::max(1.0, std::abs(g[k])) + 1e-10);
    const double h2 = 1e-4;
    Vec yp = x, ym = x;
    yp[k] += h2;
    ym[k] -= h2;
    const Vec gp = u.gradient(yp), gm = u.gradient(ym);
    for (std::size_t j = 0; j < n; ++j) {
      const double fd2 = (gp[j] - gm[j]) / (2 * h2);
      EXPECT_LT(std::abs(fd2 - H(j, k)), 1e-4 * std::max(1.0, std::abs(H(j, k))) + 1e-8);
    }
  }
}

}  // namespace

TEST(Bump, CenterValueAndCutoff) {
  const auto u = TestFunction::bump(Vec{0, 0, 2}, Vec{1, 1, 1});
  EXPECT_DOUBLE_EQ(u.value(Vec{0, 0, 2}), std::exp(-3.0));
  EXPECT_EQ(u.value(Vec{1, 0, 2}), 0.0);
  EXPECT_EQ(u.gradient(Vec{1, 0, 2}), (Vec{0, 0, 0}));
  EXPECT_EQ(u.value(Vec{5, 5, 5}), 0.0);
  const auto s = u.support();
  ASSERT_TRUE(s);
  EXPECT_EQ(s->lo, (Vec{-1, -1, 1}));
  EXPECT_EQ(s->hi, (Vec{1, 1, 3}));
  EXPECT_THROW(TestFunction::bump(Vec{0}, Vec{0}), PreconditionError);
}

TEST(Bump, DerivativesMatchFiniteDifferences) {
  Sampler s(21);
  const auto u = TestFunction::bump(Vec{0.2, -0.1, 1.0}, Vec{1.2, 0.9, 1.5});
  for (int t = 0; t < 50; ++t) expect_derivatives_match(u, Vec{s.uniform(-0.7, 1.1), s.uniform(-0.8, 0.6), s.uniform(0.0, 2.0)});
}

TEST(PolyBump, DerivativesMatchFiniteDifferences) {
  Sampler s(22);
  const auto fam = random_family(5, 4, Box{Vec{-1, -1, 0.5}, Vec{1, 1, 2.5}}, true);
  for (const auto& u : fam) {
    const auto b = *u.support();
    for (int t = 0; t < 10; ++t) {
      Vec x(3);
      for (std::size_t k = 0; k < 3; ++k) {
        const double m = 0.5 * (b.lo[k] + b.hi[k]), w = 0.5 * (b.hi[k] - b.lo[k]);
        x[k] = m + 0.8 * w * s.uniform(-1, 1);
      }
      expect_derivatives_match(u, x);
    }
  }
}

TEST(Probe, PowerLawAndDerivatives) {
  const HalfSpace h(Vec{1}, 0.0);
  const Box cut{Vec{0}, Vec{1}};
  const auto u = TestFunction::boundary_power_probe(h, 1.0, cut);
  // cutoff is 1 on s <= L/2, so u = s there
  EXPECT_NEAR(u.value(Vec{0.1}), 0.1, 1e-15);
  EXPECT_NEAR(u.value(Vec{0.3}), 0.3, 1e-15);
  EXPECT_EQ(u.value(Vec{1.0}), 0.0);
  EXPECT_EQ(u.value(Vec{-0.1}), 0.0);
  const auto v = TestFunction::boundary_power_probe(h, 0.75, cut);
  Sampler s(23);
  for (int t = 0; t < 20; ++t) expect_derivatives_match(v, Vec{s.uniform(0.05, 0.95)});
  EXPECT_THROW(TestFunction::boundary_power_probe(h, 0.5, cut), PreconditionError);
  EXPECT_THROW(TestFunction::boundary_power_probe(HalfSpace::normalized(Vec{1, 1}, 0), 1.0,
                                                  Box{Vec{0, 0}, Vec{1, 1}}),
               PreconditionError);
}

TEST(Probe, MultidimensionalDerivatives) {
  const HalfSpace h(Vec{0, 0, 1}, 0.0);
  const auto u = TestFunction::boundary_power_probe(h, 0.8, Box{Vec{-1, -1, 0}, Vec{1, 1, 2}});
  Sampler s(24);
  for (int t = 0; t < 20; ++t) expect_derivatives_match(u, Vec{s.uniform(-0.8, 0.8), s.uniform(-0.8, 0.8), s.uniform(0.1, 1.9)});
}

TEST(RandomFamily, DeterministicAndContained) {
  const Box box{Vec{-1, -1, 0.5}, Vec{1, 1, 3.5}};
  const auto a = random_family(42, 20, box);
  const auto b = random_family(42, 20, box);
  ASSERT_EQ(a.size(), 20u);
  Sampler s(25);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(box.contains_box(*a[k].support()));
    for (int t = 0; t < 5; ++t) {
      const Vec x = s.point(3, -1, 3.5);
      EXPECT_EQ(a[k].value(x), b[k].value(x));
    }
  }
  EXPECT_TRUE(random_family(1, 0, box).empty());
  EXPECT_NE(random_family(43, 1, box)[0].value(Vec{0, 0, 2}), a[0].value(Vec{0, 0, 2}));
}

TEST(TestFunction, ExactZeroOutsideSupport) {
  Sampler s(26);
  const auto fam = random_family(7, 10, Box{Vec{-2, -2}, Vec{2, 2}}, true);
  for (const auto& u : fam) {
    const auto b = *u.support();
    for (int t = 0; t < 100; ++t) {
      const Vec x = s.point(2, -3, 3);
      const bool inside = x[0] > b.lo[0] && x[0] < b.hi[0] && x[1] > b.lo[1] && x[1] < b.hi[1];
      if (!inside) {
        EXPECT_EQ(u.value(x), 0.0);
        EXPECT_EQ(u.gradient(x), (Vec{0, 0}));
      }
    }
  }
}

TEST(TestFunction, ScaledMultipliesEverything) {
  const auto u = TestFunction::bump(Vec{0, 0}, Vec{1, 1});
  const auto v = u.scaled(2.0);
  const Vec x{0.3, -0.2};
  EXPECT_EQ(v.value(x), 2.0 * u.value(x));
  EXPECT_EQ(v.gradient(x)[1], 2.0 * u.gradient(x)[1]);
}
