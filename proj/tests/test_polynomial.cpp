#include <gtest/gtest.h>

#include "hardy/dual.hpp"
#include "hardy/polynomial.hpp"
#include "test_support.hpp"

using namespace hardy;
using hardy::testing::var;

TEST(Polynomial, CanonicalFormDropsCancellingTerms) {
  const auto x = var(2, 0), y = var(2, 1);
  const Polynomial p = (x + y) - y;
  EXPECT_EQ(p, x);
  EXPECT_TRUE((x - x).is_zero());
}

TEST(Polynomial, ProductAndDerivative) {
  const auto x = var(2, 0), y = var(2, 1);
  const Polynomial p = x * x * y * Rational(3);  // 3 x^2 y
  EXPECT_EQ(p.derivative(0), x * y * Rational(6));
  EXPECT_EQ(p.derivative(1), x * x * Rational(3));
  EXPECT_TRUE(p.derivative(0).derivative(0).derivative(0).is_zero());
}

TEST(Polynomial, ExactRationalEvaluation) {
  const auto x = var(2, 0), y = var(2, 1);
  const Polynomial p = x * y * Rational(1, 12) + Polynomial::constant(2, Rational(1, 3));
  const Rational pt[2] = {Rational(3), Rational(2)};
  const Rational v = p.evaluate<Rational>(std::span<const Rational>(pt));
  EXPECT_EQ(v.numerator(), 5);
  EXPECT_EQ(v.denominator(), 6);
  const double xd[2] = {3.0, 2.0};
  EXPECT_DOUBLE_EQ(p(xd), 5.0 / 6.0);
}

TEST(Polynomial, WeightedDegree) {
  const auto x1 = var(4, 0), x2 = var(4, 1), x3 = var(4, 2);
  const int w[4] = {1, 1, 2, 3};
  EXPECT_EQ(x1.weighted_degree(w, -1), 1);
  EXPECT_EQ((x1 * x2 * Rational(1, 12) + x3).weighted_degree(w, -1), 2);
  EXPECT_FALSE((x1 + x3).weighted_degree(w, -1).has_value());
  EXPECT_EQ(Polynomial(4).weighted_degree(w, 7), 7);
}

TEST(Polynomial, RejectsMismatchedExponents) {
  EXPECT_THROW(Polynomial::from_terms(2, {{Exponents{1, 0, 0}, Rational(1)}}), PreconditionError);
  EXPECT_THROW(Polynomial::variable(2, 2), PreconditionError);
  EXPECT_THROW(var(2, 0) + var(3, 0), PreconditionError);
}

TEST(Dual, ForwardDerivativeOfComposite) {
  using D = Dual<double>;
  const D x(0.3, 1.0);
  const D f = exp(x * x) * sqrt(x + 1.0) / (2.0 - x);
  const auto g = [](double t) { return std::exp(t * t) * std::sqrt(t + 1.0) / (2.0 - t); };
  const double h = 1e-6;
  EXPECT_NEAR(f.v, g(0.3), 1e-15);
  EXPECT_NEAR(f.d, (g(0.3 + h) - g(0.3 - h)) / (2 * h), 1e-8);
}

TEST(Dual, PolynomialEvaluationCarriesDerivative) {
  const auto x = var(2, 0), y = var(2, 1);
  const Polynomial p = x * x * y;
  using D = Dual<double>;
  const D pt[2] = {D(2.0, 1.0), D(3.0, 0.0)};
  const D v = p.evaluate<D>(std::span<const D>(pt));
  EXPECT_DOUBLE_EQ(v.v, 12.0);
  EXPECT_DOUBLE_EQ(v.d, 12.0);  // d/dx x^2 y = 2xy
}
