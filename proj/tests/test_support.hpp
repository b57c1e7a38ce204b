#pragma once

#include <cstdint>
#include <random>

#include "hardy/polynomial.hpp"
#include "hardy/types.hpp"

namespace hardy::testing {

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vec point(std::size_t n, double lo = -2.0, double hi = 2.0) {
    Vec x(n);
    for (auto& v : x) v = uniform(lo, hi);
    return x;
  }

  /// Small integers over a denominator, so exact rational checks stay exact in double.
  Rational rational(int range = 9, int den = 4) {
    return Rational(std::uniform_int_distribution<int>(-range, range)(rng_), den);
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

inline Polynomial var(std::size_t n, std::size_t k) { return Polynomial::variable(n, k); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace hardy::testing
