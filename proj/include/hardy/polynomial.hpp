#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/rational.hpp>

#include "hardy/types.hpp"

namespace hardy {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

using Exponents = boost::container::small_vector<int, 8>;

struct Monomial {
  Exponents exps;
  Rational coeff;
};

/// Sparse multivariate polynomial over the ambient coordinates, rational coefficients.
///
/// Terms are kept canonical: sorted by exponent vector, no duplicate exponent
/// vectors, no zero coefficients. A floating-point mirror of the coefficients
/// is kept for the hot evaluation path; exact evaluation goes through
/// `evaluate<Rational>`.
class Polynomial {
public:
  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Rational c) {
    Polynomial p(nvars);
    if (c.numerator() != 0) p.terms_.push_back({Exponents(nvars, 0), c});
    p.refresh_mirror();
    return p;
  }

  /// c * x_var
  static Polynomial variable(std::size_t nvars, std::size_t var, Rational c = 1) {
    if (var >= nvars) throw PreconditionError("polynomial: variable index out of range");
    Polynomial p(nvars);
    if (c.numerator() != 0) {
      Exponents e(nvars, 0);
      e[var] = 1;
      p.terms_.push_back({e, c});
    }
    p.refresh_mirror();
    return p;
  }

  static Polynomial from_terms(std::size_t nvars, std::vector<Monomial> terms) {
    for (const auto& t : terms) {
      if (t.exps.size() != nvars)
        throw PreconditionError("polynomial: exponent vector length " + std::to_string(t.exps.size()) +
                                " does not match " + std::to_string(nvars) + " variables");
      for (int e : t.exps)
        if (e < 0) throw PreconditionError("polynomial: negative exponent");
    }
    Polynomial p(nvars);
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) {
      return std::all_of(m.exps.begin(), m.exps.end(), [](int e) { return e == 0; });
    });
  }

  template <class T>
  T evaluate(std::span<const T> x) const {
    T sum = T(0);
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      T term = coeff_as<T>(t);
      const auto& e = terms_[t].exps;
      for (std::size_t v = 0; v < nvars_; ++v)
        for (int k = 0; k < e[v]; ++k) term = term * x[v];
      sum = sum + term;
    }
    return sum;
  }

  double operator()(std::span<const double> x) const { return evaluate<double>(x); }

  Polynomial derivative(std::size_t var) const {
    if (var >= nvars_) throw PreconditionError("polynomial: derivative variable out of range");
    Polynomial d(nvars_);
    for (const auto& m : terms_) {
      if (m.exps[var] == 0) continue;
      Monomial r = m;
      r.coeff *= m.exps[var];
      r.exps[var] -= 1;
      d.terms_.push_back(std::move(r));
    }
    d.canonicalize();
    return d;
  }

  /// Returns the common weighted degree if every monomial has the same one;
  /// nullopt for mixed degrees. The zero polynomial reports `fallback`.
  std::optional<int> weighted_degree(std::span<const int> weights, int fallback) const {
    if (terms_.empty()) return fallback;
    std::optional<int> deg;
    for (const auto& m : terms_) {
      int d = 0;
      for (std::size_t v = 0; v < nvars_; ++v) d += weights[v] * m.exps[v];
      if (deg && *deg != d) return std::nullopt;
      deg = d;
    }
    return deg;
  }

  /// True when no monomial involves a variable with index >= `count`.
  bool depends_only_on_first(std::size_t count) const {
    for (const auto& m : terms_)
      for (std::size_t v = count; v < nvars_; ++v)
        if (m.exps[v] != 0) return false;
    return true;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_compatible(a, b);
    Polynomial r(a.nvars_);
    r.terms_ = a.terms_;
    r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
    r.canonicalize();
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, Rational c) {
    Polynomial r(a.nvars_);
    if (c.numerator() != 0) {
      r.terms_ = a.terms_;
      for (auto& m : r.terms_) m.coeff *= c;
    }
    r.refresh_mirror();
    return r;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b * Rational(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_compatible(a, b);
    Polynomial r(a.nvars_);
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        Monomial m{x.exps, x.coeff * y.coeff};
        for (std::size_t v = 0; v < a.nvars_; ++v) m.exps[v] += y.exps[v];
        r.terms_.push_back(std::move(m));
      }
    r.canonicalize();
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& m : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(m.coeff.numerator());
      if (m.coeff.denominator() != 1) s += "/" + std::to_string(m.coeff.denominator());
      s += ")";
      for (std::size_t v = 0; v < nvars_; ++v)
        if (m.exps[v] > 0) {
          s += "*x" + std::to_string(v + 1);
          if (m.exps[v] > 1) s += "^" + std::to_string(m.exps[v]);
        }
    }
    return s;
  }

private:
  template <class T>
  T coeff_as(std::size_t t) const {
    if constexpr (std::is_same_v<T, Rational>)
      return terms_[t].coeff;
    else
      return T(mirror_[t]);
  }

  static void check_compatible(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw PreconditionError("polynomial: variable count mismatch");
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Monomial& x, const Monomial& y) { return x.exps < y.exps; });
    std::vector<Monomial> merged;
    merged.reserve(terms_.size());
    for (auto& m : terms_) {
      if (!merged.empty() && merged.back().exps == m.exps)
        merged.back().coeff += m.coeff;
      else
        merged.push_back(std::move(m));
    }
    std::erase_if(merged, [](const Monomial& m) { return m.coeff.numerator() == 0; });
    terms_ = std::move(merged);
    refresh_mirror();
  }

  void refresh_mirror() {
    mirror_.resize(terms_.size());
    for (std::size_t t = 0; t < terms_.size(); ++t) mirror_[t] = to_double(terms_[t].coeff);
  }

  std::size_t nvars_;
  std::vector<Monomial> terms_;
  std::vector<double> mirror_;
};

}  // namespace hardy
