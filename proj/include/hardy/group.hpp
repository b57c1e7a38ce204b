#pragma once

#include <compare>
#include <concepts>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardy/polynomial.hpp"
#include "hardy/types.hpp"

namespace hardy {

/// Identifies the coefficient a_{k,m}^{(l)}: generator k (1-based), stratum l >= 2,
/// component m (1-based) within stratum l.
struct CoeffKey {
  int k;
  int l;
  int m;
  auto operator<=>(const CoeffKey&) const = default;
};

/// Built-in groups whose group law is known in closed form.
enum class GroupLaw { none, euclidean, heisenberg, engel };

/// A stratified group on R^n described by its first-stratum generators
///
///   X_k = d/dx'_k + sum_{l>=2} sum_m a_{k,m}^{(l)}(x', ..., x^{(l-1)}) d/dx_m^{(l)}.
///
/// Construction validates the structural invariants: coefficients of stratum l
/// depend only on strata 1..l-1 and are exactly homogeneous of weighted degree
/// l-1 under the dilations (stratum-j variables carry weight j). Generator
/// indices in the C++ API are 0-based.
class GroupSpec {
public:
  GroupSpec(std::vector<int> strata_dims, const std::map<CoeffKey, Polynomial>& coeffs,
            std::string name = "custom", GroupLaw law = GroupLaw::none)
      : strata_(std::move(strata_dims)), name_(std::move(name)), law_(law) {
    if (strata_.empty()) throw PreconditionError("group: at least one stratum required");
    for (int d : strata_)
      if (d <= 0) throw PreconditionError("group: strata dimensions must be positive");
    n_ = static_cast<std::size_t>(std::accumulate(strata_.begin(), strata_.end(), 0));
    offsets_.resize(strata_.size() + 1, 0);
    for (std::size_t l = 0; l < strata_.size(); ++l) {
      offsets_[l + 1] = offsets_[l] + static_cast<std::size_t>(strata_[l]);
      q_ += static_cast<int>(l + 1) * strata_[l];
    }
    weights_.resize(n_);
    for (std::size_t l = 0; l < strata_.size(); ++l)
      for (std::size_t j = offsets_[l]; j < offsets_[l + 1]; ++j) weights_[j] = static_cast<int>(l + 1);

    const auto n1 = static_cast<std::size_t>(strata_[0]);
    frame_.assign(n1, std::vector<Polynomial>(n_, Polynomial(n_)));
    for (std::size_t i = 0; i < n1; ++i) frame_[i][i] = Polynomial::constant(n_, Rational(1));

    for (const auto& [key, poly] : coeffs) {
      const int r = static_cast<int>(strata_.size());
      if (key.k < 1 || key.k > strata_[0] || key.l < 2 || key.l > r || key.m < 1 ||
          key.m > strata_[static_cast<std::size_t>(key.l - 1)])
        throw PreconditionError("group: coefficient index (" + std::to_string(key.k) + "," +
                                std::to_string(key.l) + "," + std::to_string(key.m) + ") out of range");
      if (poly.nvars() != n_)
        throw PreconditionError("group: coefficient polynomial has " + std::to_string(poly.nvars()) +
                                " variables, expected " + std::to_string(n_));
      if (!poly.depends_only_on_first(offsets_[static_cast<std::size_t>(key.l - 1)]))
        throw PreconditionError("group: coefficient for stratum " + std::to_string(key.l) +
                                " depends on stratum >= " + std::to_string(key.l));
      if (poly.weighted_degree(weights_, key.l - 1) != std::optional<int>(key.l - 1))
        throw PreconditionError("group: coefficient " + poly.to_string() +
                                " is not homogeneous of weighted degree " + std::to_string(key.l - 1));
      frame_[static_cast<std::size_t>(key.k - 1)][slot(key.l, key.m)] = poly;
    }

    // Frame derivatives D_{i,b} = X_i(c_{i,b}); they drive both the sub-Laplacian
    // and the normal derivative X_i<X_i(x), nu>.
    frame_deriv_.assign(n1, std::vector<Polynomial>(n_, Polynomial(n_)));
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t b = 0; b < n_; ++b) frame_deriv_[i][b] = apply_to_polynomial(i, frame_[i][b]);
  }

  const std::vector<int>& strata_dims() const { return strata_; }
  std::size_t n() const { return n_; }
  /// Homogeneous dimension sum_l l * N_l.
  int Q() const { return q_; }
  std::size_t step() const { return strata_.size(); }
  /// Number of generators (dimension of the first stratum).
  std::size_t generators() const { return static_cast<std::size_t>(strata_[0]); }
  const std::string& name() const { return name_; }
  GroupLaw law() const { return law_; }
  std::span<const int> weights() const { return weights_; }

  /// Ambient index of component m (1-based) of stratum l (1-based).
  std::size_t slot(int l, int m) const {
    return offsets_[static_cast<std::size_t>(l - 1)] + static_cast<std::size_t>(m - 1);
  }
  std::size_t stratum_offset(int l) const { return offsets_[static_cast<std::size_t>(l - 1)]; }

  const Polynomial& coeff(const CoeffKey& key) const {
    return frame_.at(static_cast<std::size_t>(key.k - 1)).at(slot(key.l, key.m));
  }

  /// Coefficient polynomials of X_i in every ambient slot.
  const std::vector<Polynomial>& frame(std::size_t i) const { return frame_.at(i); }
  /// X_i applied to each coefficient polynomial of X_i.
  const std::vector<Polynomial>& frame_derivative(std::size_t i) const { return frame_deriv_.at(i); }

  /// Exact formal action X_i p.
  Polynomial apply_to_polynomial(std::size_t i, const Polynomial& p) const {
    Polynomial r(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      if (frame_[i][k].is_zero()) continue;
      Polynomial dp = p.derivative(k);
      if (dp.is_zero()) continue;
      r = r + frame_[i][k] * dp;
    }
    return r;
  }

  /// Non-zero coefficients keyed by (k,l,m).
  std::map<CoeffKey, Polynomial> coefficients() const {
    std::map<CoeffKey, Polynomial> out;
    for (std::size_t i = 0; i < frame_.size(); ++i)
      for (int l = 2; l <= static_cast<int>(strata_.size()); ++l)
        for (int m = 1; m <= strata_[static_cast<std::size_t>(l - 1)]; ++m) {
          const auto& p = frame_[i][slot(l, m)];
          if (!p.is_zero()) out.emplace(CoeffKey{static_cast<int>(i + 1), l, m}, p);
        }
    return out;
  }

private:
  std::vector<int> strata_;
  std::size_t n_ = 0;
  int q_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<int> weights_;
  std::string name_;
  GroupLaw law_;
  std::vector<std::vector<Polynomial>> frame_;
  std::vector<std::vector<Polynomial>> frame_deriv_;
};

// ---------------------------------------------------------------------------
// Built-in groups
// ---------------------------------------------------------------------------

inline GroupSpec make_euclidean(int n) {
  if (n < 1) throw PreconditionError("euclidean: dimension must be >= 1");
  return GroupSpec({n}, {}, "euclidean:" + std::to_string(n), GroupLaw::euclidean);
}

/// H = R^3 with X_1 = d1 + 2 x2 d3, X_2 = d2 - 2 x1 d3.
inline GroupSpec make_heisenberg() {
  std::map<CoeffKey, Polynomial> c;
  c.emplace(CoeffKey{1, 2, 1}, Polynomial::variable(3, 1, Rational(2)));
  c.emplace(CoeffKey{2, 2, 1}, Polynomial::variable(3, 0, Rational(-2)));
  return GroupSpec({2, 1}, c, "heisenberg", GroupLaw::heisenberg);
}

/// Engel group on R^4 with
///   X_1 = d1 - (x2/2) d3 - (x3/2 - x1 x2/12) d4,
///   X_2 = d2 + (x1/2) d3 + (x1^2/12) d4.
inline GroupSpec make_engel() {
  const std::size_t n = 4;
  auto mono = [](Exponents e, Rational c) { return Monomial{std::move(e), c}; };
  std::map<CoeffKey, Polynomial> c;
  c.emplace(CoeffKey{1, 2, 1}, Polynomial::variable(n, 1, Rational(-1, 2)));
  c.emplace(CoeffKey{1, 3, 1}, Polynomial::from_terms(n, {mono({0, 0, 1, 0}, Rational(-1, 2)),
                                                          mono({1, 1, 0, 0}, Rational(1, 12))}));
  c.emplace(CoeffKey{2, 2, 1}, Polynomial::variable(n, 0, Rational(1, 2)));
  c.emplace(CoeffKey{2, 3, 1}, Polynomial::from_terms(n, {mono({2, 0, 0, 0}, Rational(1, 12))}));
  return GroupSpec({2, 1, 1}, c, "engel", GroupLaw::engel);
}

/// Group constants of a step-2 group, a[s][m][i] (0-based), so that
/// X_i = d/dx'_i + sum_s sum_m a[s][m][i] x'_m d/dx''_s.
using Step2Constants = std::vector<std::vector<std::vector<Rational>>>;

inline GroupSpec make_step2(int N, int N2, const Step2Constants& a, std::string name = "step2") {
  if (N < 1 || N2 < 1) throw PreconditionError("step2: N and N2 must be positive");
  if (a.size() != static_cast<std::size_t>(N2))
    throw PreconditionError("step2: constants must have shape N2 x N x N");
  for (const auto& am : a) {
    if (am.size() != static_cast<std::size_t>(N)) throw PreconditionError("step2: constants must have shape N2 x N x N");
    for (const auto& ai : am)
      if (ai.size() != static_cast<std::size_t>(N)) throw PreconditionError("step2: constants must have shape N2 x N x N");
  }
  const auto n = static_cast<std::size_t>(N + N2);
  std::map<CoeffKey, Polynomial> c;
  for (int i = 0; i < N; ++i)
    for (int s = 0; s < N2; ++s) {
      Polynomial p(n);
      for (int m = 0; m < N; ++m) {
        const Rational& v = a[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
        if (v.numerator() != 0) p = p + Polynomial::variable(n, static_cast<std::size_t>(m), v);
      }
      if (!p.is_zero()) c.emplace(CoeffKey{i + 1, 2, s + 1}, p);
    }
  return GroupSpec({N, N2}, c, std::move(name));
}

/// Recovers a[s][m][i] from a step-2 GroupSpec (linear coefficients of stratum-2 slots).
inline Step2Constants step2_constants(const GroupSpec& g) {
  if (g.step() != 2) throw PreconditionError("step2_constants: group has step " + std::to_string(g.step()));
  const auto N = static_cast<std::size_t>(g.strata_dims()[0]);
  const auto N2 = static_cast<std::size_t>(g.strata_dims()[1]);
  Step2Constants a(N2, std::vector<std::vector<Rational>>(N, std::vector<Rational>(N, Rational(0))));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t s = 0; s < N2; ++s)
      for (const auto& mono : g.frame(i)[N + s].terms())
        for (std::size_t m = 0; m < N; ++m)
          if (mono.exps[m] == 1) a[s][m][i] = mono.coeff;
  return a;
}

// ---------------------------------------------------------------------------
// Vector-field actions
// ---------------------------------------------------------------------------

/// Any function exposing analytic first derivatives.
template <class F>
concept HasGradient = requires(const F& f, std::span<const double> x) {
  { f.gradient(x) } -> std::convertible_to<Vec>;
};

template <class F>
concept HasHessian = HasGradient<F> && requires(const F& f, std::span<const double> x) {
  { f.hessian(x) } -> std::convertible_to<SymMat>;
};

inline void check_generator(const GroupSpec& g, std::size_t i) {
  if (i >= g.generators())
    throw PreconditionError("generator index " + std::to_string(i) + " out of range (N1 = " +
                            std::to_string(g.generators()) + ")");
}

/// Coefficient vector X_i(x) in ambient coordinates.
template <class T>
std::vector<T> vector_field_at(const GroupSpec& g, std::size_t i, std::span<const T> x) {
  check_generator(g, i);
  std::vector<T> out(g.n(), T(0));
  const auto& fr = g.frame(i);
  for (std::size_t k = 0; k < g.n(); ++k)
    if (!fr[k].is_zero()) out[k] = fr[k].template evaluate<T>(x);
  return out;
}

inline Vec vector_field_at(const GroupSpec& g, std::size_t i, std::span<const double> x) {
  check_generator(g, i);
  Vec out(g.n(), 0.0);
  const auto& fr = g.frame(i);
  for (std::size_t k = 0; k < g.n(); ++k)
    if (!fr[k].is_zero()) out[k] = fr[k](x);
  return out;
}

/// (X_i u)(x) = <X_i(x), grad u(x)>.
template <HasGradient F>
double apply_field(const GroupSpec& g, std::size_t i, const F& u, std::span<const double> x) {
  Vec c = vector_field_at(g, i, x);
  Vec grad = u.gradient(x);
  return dot(c, grad);
}

template <HasGradient F>
Vec horizontal_gradient(const GroupSpec& g, const F& u, std::span<const double> x) {
  Vec grad = u.gradient(x);
  Vec out(g.generators(), 0.0);
  for (std::size_t i = 0; i < g.generators(); ++i) out[i] = dot(vector_field_at(g, i, x), grad);
  return out;
}

/// sum_k X_k(X_k u)(x), expanded with the product rule:
/// sum_k [ sum_b (X_k c_{k,b}) d_b u + sum_{a,b} c_{k,a} c_{k,b} d_a d_b u ].
template <HasHessian F>
double sub_laplacian(const GroupSpec& g, const F& u, std::span<const double> x) {
  Vec grad = u.gradient(x);
  SymMat hess = u.hessian(x);
  double total = 0.0;
  for (std::size_t k = 0; k < g.generators(); ++k) {
    Vec c = vector_field_at(g, k, x);
    const auto& dk = g.frame_derivative(k);
    for (std::size_t b = 0; b < g.n(); ++b) {
      if (!dk[b].is_zero()) total += dk[b](x) * grad[b];
      for (std::size_t a = 0; a < g.n(); ++a) total += c[a] * c[b] * hess(a, b);
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Group laws (built-ins only)
// ---------------------------------------------------------------------------

/// x ∘ y for built-in groups; templated so left translations can be differentiated.
template <class T>
std::vector<T> group_law(const GroupSpec& g, std::span<const T> x, std::span<const T> y) {
  if (x.size() != g.n() || y.size() != g.n()) throw PreconditionError("group_law: point dimension mismatch");
  std::vector<T> r(g.n());
  for (std::size_t k = 0; k < g.n(); ++k) r[k] = x[k] + y[k];
  switch (g.law()) {
    case GroupLaw::euclidean:
      break;
    case GroupLaw::heisenberg:
      r[2] = r[2] + 2.0 * (x[1] * y[0] - x[0] * y[1]);
      break;
    case GroupLaw::engel: {
      // P2 here is the unique weighted-degree-3 correction that makes the
      // generator formulas above left-invariant (see README, "Engel group").
      const T p1 = 0.5 * (x[0] * y[1] - x[1] * y[0]);
      const T p2 = (x[0] * x[0] * y[1] + x[0] * x[1] * y[0] + 4.0 * x[0] * y[2] + 2.0 * x[1] * y[0] * y[0] -
                    6.0 * x[2] * y[0]) /
                   12.0;
      r[2] = r[2] + p1;
      r[3] = r[3] + p2;
      break;
    }
    case GroupLaw::none:
      throw UnsupportedOperation("group_law: no closed-form law for group '" + g.name() + "'");
  }
  return r;
}

inline Vec group_law(const GroupSpec& g, std::span<const double> x, std::span<const double> y) {
  auto r = group_law<double>(g, x, y);
  return Vec(r.begin(), r.end());
}

}  // namespace hardy
