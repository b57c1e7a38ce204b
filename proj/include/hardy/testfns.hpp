#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hardy/dual.hpp"
#include "hardy/geometry.hpp"
#include "hardy/polynomial.hpp"
#include "hardy/types.hpp"

namespace hardy {

namespace detail {

/// exp(-1/t) for t > 0, exactly 0 below the underflow threshold.
template <class T>
T flat_exp(const T& t) {
  if (primal(t) <= 1.0 / 700.0) return T(0.0);
  return exp(-1.0 / t);
}

/// C-infinity step: 1 for tau <= 0, 0 for tau >= 1.
template <class T>
T smooth_step(const T& tau) {
  if (primal(tau) <= 0.0) return T(1.0);
  if (primal(tau) >= 1.0) return T(0.0);
  const T a = flat_exp(1.0 - tau);
  const T b = flat_exp(tau);
  return a / (a + b);
}

/// exp(-1/(1 - t^2)) on |t| < 1, else 0.
template <class T>
T mollifier(const T& t) {
  const double tp = primal(t);
  if (!(tp > -1.0 && tp < 1.0)) return T(0.0);
  return exp(-1.0 / (1.0 - t * t));
}

/// Log-derivatives of the mollifier: phi'/phi and (phi'/phi)'.
inline void mollifier_logderivs(double t, double& l1, double& l1p) {
  const double s = 1.0 - t * t;
  l1 = -2.0 * t / (s * s);
  l1p = -2.0 / (s * s) - 8.0 * t * t / (s * s * s);
}

struct PolyDerivs {
  Polynomial p;
  std::vector<Polynomial> d1;
  std::vector<std::vector<Polynomial>> d2;

  explicit PolyDerivs(Polynomial poly) : p(std::move(poly)) {
    const std::size_t n = p.nvars();
    d1.reserve(n);
    for (std::size_t i = 0; i < n; ++i) d1.push_back(p.derivative(i));
    d2.assign(n, std::vector<Polynomial>(n, Polynomial(n)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d2[i][j] = d1[i].derivative(j);
  }
};

}  // namespace detail

/// Smooth test function u with analytic value, gradient and Hessian.
///
/// Kinds:
///  - bump:        prod_i exp(-1/(1 - t_i^2)), t = (x - c)/w, zero outside the box;
///  - poly_bump:   q(t) * bump, q a polynomial in the local coordinates t;
///  - probe:       dist^alpha * smooth normal cutoff * bump in the tangential axes;
///  - polynomial:  a plain polynomial in x (not compactly supported; used for
///                 algebraic checks of the vector fields only).
class TestFunction {
public:
  enum class Kind { bump, poly_bump, probe, polynomial };

  struct Bump {
    Vec center;
    Vec widths;
  };
  struct PolyBump {
    Vec center;
    Vec widths;
    detail::PolyDerivs q;  // in local coordinates t
  };
  struct Probe {
    std::size_t axis;    // normal axis k, nu = sign * e_k
    double sign;         // +1 or -1
    double offset;       // d
    double alpha;        // power of the distance, > 1/2
    double length;       // support in the normal direction is 0 < s < length
    Vec center;          // tangential bump center (ignored on `axis`)
    Vec widths;          // tangential bump widths (ignored on `axis`)
  };
  struct PolyFn {
    detail::PolyDerivs q;
  };

  static TestFunction bump(Vec center, Vec half_widths) {
    check_box_args(center, half_widths);
    TestFunction f;
    f.n_ = center.size();
    f.data_ = Bump{std::move(center), std::move(half_widths)};
    return f;
  }

  /// q is a polynomial in the local coordinates t_i = (x_i - c_i)/w_i.
  static TestFunction poly_bump(Vec center, Vec half_widths, Polynomial q) {
    check_box_args(center, half_widths);
    if (q.nvars() != center.size()) throw PreconditionError("poly_bump: polynomial dimension mismatch");
    TestFunction f;
    f.n_ = center.size();
    f.data_ = PolyBump{std::move(center), std::move(half_widths), detail::PolyDerivs(std::move(q))};
    return f;
  }

  static TestFunction polynomial(Polynomial q) {
    TestFunction f;
    f.n_ = q.nvars();
    f.data_ = PolyFn{detail::PolyDerivs(std::move(q))};
    return f;
  }

  /// u = s^alpha * chi(s) * B(tangential), s = dist_halfspace(h, x).
  /// The normal must be a signed coordinate axis. chi is 1 for s <= L/2 and
  /// vanishes smoothly at s = L, where L is the largest distance reached in
  /// `cutoff`; the tangential bump fills the remaining axes of `cutoff`.
  static TestFunction boundary_power_probe(const HalfSpace& h, double alpha, const Box& cutoff) {
    if (!(alpha > 0.5)) throw PreconditionError("boundary_power_probe: alpha must exceed 1/2");
    cutoff.validate();
    if (cutoff.dim() != h.nu.size()) throw PreconditionError("boundary_power_probe: box dimension mismatch");
    std::optional<std::size_t> axis;
    for (std::size_t k = 0; k < h.nu.size(); ++k) {
      if (h.nu[k] == 0.0) continue;
      if (axis || std::abs(std::abs(h.nu[k]) - 1.0) > 1e-12)
        throw PreconditionError("boundary_power_probe: normal must be a signed coordinate axis");
      axis = k;
    }
    if (!axis) throw PreconditionError("boundary_power_probe: zero normal");
    Probe pr;
    pr.axis = *axis;
    pr.sign = h.nu[*axis] > 0 ? 1.0 : -1.0;
    pr.offset = h.d;
    pr.alpha = alpha;
    pr.length = pr.sign > 0 ? cutoff.hi[*axis] - h.d : -cutoff.lo[*axis] - h.d;
    if (!(pr.length > 0.0)) throw PreconditionError("boundary_power_probe: cutoff box lies outside the half-space");
    pr.center = Vec(cutoff.dim());
    pr.widths = Vec(cutoff.dim());
    for (std::size_t k = 0; k < cutoff.dim(); ++k) {
      pr.center[k] = 0.5 * (cutoff.lo[k] + cutoff.hi[k]);
      pr.widths[k] = 0.5 * (cutoff.hi[k] - cutoff.lo[k]);
    }
    TestFunction f;
    f.n_ = cutoff.dim();
    f.data_ = std::move(pr);
    return f;
  }

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  std::size_t dim() const { return n_; }
  double scale() const { return scale_; }

  std::string kind_name() const {
    switch (kind()) {
      case Kind::bump: return "bump";
      case Kind::poly_bump: return "poly_bump";
      case Kind::probe: return "probe";
      case Kind::polynomial: return "polynomial";
    }
    return "?";
  }

  /// c * u.
  TestFunction scaled(double c) const {
    TestFunction f = *this;
    f.scale_ *= c;
    return f;
  }

  /// Closed box outside of which u, grad u and the Hessian vanish identically.
  std::optional<Box> support() const {
    switch (kind()) {
      case Kind::bump: {
        const auto& b = std::get<Bump>(data_);
        return box_of(b.center, b.widths);
      }
      case Kind::poly_bump: {
        const auto& b = std::get<PolyBump>(data_);
        return box_of(b.center, b.widths);
      }
      case Kind::probe: {
        const auto& p = std::get<Probe>(data_);
        Box box = box_of(p.center, p.widths);
        if (p.sign > 0) {
          box.lo[p.axis] = p.offset;
          box.hi[p.axis] = p.offset + p.length;
        } else {
          box.lo[p.axis] = -p.offset - p.length;
          box.hi[p.axis] = -p.offset;
        }
        return box;
      }
      case Kind::polynomial:
        return std::nullopt;
    }
    return std::nullopt;
  }

  /// For probes: the axis and end of the support box where u ~ dist^alpha.
  struct EndpointSingularity {
    std::size_t axis;
    bool at_lower;
    double alpha;
  };
  std::optional<EndpointSingularity> endpoint_singularity() const {
    if (kind() != Kind::probe) return std::nullopt;
    const auto& p = std::get<Probe>(data_);
    return EndpointSingularity{p.axis, p.sign > 0, p.alpha};
  }

  /// The half-space a probe was built against (its boundary is part of the support).
  std::optional<HalfSpace> probe_halfspace() const {
    if (kind() != Kind::probe) return std::nullopt;
    const auto& p = std::get<Probe>(data_);
    Vec nu(n_, 0.0);
    nu[p.axis] = p.sign;
    return HalfSpace(nu, p.offset);
  }

  const std::variant<Bump, PolyBump, Probe, PolyFn>& data() const { return data_; }

  /// Generic evaluation (double, Dual, ...), used for automatic differentiation.
  template <class T>
  T evaluate(std::span<const T> x) const {
    check_point(x.size());
    return T(scale_) * std::visit([&](const auto& d) { return eval_kind<T>(d, x); }, data_);
  }

  double value(std::span<const double> x) const { return evaluate<double>(x); }

  Vec gradient(std::span<const double> x) const {
    check_point(x.size());
    Vec g(n_, 0.0);
    SymMat* none = nullptr;
    std::visit([&](const auto& d) { derivs(d, x, g, none); }, data_);
    for (double& v : g) v *= scale_;
    return g;
  }

  SymMat hessian(std::span<const double> x) const {
    check_point(x.size());
    Vec g(n_, 0.0);
    SymMat h(n_);
    SymMat* hp = &h;
    std::visit([&](const auto& d) { derivs(d, x, g, hp); }, data_);
    for (double& v : h.a) v *= scale_;
    return h;
  }

private:
  TestFunction() = default;

  static void check_box_args(const Vec& c, const Vec& w) {
    if (c.empty() || c.size() != w.size()) throw PreconditionError("test function: center/width dimension mismatch");
    for (double v : w)
      if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionError("test function: half-widths must be positive");
    for (double v : c)
      if (!std::isfinite(v)) throw PreconditionError("test function: non-finite center");
  }

  void check_point(std::size_t size) const {
    if (size != n_) throw PreconditionError("test function: point dimension mismatch");
  }

  static Box box_of(const Vec& c, const Vec& w) {
    Box b{Vec(c.size()), Vec(c.size())};
    for (std::size_t k = 0; k < c.size(); ++k) {
      b.lo[k] = c[k] - w[k];
      b.hi[k] = c[k] + w[k];
    }
    return b;
  }

  template <class T>
  static T product_bump(const Vec& c, const Vec& w, std::span<const T> x, std::size_t skip) {
    T prod = T(1.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k == skip) continue;
      const T t = (x[k] - c[k]) / w[k];
      if (!(primal(t) > -1.0 && primal(t) < 1.0)) return T(0.0);
      prod = prod * detail::mollifier(t);
    }
    return prod;
  }

  template <class T>
  static T probe_radial(const Probe& p, const T& s) {
    if (!(primal(s) > 0.0 && primal(s) < p.length)) return T(0.0);
    const double half = 0.5 * p.length;
    return pow(s, p.alpha) * detail::smooth_step((s - half) / half);
  }

  template <class T>
  static T eval_kind(const Bump& b, std::span<const T> x) {
    return product_bump<T>(b.center, b.widths, x, static_cast<std::size_t>(-1));
  }

  template <class T>
  static T eval_kind(const PolyBump& b, std::span<const T> x) {
    const T base = product_bump<T>(b.center, b.widths, x, static_cast<std::size_t>(-1));
    if (primal(base) == 0.0) return T(0.0);
    std::vector<T> t(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) t[k] = (x[k] - b.center[k]) / b.widths[k];
    return b.q.p.template evaluate<T>(std::span<const T>(t)) * base;
  }

  template <class T>
  static T eval_kind(const Probe& p, std::span<const T> x) {
    const T s = p.sign * x[p.axis] - p.offset;
    const T radial = probe_radial(p, s);
    if (primal(radial) == 0.0) return T(0.0);
    return radial * product_bump<T>(p.center, p.widths, x, p.axis);
  }

  template <class T>
  static T eval_kind(const PolyFn& f, std::span<const T> x) {
    return f.q.p.template evaluate<T>(x);
  }

  /// Bump factor over all axes except `skip`, with per-axis log-derivatives.
  static double bump_logderivs(const Vec& c, const Vec& w, std::span<const double> x, std::size_t skip, Vec& l1,
                               Vec& l1p) {
    double prod = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      l1[k] = 0.0;
      l1p[k] = 0.0;
      if (k == skip) continue;
      const double t = (x[k] - c[k]) / w[k];
      if (!(t > -1.0 && t < 1.0)) return 0.0;
      prod *= detail::mollifier(t);
      detail::mollifier_logderivs(t, l1[k], l1p[k]);
      l1[k] /= w[k];
      l1p[k] /= w[k] * w[k];
    }
    return prod;
  }

  void derivs(const Bump& b, std::span<const double> x, Vec& g, SymMat* h) const {
    Vec l1(n_), l1p(n_);
    const double u = bump_logderivs(b.center, b.widths, x, static_cast<std::size_t>(-1), l1, l1p);
    if (u == 0.0) return;
    for (std::size_t i = 0; i < n_; ++i) g[i] = u * l1[i];
    if (!h) return;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        (*h)(i, j) = i == j ? u * (l1[i] * l1[i] + l1p[i]) : u * l1[i] * l1[j];
  }

  void derivs(const PolyBump& b, std::span<const double> x, Vec& g, SymMat* h) const {
    Vec l1(n_), l1p(n_);
    const double base = bump_logderivs(b.center, b.widths, x, static_cast<std::size_t>(-1), l1, l1p);
    if (base == 0.0) return;
    Vec t(n_);
    for (std::size_t k = 0; k < n_; ++k) t[k] = (x[k] - b.center[k]) / b.widths[k];
    const double q = b.q.p(t);
    Vec dq(n_);
    for (std::size_t k = 0; k < n_; ++k) dq[k] = b.q.d1[k](t) / b.widths[k];
    for (std::size_t i = 0; i < n_; ++i) g[i] = base * (dq[i] + q * l1[i]);
    if (!h) return;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const double d2q = b.q.d2[i][j](t) / (b.widths[i] * b.widths[j]);
        const double d2b = i == j ? l1[i] * l1[i] + l1p[i] : l1[i] * l1[j];
        (*h)(i, j) = base * (d2q + dq[i] * l1[j] + dq[j] * l1[i] + q * d2b);
      }
  }

  void derivs(const Probe& p, std::span<const double> x, Vec& g, SymMat* h) const {
    using D2 = Dual<Dual<double>>;
    const double s = p.sign * x[p.axis] - p.offset;
    const D2 sv(Dual<double>(s, 1.0), Dual<double>(1.0, 0.0));
    const D2 r = probe_radial(p, sv);
    const double R = r.v.v, R1 = r.v.d, R2 = r.d.d;
    if (R == 0.0 && R1 == 0.0 && R2 == 0.0) return;
    Vec l1(n_), l1p(n_);
    const double B = bump_logderivs(p.center, p.widths, x, p.axis, l1, l1p);
    if (B == 0.0) return;
    const std::size_t k = p.axis;
    for (std::size_t i = 0; i < n_; ++i) g[i] = i == k ? p.sign * R1 * B : R * B * l1[i];
    if (!h) return;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        double v;
        if (i == k && j == k)
          v = R2 * B;
        else if (i == k)
          v = p.sign * R1 * B * l1[j];
        else if (j == k)
          v = p.sign * R1 * B * l1[i];
        else
          v = R * B * (i == j ? l1[i] * l1[i] + l1p[i] : l1[i] * l1[j]);
        (*h)(i, j) = v;
      }
  }

  void derivs(const PolyFn& f, std::span<const double> x, Vec& g, SymMat* h) const {
    for (std::size_t i = 0; i < n_; ++i) g[i] = f.q.d1[i](x);
    if (!h) return;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) (*h)(i, j) = f.q.d2[i][j](x);
  }

  std::variant<Bump, PolyBump, Probe, PolyFn> data_;
  std::size_t n_ = 0;
  double scale_ = 1.0;
};

/// Deterministic pseudo-random bumps with supports strictly inside `box`.
/// With `tilted`, each bump is multiplied by a random affine factor 1 + a.t
/// (|a|_1 < 1, so the factor stays positive) to break mirror symmetry.
inline std::vector<TestFunction> random_family(std::uint64_t seed, std::size_t count, const Box& box,
                                               bool tilted = false) {
  box.validate();
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const std::size_t n = box.dim();
  std::vector<TestFunction> out;
  out.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    Vec c(n), w(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double half = 0.5 * (box.hi[k] - box.lo[k]);
      w[k] = half * (0.2 + 0.3 * unit());
      // keep a margin so the closed support stays inside the open box
      const double lo = box.lo[k] + w[k] + 1e-3 * half;
      const double hi = box.hi[k] - w[k] - 1e-3 * half;
      c[k] = lo + (hi - lo) * unit();
    }
    if (!tilted) {
      out.push_back(TestFunction::bump(c, w));
      continue;
    }
    std::vector<Monomial> terms;
    terms.push_back({Exponents(n, 0), Rational(1)});
    for (std::size_t k = 0; k < n; ++k) {
      // a_k in {-3, ..., 3} / (4n): sum |a_k| <= 3/4
      const auto num = static_cast<std::int64_t>(rng() % 7) - 3;
      if (num == 0) continue;
      Exponents e(n, 0);
      e[k] = 1;
      terms.push_back({e, Rational(num, static_cast<std::int64_t>(4 * n))});
    }
    out.push_back(TestFunction::poly_bump(c, w, Polynomial::from_terms(n, std::move(terms))));
  }
  return out;
}

}  // namespace hardy
