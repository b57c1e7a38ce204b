#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hardy/group.hpp"
#include "hardy/types.hpp"

namespace hardy {

/// Half-space {x : <x, nu> > d}; the boundary distance is <x, nu> - d.
struct HalfSpace {
  Vec nu;
  double d = 0.0;

  HalfSpace(Vec normal, double offset) : nu(std::move(normal)), d(offset) {
    if (nu.empty()) throw PreconditionError("halfspace: empty normal");
    if (std::abs(norm(nu) - 1.0) > 1e-12) throw PreconditionError("halfspace: normal is not a unit vector");
  }

  /// The same set {<x, normal> > offset} with the normal rescaled to unit length.
  static HalfSpace normalized(Vec normal, double offset) {
    const double len = norm(normal);
    if (!(len > 0.0)) throw PreconditionError("halfspace: zero normal");
    for (double& v : normal) v /= len;
    return HalfSpace(std::move(normal), offset / len);
  }
};

inline double dist_halfspace(const HalfSpace& h, std::span<const double> x) { return dot(x, h.nu) - h.d; }

/// Minimum of <x, nu> - d over the closed box.
inline double min_dist_over_box(std::span<const double> nu, double d, const Box& box) {
  double s = -d;
  for (std::size_t k = 0; k < nu.size(); ++k) s += nu[k] * (nu[k] >= 0.0 ? box.lo[k] : box.hi[k]);
  return s;
}

inline void check_dims(const GroupSpec& g, std::span<const double> nu) {
  if (nu.size() != g.n())
    throw PreconditionError("normal has dimension " + std::to_string(nu.size()) + ", group has " +
                            std::to_string(g.n()));
}

/// <X_i(x), nu>.
inline double normal_pairing(const GroupSpec& g, std::size_t i, std::span<const double> nu,
                             std::span<const double> x) {
  const auto& fr = g.frame(i);
  double s = 0.0;
  for (std::size_t k = 0; k < g.n(); ++k)
    if (nu[k] != 0.0 && !fr[k].is_zero()) s += fr[k](x) * nu[k];
  return s;
}

/// W(x) = sqrt(sum_i <X_i(x), nu>^2).
inline double angle_W(const GroupSpec& g, const HalfSpace& h, std::span<const double> x) {
  check_dims(g, h.nu);
  double s = 0.0;
  for (std::size_t i = 0; i < g.generators(); ++i) {
    const double c = normal_pairing(g, i, h.nu, x);
    s += c * c;
  }
  return std::sqrt(s);
}

/// W_p(x) = (sum_i |<X_i(x), nu>|^p)^(1/p), p > 1.
inline double angle_Wp(const GroupSpec& g, const HalfSpace& h, std::span<const double> x, double p) {
  if (!(p > 1.0)) throw PreconditionError("angle_Wp: p must exceed 1");
  check_dims(g, h.nu);
  double s = 0.0;
  for (std::size_t i = 0; i < g.generators(); ++i) s += std::pow(std::abs(normal_pairing(g, i, h.nu, x)), p);
  return std::pow(s, 1.0 / p);
}

/// X_i <X_i(x), nu>, evaluated from the exact frame derivatives.
inline double field_normal_derivative(const GroupSpec& g, std::span<const double> nu, std::size_t i,
                                      std::span<const double> x) {
  check_generator(g, i);
  const auto& dk = g.frame_derivative(i);
  double s = 0.0;
  for (std::size_t b = 0; b < g.n(); ++b)
    if (nu[b] != 0.0 && !dk[b].is_zero()) s += dk[b](x) * nu[b];
  return s;
}

inline double field_normal_derivative(const GroupSpec& g, const HalfSpace& h, std::size_t i,
                                      std::span<const double> x) {
  check_dims(g, h.nu);
  return field_normal_derivative(g, std::span<const double>(h.nu), i, x);
}

/// The polynomial x -> X_i <X_i(x), nu> for a rational normal.
inline Polynomial field_normal_derivative_poly(const GroupSpec& g, std::span<const Rational> nu, std::size_t i) {
  check_generator(g, i);
  if (nu.size() != g.n()) throw PreconditionError("normal dimension mismatch");
  Polynomial pairing(g.n());
  for (std::size_t k = 0; k < g.n(); ++k)
    if (nu[k].numerator() != 0) pairing = pairing + g.frame(i)[k] * nu[k];
  return g.apply_to_polynomial(i, pairing);
}

/// Exact X_i <X_i(x), nu> at a rational point.
inline Rational field_normal_derivative_exact(const GroupSpec& g, std::span<const Rational> nu, std::size_t i,
                                              std::span<const Rational> x) {
  return field_normal_derivative_poly(g, nu, i).evaluate<Rational>(x);
}

/// K(a, nu, beta) = beta * sum_s sum_i a[s][i][i] nu''_s for a step-2 group.
inline double step2_K_constant(const GroupSpec& g, std::span<const double> nu, double beta) {
  const Step2Constants a = step2_constants(g);
  check_dims(g, nu);
  const std::size_t N = g.generators();
  double s = 0.0;
  for (std::size_t sidx = 0; sidx < a.size(); ++sidx)
    for (std::size_t i = 0; i < N; ++i) s += to_double(a[sidx][i][i]) * nu[N + sidx];
  return beta * s;
}

// ---------------------------------------------------------------------------
// Convex polytopes
// ---------------------------------------------------------------------------

/// Facet {<x, nu> = d} with inward unit normal nu.
struct Facet {
  Vec nu;
  double d = 0.0;
};

/// Intersection of the open half-spaces {<x, nu_j> > d_j}; certified nonempty by
/// a caller-supplied interior witness.
class ConvexPolytope {
public:
  ConvexPolytope(std::vector<Facet> facets, Vec witness) : facets_(std::move(facets)), witness_(std::move(witness)) {
    if (facets_.empty()) throw PreconditionError("polytope: no facets");
    for (std::size_t j = 0; j < facets_.size(); ++j) {
      if (facets_[j].nu.size() != witness_.size())
        throw PreconditionError("polytope: facet " + std::to_string(j) + " has wrong dimension");
      if (std::abs(norm(facets_[j].nu) - 1.0) > 1e-12)
        throw PreconditionError("polytope: facet " + std::to_string(j) + " normal is not a unit vector");
      if (!(dot(witness_, facets_[j].nu) - facets_[j].d > 0.0))
        throw PreconditionError("polytope: witness is not interior to facet " + std::to_string(j));
    }
  }

  std::size_t dim() const { return witness_.size(); }
  const std::vector<Facet>& facets() const { return facets_; }
  const Vec& witness() const { return witness_; }

  double facet_distance(std::size_t j, std::span<const double> x) const {
    return dot(x, facets_[j].nu) - facets_[j].d;
  }

  bool contains(std::span<const double> x) const {
    for (std::size_t j = 0; j < facets_.size(); ++j)
      if (!(facet_distance(j, x) > 0.0)) return false;
    return true;
  }

  /// Smallest facet distance over the closed box; positive iff the box is interior.
  double min_dist_over_box(const Box& box) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : facets_) m = std::min(m, hardy::min_dist_over_box(f.nu, f.d, box));
    return m;
  }

private:
  std::vector<Facet> facets_;
  Vec witness_;
};

struct NearestFacet {
  std::size_t index;
  double dist;
};

/// Facet realizing dist(x, boundary); lowest index wins ties.
inline NearestFacet nearest_facet(const ConvexPolytope& p, std::span<const double> x) {
  NearestFacet best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < p.facets().size(); ++j) {
    const double dj = p.facet_distance(j, x);
    if (dj < best.dist) best = {j, dj};
  }
  if (!(best.dist > 0.0)) throw PreconditionError("nearest_facet: point is not interior to the polytope");
  return best;
}

struct InterfaceNormal {
  Vec n;       // unit normal of Gamma_jl pointing from Omega_j into Omega_l
  double gap;  // |nu_j - nu_l| = sqrt(2 - 2 cos alpha_jl)
};

inline InterfaceNormal interface_normal(std::span<const double> nu_j, std::span<const double> nu_l) {
  if (nu_j.size() != nu_l.size()) throw PreconditionError("interface_normal: dimension mismatch");
  Vec diff(nu_j.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = nu_j[k] - nu_l[k];
  const double gap = norm(diff);
  if (!(gap > 1e-12)) throw PreconditionError("interface_normal: coincident normals");
  for (double& v : diff) v /= gap;
  return {diff, gap};
}

/// Samples points of the interface Gamma_jl (both facets nearest) inside `box`.
/// Candidates are drawn uniformly in the box and projected onto the hyperplane
/// <x, nu_j - nu_l> = d_j - d_l. Returns fewer than `count` points only when
/// the interface does not meet the box within the attempt budget.
inline std::vector<Vec> sample_interface(const ConvexPolytope& p, std::size_t j, std::size_t l, std::size_t count,
                                         const Box& box, std::uint64_t seed, std::size_t max_attempts = 0) {
  if (j == l) throw PreconditionError("sample_interface: a facet has no interface with itself");
  if (j >= p.facets().size() || l >= p.facets().size()) throw PreconditionError("sample_interface: facet index");
  const auto& fj = p.facets()[j];
  const auto& fl = p.facets()[l];
  const auto in = interface_normal(fj.nu, fl.nu);
  const double rhs = fj.d - fl.d;
  if (max_attempts == 0) max_attempts = 200 * count + 1000;

  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec> out;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    Vec x(p.dim());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * unit();
    // project onto the hyperplane <x, n> * gap = rhs
    const double off = dot(x, in.n) - rhs / in.gap;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] -= off * in.n[k];
    if (!box.contains_open(x) || !p.contains(x)) continue;
    const double dj = p.facet_distance(j, x);
    bool nearest = true;
    for (std::size_t m = 0; m < p.facets().size() && nearest; ++m)
      if (m != j && m != l && p.facet_distance(m, x) < dj) nearest = false;
    if (nearest) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace hardy
