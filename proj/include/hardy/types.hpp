#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include <boost/container/small_vector.hpp>

namespace hardy {

/// Dense real vector. Inline storage covers every built-in group; larger
/// ambient dimensions spill to the heap.
class Vec : public boost::container::small_vector<double, 8> {
  using base = boost::container::small_vector<double, 8>;

public:
  using base::base;
  Vec(std::span<const double> s) : base(s.begin(), s.end()) {}

  operator std::span<const double>() const { return {data(), size()}; }
  operator std::span<double>() { return {data(), size()}; }
};

/// Coordinates of a group element, grouped by strata in ambient order.
using Point = Vec;

/// Raised when an argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is not defined for the given object
/// (e.g. a group law requested on a generic GroupSpec).
class UnsupportedOperation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Axis-aligned box, the integration domain for compactly supported integrands.
struct Box {
  Vec lo;
  Vec hi;

  std::size_t dim() const { return lo.size(); }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }

  /// Open-box membership.
  bool contains_open(std::span<const double> x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
    return true;
  }

  /// True when `inner` lies in the closure of this box.
  bool contains_box(const Box& inner) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
    return true;
  }

  void validate() const {
    if (lo.size() != hi.size() || lo.empty())
      throw PreconditionError("box: lo/hi dimension mismatch or empty");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(hi[i] > lo[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
        throw PreconditionError("box: empty or non-finite interval on axis " + std::to_string(i));
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Dense symmetric n x n matrix in row-major storage (Hessians).
struct SymMat {
  std::size_t n = 0;
  boost::container::small_vector<double, 64> a;

  explicit SymMat(std::size_t dim = 0) : n(dim), a(dim * dim, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

}  // namespace hardy
