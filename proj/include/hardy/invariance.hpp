#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hardy/dual.hpp"
#include "hardy/group.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/testfns.hpp"

namespace hardy {

/// |X_i(u o L_x)(y) - (X_i u)(x o y)|, with the left side differentiated
/// exactly along t -> u(x o (y + t X_i(y))).
inline double check_left_invariance(const GroupSpec& g, std::size_t i, const TestFunction& u,
                                    std::span<const double> x, std::span<const double> y) {
  check_generator(g, i);
  if (x.size() != g.n() || y.size() != g.n()) throw PreconditionError("check_left_invariance: dimension mismatch");
  using D = Dual<double>;
  const Vec field = vector_field_at(g, i, y);
  std::vector<D> xd(g.n()), yd(g.n());
  for (std::size_t k = 0; k < g.n(); ++k) {
    xd[k] = D(x[k]);
    yd[k] = D(y[k], field[k]);
  }
  const std::vector<D> moved = group_law<D>(g, xd, yd);
  const double lhs = u.evaluate<D>(moved).d;

  const Vec xy = group_law(g, x, y);
  const double rhs = apply_field(g, i, u, xy);
  return std::abs(lhs - rhs);
}

/// |int_box sum_k X_k f_k dz|. The fields X_k are divergence free, so the
/// integral vanishes for compactly supported f_k.
inline double check_divergence(const GroupSpec& g, const std::vector<TestFunction>& f, const Box& box,
                               const RuleSpec& rule = RuleSpec::gauss(48)) {
  if (f.size() != g.generators())
    throw PreconditionError("check_divergence: need one function per generator");
  box.validate();
  if (box.dim() != g.n()) throw PreconditionError("check_divergence: box dimension mismatch");
  for (const auto& fk : f) {
    if (fk.dim() != g.n()) throw PreconditionError("check_divergence: function dimension mismatch");
    const auto s = fk.support();
    if (!s || !box.contains_box(*s))
      throw PreconditionError("check_divergence: support is not contained in the box");
  }
  // The integrand of each term vanishes off its own support, so each term is
  // integrated over that support box at full resolution.
  double v = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    QuadratureRule q(rule, *f[k].support());
    v += integrate(q, [&](std::span<const double> z) { return apply_field(g, k, f[k], z); });
  }
  return std::abs(v);
}

}  // namespace hardy
