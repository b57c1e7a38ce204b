#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "hardy/hardy_engine.hpp"

namespace hardy {

struct SweepResult {
  std::vector<double> grid;
  std::vector<double> values;
  double argmax = 0.0;
  double max = -std::numeric_limits<double>::infinity();
  /// Golden-section refinement around the grid argmax, when requested.
  std::optional<double> refined_argmax;
  std::optional<double> refined_max;
};

/// Evaluates `objective` on lo, lo + step, ..., up to hi; ties go to the lowest beta.
inline SweepResult sweep_beta(const std::function<double(double)>& objective, double lo, double hi, double step,
                              bool refine = false) {
  if (!(lo < hi) || !(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw PreconditionError("sweep_beta: need lo < hi and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  SweepResult r;
  r.grid.reserve(count);
  r.values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double b = lo + static_cast<double>(k) * step;
    const double v = objective(b);
    r.grid.push_back(b);
    r.values.push_back(v);
    if (v > r.max) {
      r.max = v;
      r.argmax = b;
    }
  }
  if (r.grid.empty()) throw PreconditionError("sweep_beta: empty grid");
  if (refine) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(lo, r.argmax - step), b = std::min(hi, r.argmax + step);
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < 200 && b - a > 1e-12 * (1.0 + std::abs(a)); ++it) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = objective(d);
      }
    }
    const double x = 0.5 * (a + b);
    const double fx = objective(x);
    // keep the grid point if refinement did not improve on it
    if (fx >= r.max) {
      r.refined_argmax = x;
      r.refined_max = fx;
    } else {
      r.refined_argmax = r.argmax;
      r.refined_max = r.max;
    }
  }
  return r;
}

struct Quotient {
  double value = 0.0;
  double error = 0.0;
  double numerator = 0.0;    // int |grad_G u|^2
  double denominator = 0.0;  // int u^2/dist^2
};

/// int |grad_G u|^2 / int u^2/dist^2 with a propagated quadrature error.
inline Quotient rayleigh_quotient(const GroupSpec& g, const HalfSpace& h, const TestFunction& u,
                                  const RuleSpec& rule) {
  const HardyEvaluator ev(g, h, rule);
  const auto I = ev.l2(u);
  Quotient q;
  q.numerator = I.value[kGrad2];
  q.denominator = I.value[kMassDist2];
  if (!(q.denominator > 0.0)) throw PreconditionError("rayleigh_quotient: zero denominator (u vanishes)");
  q.value = q.numerator / q.denominator;
  q.error = std::abs(q.value) * (I.error[kGrad2] / std::max(std::abs(q.numerator), 1e-300) +
                                 I.error[kMassDist2] / q.denominator);
  return q;
}

struct ProbeResult {
  std::vector<Quotient> quotients;
  std::size_t argmin = 0;
  double min = std::numeric_limits<double>::infinity();
  double min_error = 0.0;
};

/// Lowest Rayleigh quotient over a family of trial functions.
inline ProbeResult probe_constant(const GroupSpec& g, const HalfSpace& h, const std::vector<TestFunction>& family,
                                  const RuleSpec& rule) {
  if (family.empty()) throw PreconditionError("probe_constant: empty family");
  ProbeResult r;
  for (std::size_t k = 0; k < family.size(); ++k) {
    r.quotients.push_back(rayleigh_quotient(g, h, family[k], rule));
    if (r.quotients.back().value < r.min) {
      r.min = r.quotients.back().value;
      r.min_error = r.quotients.back().error;
      r.argmin = k;
    }
  }
  return r;
}

}  // namespace hardy
