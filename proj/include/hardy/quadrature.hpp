#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hardy/types.hpp"

namespace hardy {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline Rule1D gauss_legendre(std::size_t n) {
  if (n == 0) throw PreconditionError("gauss_legendre: need at least one node");
  Rule1D r{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                        static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

/// Gauss-Jacobi rule for the weight (1 + x)^b on [-1, 1], b > -1 (Golub-Welsch).
inline Rule1D gauss_jacobi_lower(std::size_t n, double b) {
  if (n == 0) throw PreconditionError("gauss_jacobi: need at least one node");
  if (!(b > -1.0)) throw PreconditionError("gauss_jacobi: exponent must exceed -1");
  const double a = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    const double diag = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = diag;
    if (k + 1 < n) {
      const double m = kk + 1.0;
      const double t = 2.0 * m + a + b;
      const double beta = 4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = std::sqrt(beta);
      J(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  Rule1D r{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    r.nodes[k] = es.eigenvalues()(kk);
    const double v0 = es.eigenvectors()(0, kk);
    r.weights[k] = mu0 * v0 * v0;
  }
  return r;
}

/// Integration rule family, independent of the integration box.
struct RuleSpec {
  enum class Kind { gauss, riemann, montecarlo };
  Kind kind = Kind::gauss;
  std::size_t nodes = 32;          // per axis (gauss, riemann)
  std::size_t samples = 2000000;   // montecarlo
  std::uint64_t seed = 7;          // montecarlo

  static RuleSpec gauss(std::size_t n) { return {Kind::gauss, n, 0, 0}; }
  static RuleSpec riemann(std::size_t n) { return {Kind::riemann, n, 0, 0}; }
  static RuleSpec montecarlo(std::size_t samples, std::uint64_t seed) { return {Kind::montecarlo, 0, samples, seed}; }

  /// Gauss 32/axis up to dimension 4, Monte Carlo 2e6 samples beyond.
  static RuleSpec default_for(std::size_t dim) { return dim <= 4 ? gauss(32) : montecarlo(2000000, 7); }

  std::string describe() const {
    switch (kind) {
      case Kind::gauss: return "gauss" + std::to_string(nodes);
      case Kind::riemann: return "riemann" + std::to_string(nodes);
      case Kind::montecarlo: return "montecarlo" + std::to_string(samples) + "s" + std::to_string(seed);
    }
    return "?";
  }

  /// Next-coarser rule of the same family, used for error estimation.
  RuleSpec coarser() const {
    RuleSpec c = *this;
    if (kind == Kind::montecarlo)
      c.samples = std::max<std::size_t>(samples / 2, 1);
    else
      c.nodes = std::max<std::size_t>(nodes * 3 / 4, 1);
    return c;
  }

  /// Next-finer rule (doubling).
  RuleSpec finer() const {
    RuleSpec c = *this;
    if (kind == Kind::montecarlo)
      c.samples = samples * 2;
    else
      c.nodes = nodes * 2;
    return c;
  }
};

/// Product-integration grading for an integrand ~ s^exponent * smooth near one
/// end of one axis (s = distance to that end).
struct EndpointGrading {
  std::size_t axis;
  bool at_lower;
  double exponent;  // > -1
};

/// A concrete node/weight set over a box.
class QuadratureRule {
public:
  QuadratureRule(const RuleSpec& spec, Box box, std::optional<EndpointGrading> grading = std::nullopt)
      : spec_(spec), box_(std::move(box)), grading_(grading) {
    box_.validate();
    if (spec_.kind == RuleSpec::Kind::montecarlo) {
      if (spec_.samples == 0) throw PreconditionError("quadrature: montecarlo needs samples > 0");
      if (grading_) throw PreconditionError("quadrature: endpoint grading requires a tensor rule");
      return;
    }
    if (spec_.nodes == 0) throw PreconditionError("quadrature: nodes must be positive");
    axes_.resize(box_.dim());
    for (std::size_t k = 0; k < box_.dim(); ++k) {
      const double lo = box_.lo[k], hi = box_.hi[k];
      const double half = 0.5 * (hi - lo);
      Rule1D ref;
      if (grading_ && grading_->axis == k && spec_.kind == RuleSpec::Kind::gauss) {
        // nodes/weights exact for (1+t)^b * poly; dividing the weights by the
        // weight function turns them into plain weights for s^b * smooth.
        ref = gauss_jacobi_lower(spec_.nodes, grading_->exponent);
        for (std::size_t i = 0; i < ref.nodes.size(); ++i)
          ref.weights[i] /= std::pow(1.0 + ref.nodes[i], grading_->exponent);
        if (!grading_->at_lower)
          for (double& t : ref.nodes) t = -t;
      } else if (spec_.kind == RuleSpec::Kind::gauss) {
        ref = gauss_legendre(spec_.nodes);
      } else {
        ref.nodes.resize(spec_.nodes);
        ref.weights.assign(spec_.nodes, 2.0 / static_cast<double>(spec_.nodes));
        for (std::size_t i = 0; i < spec_.nodes; ++i)
          ref.nodes[i] = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(spec_.nodes);
      }
      Rule1D& ax = axes_[k];
      ax.nodes.resize(ref.nodes.size());
      ax.weights.resize(ref.nodes.size());
      for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
        ax.nodes[i] = lo + half * (ref.nodes[i] + 1.0);
        ax.weights[i] = half * ref.weights[i];
      }
    }
  }

  const RuleSpec& spec() const { return spec_; }
  const Box& box() const { return box_; }
  const std::optional<EndpointGrading>& grading() const { return grading_; }
  const std::vector<Rule1D>& axes() const { return axes_; }

  std::size_t size() const {
    if (spec_.kind == RuleSpec::Kind::montecarlo) return spec_.samples;
    std::size_t s = 1;
    for (const auto& a : axes_) s *= a.nodes.size();
    return s;
  }

  double weight_sum() const {
    if (spec_.kind == RuleSpec::Kind::montecarlo) return box_.volume();
    double s = 1.0;
    for (const auto& a : axes_) {
      double t = 0.0;
      for (double w : a.weights) t += w;
      s *= t;
    }
    return s;
  }

private:
  RuleSpec spec_;
  Box box_;
  std::optional<EndpointGrading> grading_;
  std::vector<Rule1D> axes_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Worker count from HARDY_THREADS (default: hardware concurrency).
inline std::size_t thread_count() {
  if (const char* env = std::getenv("HARDY_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs chunk(c) for c in [0, chunks) across worker threads. Each chunk writes
/// only its own slot, so results do not depend on the thread count.
template <class Chunk>
void parallel_chunks(std::size_t chunks, std::size_t work, Chunk&& chunk) {
  const std::size_t threads = std::min(thread_count(), chunks);
  if (threads <= 1 || work < 20000) {
    for (std::size_t c = 0; c < chunks; ++c) chunk(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < chunks; c += threads) chunk(c);
    });
  for (auto& th : pool) th.join();
}

template <class R>
struct ResultTraits;

template <>
struct ResultTraits<double> {
  static constexpr std::size_t size = 1;
  static double get(double v, std::size_t) { return v; }
};

template <std::size_t K>
struct ResultTraits<std::array<double, K>> {
  static constexpr std::size_t size = K;
  static double get(const std::array<double, K>& v, std::size_t i) { return v[i]; }
};

}  // namespace detail

/// Weighted node sums of a vector-valued integrand, plus the sample second
/// moment for Monte Carlo error estimates.
template <std::size_t K>
struct Sums {
  std::array<double, K> value{};
  std::array<double, K> mc_stderr{};
};

/// Integrates f over the rule's box; f returns double or std::array<double, K>.
template <class F>
auto integrate_all(const QuadratureRule& rule, F&& f) {
  using R = std::decay_t<decltype(f(std::declval<std::span<const double>>()))>;
  constexpr std::size_t K = detail::ResultTraits<R>::size;
  const Box& box = rule.box();
  const std::size_t n = box.dim();
  Sums<K> out;

  if (rule.spec().kind == RuleSpec::Kind::montecarlo) {
    const std::size_t total = rule.spec().samples;
    const std::size_t block = 4096;
    const std::size_t chunks = (total + block - 1) / block;
    std::vector<std::array<double, K>> s1(chunks), s2(chunks);
    detail::parallel_chunks(chunks, total, [&](std::size_t c) {
      Vec x(n);
      std::array<double, K> a{}, b{};
      const std::size_t end = std::min(total, (c + 1) * block);
      for (std::size_t idx = c * block; idx < end; ++idx) {
        for (std::size_t k = 0; k < n; ++k) {
          const std::uint64_t h = detail::splitmix64(rule.spec().seed ^ detail::splitmix64(idx * n + k));
          const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
          x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * u;
        }
        const R v = f(std::span<const double>(x));
        for (std::size_t i = 0; i < K; ++i) {
          const double vi = detail::ResultTraits<R>::get(v, i);
          a[i] += vi;
          b[i] += vi * vi;
        }
      }
      s1[c] = a;
      s2[c] = b;
    });
    std::array<double, K> m1{}, m2{};
    for (std::size_t c = 0; c < chunks; ++c)
      for (std::size_t i = 0; i < K; ++i) {
        m1[i] += s1[c][i];
        m2[i] += s2[c][i];
      }
    const double vol = box.volume();
    const auto N = static_cast<double>(total);
    for (std::size_t i = 0; i < K; ++i) {
      const double mean = m1[i] / N;
      const double var = std::max(0.0, m2[i] / N - mean * mean);
      out.value[i] = vol * mean;
      out.mc_stderr[i] = vol * std::sqrt(var / N);
    }
    return out;
  }

  const auto& axes = rule.axes();
  const std::size_t outer = axes[0].nodes.size();
  const std::size_t total = rule.size();
  std::vector<std::array<double, K>> partial(outer);
  detail::parallel_chunks(outer, total, [&](std::size_t c) {
    Vec x(n);
    std::vector<std::size_t> idx(n, 0);
    idx[0] = c;
    std::array<double, K> acc{};
    const std::size_t inner = total / outer;
    for (std::size_t step = 0; step < inner; ++step) {
      double w = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = axes[k].nodes[idx[k]];
        w *= axes[k].weights[idx[k]];
      }
      const R v = f(std::span<const double>(x));
      for (std::size_t i = 0; i < K; ++i) acc[i] += w * detail::ResultTraits<R>::get(v, i);
      // odometer over axes 1..n-1
      for (std::size_t k = n; k-- > 1;) {
        if (++idx[k] < axes[k].nodes.size()) break;
        idx[k] = 0;
      }
    }
    partial[c] = acc;
  });
  for (std::size_t c = 0; c < outer; ++c)
    for (std::size_t i = 0; i < K; ++i) out.value[i] += partial[c][i];
  return out;
}

/// Weighted node sum of a scalar integrand.
template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  return integrate_all(rule, [&](std::span<const double> x) { return static_cast<double>(f(x)); }).value[0];
}

template <std::size_t K>
struct Estimate {
  std::array<double, K> value{};
  std::array<double, K> error{};
};

/// Value on `rule` with an error estimate per component: |I(rule) - I(coarser)|
/// for tensor rules, three standard errors for Monte Carlo.
template <class F>
auto estimate(const RuleSpec& spec, const Box& box, std::optional<EndpointGrading> grading, F&& f) {
  QuadratureRule fine(spec, box, grading);
  auto a = integrate_all(fine, f);
  constexpr std::size_t K = std::tuple_size_v<decltype(a.value)>;
  Estimate<K> e;
  e.value = a.value;
  if (spec.kind == RuleSpec::Kind::montecarlo) {
    for (std::size_t i = 0; i < K; ++i) e.error[i] = 3.0 * a.mc_stderr[i];
    return e;
  }
  QuadratureRule coarse(spec.coarser(), box, grading);
  auto b = integrate_all(coarse, f);
  for (std::size_t i = 0; i < K; ++i) e.error[i] = std::abs(a.value[i] - b.value[i]);
  return e;
}

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<double> levels;     // value at each refinement level
  std::vector<double> estimates;  // |difference| between consecutive levels
};

/// Evaluates f on `refine + 1` successively doubled rules; the value is the
/// finest one and the error estimate the last difference.
template <class F>
AdaptiveResult integrate_adaptive(const QuadratureRule& rule, F&& f, int refine) {
  if (refine < 1) throw PreconditionError("integrate_adaptive: refine must be >= 1");
  AdaptiveResult r;
  RuleSpec spec = rule.spec();
  for (int level = 0; level <= refine; ++level) {
    QuadratureRule q(spec, rule.box(), rule.grading());
    r.levels.push_back(integrate(q, f));
    if (level > 0) r.estimates.push_back(std::abs(r.levels[static_cast<std::size_t>(level)] -
                                                  r.levels[static_cast<std::size_t>(level) - 1]));
    spec = spec.finer();
  }
  r.value = r.levels.back();
  r.error_estimate = r.estimates.back();
  return r;
}

}  // namespace hardy
