#ifndef PYENT_PYP_HPP
#define PYENT_PYP_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pyent/core.hpp"
#include "pyent/random.hpp"

// Marginal Pitman-Yor process: the law of a single draw from a PY(d, alpha)
// weight sequence. Geometric for d = 0, Waring (discrete power law) for
// d > 0. Provides the pmf, a tail-corrected Shannon entropy, stick-breaking
// samplers and a regular-variation diagnostic.

namespace pyent {

namespace detail {

// std::lgamma writes the signgam global on glibc; use the re-entrant form.
inline double log_gamma(double x) {
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace detail

/// Pitman-Yor hyperparameters: discount d in [0,1), concentration alpha > -d.
struct PyParams {
  double d;
  double alpha;

  PyParams(double d_, double alpha_) : d(d_), alpha(alpha_) {
    if (!(d >= 0.0 && d < 1.0))
      throw std::invalid_argument("PyParams: discount must be in [0,1)");
    if (!(alpha > -d))
      throw std::invalid_argument("PyParams: concentration must be > -d");
  }
};

/// log pmf of the marginal PYP at category k >= 1.
///
/// For d > 0 the Waring form is evaluated through log-gamma differences,
/// written so every gamma argument stays positive for alpha in (-d, inf):
///   log pmf(k) = log(1-d) - log d + lg(a+k) - lg(a+1) + lg(b) - lg(b+k)
/// with a = alpha/d, b = (alpha+1)/d. No underflow up to k ~ 1e9.
inline double mpy_log_pmf(const PyParams& p, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("mpy_log_pmf: k must be >= 1");
  if (p.d == 0.0) {
    // geometric with success probability 1/(alpha+1)
    return -std::log1p(p.alpha) +
           double(k - 1) * (std::log(p.alpha) - std::log1p(p.alpha));
  }
  const double a = p.alpha / p.d;
  const double b = (p.alpha + 1.0) / p.d;
  return std::log1p(-p.d) - std::log(p.d) + detail::log_gamma(a + double(k)) -
         detail::log_gamma(a + 1.0) + detail::log_gamma(b) -
         detail::log_gamma(b + double(k));
}

inline double mpy_pmf(const PyParams& p, std::int64_t k) {
  return std::exp(mpy_log_pmf(p, k));
}

struct MpyEntropyResult {
  double value;               // nats
  std::int64_t truncation_n;  // partial-sum length actually used
  double remainder_bound;     // heuristic scale of the neglected term
};

/// Shannon entropy of the marginal PYP.
///
/// d = 0 has the closed form (1+a)log(1+a) - a log a. For d > 0 the infinite
/// sum is truncated at truncation_n and the tail is replaced by its
/// integral approximation; the neglected term shrinks like n^{-1/d} log n.
/// remainder_bound reports 2n|s_n| n^{-1/d} log n with s_n the last
/// partial-sum term, a computable proxy for that remainder (heuristic, not
/// a certified bound).
inline MpyEntropyResult mpy_entropy(const PyParams& p, std::int64_t truncation_n) {
  if (p.d == 0.0) {
    const double a = p.alpha;
    const double v = (1.0 + a) * std::log1p(a) - a * std::log(a);
    return {v, truncation_n, 0.0};
  }
  if (truncation_n < 10)
    throw std::invalid_argument("mpy_entropy: truncation_n < 10 is outside the approximation regime");

  const double d = p.d;
  const double a = p.alpha / d;
  const double b = (p.alpha + 1.0) / d;
  const double log_pref = std::log1p(-d) - std::log(d) + detail::log_gamma(b) -
                          detail::log_gamma(a + 1.0);

  KahanAccumulator<double> sum;  // sum of pmf(k) * log R_k
  double last_term = 0.0;
  for (std::int64_t k = 1; k <= truncation_n; ++k) {
    const double log_ratio =
        detail::log_gamma(a + double(k)) - detail::log_gamma(b + double(k));
    last_term = std::exp(log_pref + log_ratio) * log_ratio;
    sum.add(last_term);
  }

  // Tail correction: the neglected sum behaves like the integral of
  // u^{-1/d} log u. The gamma ratio satisfies G(k+a)/G(k+b) ~
  // (k + (a+b-1)/2)^{a-b} to O(1/k^2), so centering the integral at
  // u0 = n + 1/2 + (a+b-1)/2 keeps the correction accurate even when
  // alpha/d is large relative to n (the naive n+1 center needs n >> alpha/d
  // and can be off by whole nats below that). Assembled in log space so
  // extreme parameter ratios cannot overflow.
  const double u0 = double(truncation_n) + 0.5 + 0.5 * (a + b - 1.0);
  const double log_u0 = std::log(u0);
  const double log_scale = log_pref + (d - 1.0) / d * log_u0;
  if (log_scale > 700.0)
    throw std::domain_error("mpy_entropy: truncation_n too small for these parameters");
  const double bracket = log_u0 / (d - 1.0) - d / ((d - 1.0) * (d - 1.0));
  const double value = -log_pref - sum.value() - std::exp(log_scale) * bracket;

  const double n = double(truncation_n);
  const double remainder =
      2.0 * std::abs(last_term) * n * std::pow(n, -1.0 / d) * std::log(n);
  return {value, truncation_n, remainder};
}

/// f(lambda t)/f(t) for the step extension f(t) = pmf(ceil t); converges to
/// lambda^{-1/d} as t grows. Diagnostic only.
inline double tail_ratio(const PyParams& p, double t, double lambda) {
  if (p.d <= 0.0) throw std::invalid_argument("tail_ratio: requires d > 0");
  if (!(t >= 1.0) || !(lambda > 0.0))
    throw std::invalid_argument("tail_ratio: need t >= 1 and lambda > 0");
  const auto cat = [](double x) { return std::int64_t(std::ceil(x)); };
  return std::exp(mpy_log_pmf(p, cat(lambda * t)) - mpy_log_pmf(p, cat(t)));
}

/// Stick-breaking draw of PY(d, alpha) weights, truncated once the residual
/// stick is below mass_tol. Returned weights sum to >= 1 - mass_tol.
/// Heavy tails (d close to 1) need many sticks; a hard cap guards runaway
/// loops and throws if reached first.
inline std::vector<double> stick_breaking_sample(const PyParams& p, Rng& rng,
                                                 double mass_tol) {
  if (!(mass_tol > 0.0 && mass_tol < 1.0))
    throw std::invalid_argument("stick_breaking_sample: mass_tol must be in (0,1)");
  constexpr std::int64_t kMaxSticks = 10'000'000;
  std::vector<double> w;
  double residual = 1.0;
  for (std::int64_t i = 1; i <= kMaxSticks; ++i) {
    const double v = rng.beta(1.0 - p.d, p.alpha + double(i) * p.d);
    w.push_back(v * residual);
    residual *= 1.0 - v;
    if (residual < mass_tol) return w;
  }
  throw std::runtime_error("stick_breaking_sample: stick cap reached before mass_tol");
}

/// One draw of Z ~ marginal PYP via the sequential stick walk, without
/// materializing weights: at stick i, stop with probability V_i. Categories
/// beyond max_category are collapsed to max_category + 1, which keeps the
/// walk finite even for heavy tails where E[Z] diverges.
inline std::int64_t mpy_draw(const PyParams& p, Rng& rng, std::int64_t max_category) {
  for (std::int64_t i = 1; i <= max_category; ++i) {
    const double v = rng.beta(1.0 - p.d, p.alpha + double(i) * p.d);
    if (rng.uniform01() < v) return i;
  }
  return max_category + 1;
}

}  // namespace pyent

#endif  // PYENT_PYP_HPP
