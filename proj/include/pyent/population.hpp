#ifndef PYENT_POPULATION_HPP
#define PYENT_POPULATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pyent/classical.hpp"
#include "pyent/core.hpp"
#include "pyent/random.hpp"
#include "pyent/selection.hpp"

// Population generators for the simulation scenarios, multinomial sampling,
// and the exact (true-coverage) cross-entropy sweep used to study the upper
// bound against the real Kullback-Leibler gap.

namespace pyent {

struct PopulationSpec {
  enum class Kind { dirichlet_symmetric, dirichlet_mixed, zipf };
  Kind kind;
  std::int64_t k;      // number of species
  double a = 1.0;      // dirichlet_symmetric parameter
  double a_low = 0.1;  // dirichlet_mixed: first ceil(K/2) coordinates
  double a_high = 10.0;
  double s = 1.0;      // zipf exponent

  static PopulationSpec dirichlet_symmetric(std::int64_t k, double a) {
    PopulationSpec p{Kind::dirichlet_symmetric, k};
    p.a = a;
    return p;
  }
  static PopulationSpec dirichlet_mixed(std::int64_t k, double a_low, double a_high) {
    PopulationSpec p{Kind::dirichlet_mixed, k};
    p.a_low = a_low;
    p.a_high = a_high;
    return p;
  }
  static PopulationSpec zipf(std::int64_t k, double s) {
    PopulationSpec p{Kind::zipf, k};
    p.s = s;
    return p;
  }
};

/// Draws (or, for zipf, computes -- no rng is consumed) one population vector.
inline ProbabilityVector gen_population(const PopulationSpec& spec, Rng& rng) {
  if (spec.k < 1) throw std::invalid_argument("gen_population: K must be >= 1");
  ArrayX<double> p(spec.k);
  switch (spec.kind) {
    case PopulationSpec::Kind::dirichlet_symmetric: {
      ArrayX<double> shape = ArrayX<double>::Constant(spec.k, spec.a);
      p = rng.dirichlet(shape);
      break;
    }
    case PopulationSpec::Kind::dirichlet_mixed: {
      const Index half = Index((spec.k + 1) / 2);  // first half low, rounded up
      ArrayX<double> shape(spec.k);
      shape.head(half) = spec.a_low;
      shape.tail(spec.k - half) = spec.a_high;
      p = rng.dirichlet(shape);
      break;
    }
    case PopulationSpec::Kind::zipf: {
      for (Index i = 0; i < spec.k; ++i)
        p[i] = std::pow(double(i + 1), -spec.s);
      p /= kahan_sum(p);
      break;
    }
  }
  // Gamma draws can round to zero for very small shapes; nudge so the vector
  // stays strictly positive and renormalize.
  if ((p <= 0.0).any()) {
    p = p.max(1e-300);
    p /= kahan_sum(p);
  }
  return ProbabilityVector(std::move(p));
}

/// N iid categorical draws from p, returned as labeled counts aligned with p
/// (zeros mark unobserved species).
inline CountArray sample_labeled_counts(const ProbabilityVector& p, std::int64_t n,
                                        Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_labeled_counts: N must be >= 1");
  const AliasTable table(p.probs());
  CountArray counts = CountArray::Zero(p.size());
  for (std::int64_t i = 0; i < n; ++i) ++counts[table.draw(rng)];
  return counts;
}

/// The unlabeled view of a fresh sample: positive counts only.
inline FrequencyVector sample_counts(const ProbabilityVector& p, std::int64_t n,
                                     Rng& rng) {
  return frequency_from_counts(sample_labeled_counts(p, n, rng));
}

/// True coverage quantities of a labeled sample from p.
struct TrueCoverage {
  double c0;  // probability mass of unobserved species
  double c1;  // probability mass of singletons
};

inline TrueCoverage true_coverage(const ProbabilityVector& p, const CountArray& labeled) {
  if (labeled.size() != p.size())
    throw std::invalid_argument("true_coverage: labeled counts must align with p");
  KahanAccumulator<double> c0, c1;
  for (Index i = 0; i < p.size(); ++i) {
    if (labeled[i] == 0) c0.add(p[i]);
    if (labeled[i] == 1) c1.add(p[i]);
  }
  return {c0.value(), c1.value()};
}

/// Exact cross entropy H(p, q(d, alpha)) where q is the DPYM vector built
/// from the labeled sample and the unobserved species are assigned tail
/// slots in decreasing order of their true probability (the arrangement
/// under which the upper bound is guaranteed).
inline double dpym_cross_entropy_true(const ProbabilityVector& p,
                                      const CountArray& labeled, double d,
                                      double alpha) {
  if (labeled.size() != p.size())
    throw std::invalid_argument("dpym_cross_entropy_true: labeled counts must align with p");
  const double n = double(labeled.sum());
  const double denom = n + alpha;
  std::vector<double> unobserved;
  KahanAccumulator<double> acc;
  Index t = 0;
  for (Index i = 0; i < p.size(); ++i)
    if (labeled[i] > 0) ++t;
  for (Index i = 0; i < p.size(); ++i) {
    if (labeled[i] > 0)
      acc.add(-p[i] * std::log((double(labeled[i]) - d) / denom));
    else
      unobserved.push_back(p[i]);
  }
  std::sort(unobserved.begin(), unobserved.end(), std::greater<>());
  // tail entries follow the ladder product of the predictive distribution
  double log_q = std::log1p(-d) - std::log(denom);
  for (std::size_t r = 0; r < unobserved.size(); ++r) {
    const double rung = alpha + (double(t) + double(r)) * d;
    log_q += std::log(rung) - std::log1p(rung);
    acc.add(-unobserved[r] * log_q);
  }
  return acc.value();
}

struct CurvePoint {
  double alpha;
  double kl;         // D_KL(p || q(d, alpha))
  double bound_gap;  // f(d, alpha) - H(p), with true C0, C1, K
};

/// The two curves comparing the bound against the true divergence, over an
/// alpha grid at fixed d.
inline std::vector<CurvePoint> curve_sweep(const ProbabilityVector& p,
                                           const CountArray& labeled, double d,
                                           std::span<const double> alpha_grid) {
  const TrueCoverage cov = true_coverage(p, labeled);
  const double h_p = shannon_entropy(p);
  const std::int64_t n = labeled.sum();
  std::int64_t t = 0;
  for (Index i = 0; i < labeled.size(); ++i)
    if (labeled[i] > 0) ++t;

  std::vector<CurvePoint> out;
  out.reserve(alpha_grid.size());
  for (const double alpha : alpha_grid) {
    const double ce = dpym_cross_entropy_true(p, labeled, d, alpha);
    const double f =
        upper_bound_f(d, alpha, n, t, cov.c0, cov.c1, double(p.size()));
    out.push_back({alpha, ce - h_p, f - h_p});
  }
  return out;
}

}  // namespace pyent

#endif  // PYENT_POPULATION_HPP
