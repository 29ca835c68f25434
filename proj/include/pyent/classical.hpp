#ifndef PYENT_CLASSICAL_HPP
#define PYENT_CLASSICAL_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "pyent/core.hpp"

// Classical entropy estimators over unlabeled frequency data, plus the
// Good-Turing coverage plug-ins that drive hyperparameter selection.

namespace pyent {

using CountArray = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;

/// Observed unlabeled sample: positive per-species counts n_1..n_T with
/// derived sample size N, species count T and singleton count m1.
class FrequencyVector {
 public:
  explicit FrequencyVector(CountArray counts) : counts_(std::move(counts)) {
    if (counts_.size() == 0)
      throw std::invalid_argument("FrequencyVector: no observed species");
    if (!(counts_ >= 1).all())
      throw std::invalid_argument("FrequencyVector: counts must be >= 1");
    n_ = counts_.sum();
    m1_ = (counts_ == 1).count();
  }

  const CountArray& counts() const { return counts_; }
  std::int64_t sample_size() const { return n_; }             // N
  std::int64_t species() const { return counts_.size(); }     // T
  std::int64_t singletons() const { return m1_; }             // m1

  /// Singleton count with the all-singletons repair: if m1 = N, use N-1 so
  /// the Good-Turing coverage stays < 1 and every downstream formula is
  /// finite. The degenerate case is otherwise undefined.
  std::int64_t clamped_singletons() const { return m1_ == n_ ? n_ - 1 : m1_; }

 private:
  CountArray counts_;
  std::int64_t n_ = 0;
  std::int64_t m1_ = 0;
};

/// Builds a FrequencyVector from raw (possibly labeled) counts. Zero entries
/// denote unobserved labels and are dropped; dropped_zeros reports how many,
/// since species-by-site tables legitimately contain zeros.
inline FrequencyVector frequency_from_counts(const CountArray& raw,
                                             std::int64_t* dropped_zeros = nullptr) {
  if ((raw < 0).any())
    throw std::invalid_argument("frequency_from_counts: negative count");
  const Index kept = (raw > 0).count();
  if (kept == 0)
    throw std::invalid_argument("frequency_from_counts: no positive counts");
  CountArray counts(kept);
  Index j = 0;
  for (Index i = 0; i < raw.size(); ++i)
    if (raw[i] > 0) counts[j++] = raw[i];
  if (dropped_zeros) *dropped_zeros = raw.size() - kept;
  return FrequencyVector(std::move(counts));
}

/// Plug-in estimate: -sum (n_i/N) log(n_i/N).
inline double mle_entropy(const FrequencyVector& y) {
  const double n = double(y.sample_size());
  KahanAccumulator<double> acc;
  for (Index i = 0; i < y.counts().size(); ++i) {
    const double p = double(y.counts()[i]) / n;
    acc.add(-p * std::log(p));
  }
  return acc.value();
}

/// Bias-corrected plug-in: MLE + (T-1)/(2N).
inline double miller_madow_entropy(const FrequencyVector& y) {
  return mle_entropy(y) +
         double(y.species() - 1) / (2.0 * double(y.sample_size()));
}

/// Good-Turing coverage-adjusted probabilities (1 - m1'/N) n_i/N.
/// These do not sum to 1: the deficit is the estimated unseen mass.
inline ArrayX<double> good_turing_probs(const FrequencyVector& y) {
  const double n = double(y.sample_size());
  const double cover = 1.0 - double(y.clamped_singletons()) / n;
  return cover * (y.counts().cast<double>() / n);
}

/// Horvitz-Thompson corrected entropy over the Good-Turing probabilities.
inline double chao_shen_entropy(const FrequencyVector& y) {
  const ArrayX<double> p = good_turing_probs(y);
  const double n = double(y.sample_size());
  KahanAccumulator<double> acc;
  for (Index i = 0; i < p.size(); ++i) {
    // inclusion probability 1 - (1-p)^N, via expm1 to survive tiny p
    const double incl = -std::expm1(n * std::log1p(-p[i]));
    acc.add(-p[i] * std::log(p[i]) / incl);
  }
  return acc.value();
}

struct CoverageEstimates {
  double c0_hat;   // unseen probability mass, m1'/N
  double c1_hat;   // singleton mass, (1 - c0) m1'/N
  double c01_hat;  // c0 + c1
  double k_hat;    // species richness, N/(1 - c0)
  double f_hat;    // (c0/2)(k_hat - T + 1), floored at 0
};

inline CoverageEstimates coverage_estimates(const FrequencyVector& y) {
  const double n = double(y.sample_size());
  const double c0 = double(y.clamped_singletons()) / n;
  const double c1 = (1.0 - c0) * double(y.clamped_singletons()) / n;
  const double k = n / (1.0 - c0);
  // k_hat can fall below T-1; a negative F has no meaning in the bound.
  const double f = std::max(0.0, 0.5 * c0 * (k - double(y.species()) + 1.0));
  return {c0, c1, c0 + c1, k, f};
}

}  // namespace pyent

#endif  // PYENT_CLASSICAL_HPP
