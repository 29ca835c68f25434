#ifndef PYENT_DPYM_HPP
#define PYENT_DPYM_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pyent/classical.hpp"
#include "pyent/core.hpp"
#include "pyent/pyp.hpp"
#include "pyent/random.hpp"

// Dirichlet-Pitman-Yor mixture: Dirichlet-weighted mass on the observed
// species, Pitman-Yor mass on the unseen ones. The tail law of the implied
// infinite vector is exactly the marginal PYP with the concentration ladder
// advanced by T positions, i.e. MPY(d, alpha + T d), so all tail arithmetic
// reuses the pyp.hpp evaluators with shifted parameters.

namespace pyent {

/// Predictive distribution of the next observation given counts y.
struct DpymPredictive {
  ArrayX<double> head;    // (n_i - d)/(N + alpha) per observed species
  double tail_weight;     // (alpha + T d)/(N + alpha)
  PyParams tail_params;   // law of the tail categories: MPY(d, alpha + T d)
  PyParams params;
  std::int64_t sample_size;
};

inline DpymPredictive dpym_predictive(const FrequencyVector& y, const PyParams& p) {
  const double n = double(y.sample_size());
  const double t = double(y.species());
  const double denom = n + p.alpha;
  if (!(denom > 0.0))
    throw std::domain_error("dpym_predictive: N + alpha must be positive");
  ArrayX<double> head = (y.counts().cast<double>() - p.d) / denom;
  const double tail_weight = (p.alpha + t * p.d) / denom;
  return {std::move(head), tail_weight, PyParams(p.d, p.alpha + t * p.d), p,
          y.sample_size()};
}

/// Entropy of the (T+1)-dimensional head vector (head..., tail_weight).
inline double dpym_head_entropy(const DpymPredictive& pred) {
  ArrayX<double> v(pred.head.size() + 1);
  v.head(pred.head.size()) = pred.head;
  v[pred.head.size()] = pred.tail_weight;
  return shannon_entropy(ExtendedProbabilityVector(std::move(v)));
}

struct DpymEntropyResult {
  double value;          // head_entropy + tail_weight * tail.value
  double head_entropy;
  double tail_weight;
  MpyEntropyResult tail;
};

/// Entropy of the full infinite DPYM vector, decomposed as
/// H(q) = H(q*) + tail_weight * H(tail law).
inline DpymEntropyResult dpym_entropy(const FrequencyVector& y, const PyParams& p,
                                      std::int64_t truncation_n) {
  const DpymPredictive pred = dpym_predictive(y, p);
  const double head = dpym_head_entropy(pred);
  if (pred.tail_weight == 0.0)  // degenerate limit; avoid 0 * inf
    return {head, head, 0.0, {0.0, truncation_n, 0.0}};
  const MpyEntropyResult tail = mpy_entropy(pred.tail_params, truncation_n);
  return {head + pred.tail_weight * tail.value, head, pred.tail_weight, tail};
}

/// One draw of the random DPYM vector itself (not its predictive mean):
/// Dirichlet mass over observed species plus stick-breaking PY tail scaled
/// by the Dirichlet remainder. Property-testing aid, not on the estimation
/// path.
inline std::vector<double> sample_dpym(const FrequencyVector& y, const PyParams& p,
                                       Rng& rng, double mass_tol) {
  const Index t = y.counts().size();
  ArrayX<double> shape(t + 1);
  shape.head(t) = y.counts().cast<double>() - p.d;
  shape[t] = p.alpha + double(t) * p.d;
  const ArrayX<double> dir = rng.dirichlet(shape);

  const std::vector<double> sticks =
      stick_breaking_sample(PyParams(p.d, p.alpha + double(t) * p.d), rng, mass_tol);

  std::vector<double> w(size_t(t) + sticks.size());
  for (Index i = 0; i < t; ++i) w[size_t(i)] = dir[i];
  for (size_t j = 0; j < sticks.size(); ++j) w[size_t(t) + j] = dir[t] * sticks[j];
  return w;
}

}  // namespace pyent

#endif  // PYENT_DPYM_HPP
