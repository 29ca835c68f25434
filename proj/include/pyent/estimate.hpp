#ifndef PYENT_ESTIMATE_HPP
#define PYENT_ESTIMATE_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>

#include "pyent/classical.hpp"
#include "pyent/dpym.hpp"
#include "pyent/selection.hpp"

// The estimator front: a single entry point dispatching over the classical
// baselines, DPYM at fixed hyperparameters, and the selected-hyperparameter
// estimator assembled from selection + the DPYM entropy decomposition.

namespace pyent {

inline constexpr std::int64_t kDefaultTruncation = 10'000;

enum class Method { mle, miller_madow, chao_shen, dpym_fixed, proposed };

struct MethodSpec {
  Method method;
  std::optional<PyParams> params;  // required for dpym_fixed

  std::string label() const {
    switch (method) {
      case Method::mle: return "mle";
      case Method::miller_madow: return "miller_madow";
      case Method::chao_shen: return "chao_shen";
      case Method::proposed: return "proposed";
      case Method::dpym_fixed: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "dpym_%g_%g", params->d, params->alpha);
        return buf;
      }
    }
    return "?";
  }
};

/// Entropy value in nats plus the diagnostics that explain how it was made.
struct EntropyEstimate {
  double value;
  Method method;
  std::optional<PyParams> params_used;           // dpym_fixed / proposed only
  std::optional<std::int64_t> truncation_n;      // tail truncation, if any
  std::optional<double> remainder_bound;         // tail remainder proxy
  std::optional<SelectionDiagnostics> selection; // proposed only
};

inline EntropyEstimate dpym_fixed_entropy(const FrequencyVector& y, const PyParams& p,
                                          std::int64_t truncation_n = kDefaultTruncation) {
  const DpymEntropyResult r = dpym_entropy(y, p, truncation_n);
  return {r.value, Method::dpym_fixed, p, r.tail.truncation_n,
          r.tail.remainder_bound, std::nullopt};
}

/// The selected-hyperparameter estimator: pick (d, alpha) by selection, then
/// evaluate the DPYM entropy at the selection. Deterministic in y and cfg.
inline EntropyEstimate proposed_entropy(const FrequencyVector& y,
                                        const SelectionConfig& cfg = {},
                                        std::int64_t truncation_n = kDefaultTruncation) {
  SelectionResult sel = select_params(y, cfg);
  const DpymEntropyResult r = dpym_entropy(y, sel.params, truncation_n);
  return {r.value, Method::proposed, sel.params, r.tail.truncation_n,
          r.tail.remainder_bound, std::move(sel.diagnostics)};
}

inline EntropyEstimate estimate_entropy(const FrequencyVector& y, const MethodSpec& spec,
                                        const SelectionConfig& cfg = {},
                                        std::int64_t truncation_n = kDefaultTruncation) {
  switch (spec.method) {
    case Method::mle:
      return {mle_entropy(y), Method::mle, {}, {}, {}, {}};
    case Method::miller_madow:
      return {miller_madow_entropy(y), Method::miller_madow, {}, {}, {}, {}};
    case Method::chao_shen:
      return {chao_shen_entropy(y), Method::chao_shen, {}, {}, {}, {}};
    case Method::dpym_fixed:
      if (!spec.params)
        throw std::invalid_argument("estimate_entropy: dpym_fixed needs (d, alpha)");
      return dpym_fixed_entropy(y, *spec.params, truncation_n);
    case Method::proposed:
      return proposed_entropy(y, cfg, truncation_n);
  }
  throw std::invalid_argument("estimate_entropy: unknown method");
}

}  // namespace pyent

#endif  // PYENT_ESTIMATE_HPP
