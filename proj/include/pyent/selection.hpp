#ifndef PYENT_SELECTION_HPP
#define PYENT_SELECTION_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pyent/classical.hpp"
#include "pyent/pyp.hpp"

// Data-driven choice of the Pitman-Yor pair (d, alpha): minimize an upper
// bound on the cross entropy between the unknown population vector and the
// DPYM vector. The bound has closed-form interior critical points plus
// boundary minimizers at d = 0 and d = 1-eps; the argmin over that small
// candidate set is the selected pair.

namespace pyent {

enum class CandidateLabel {
  interior_plus,
  interior_minus,
  boundary_d0,
  boundary_d1,
  default_large_sample,
  clamped,
};

inline const char* to_string(CandidateLabel l) {
  switch (l) {
    case CandidateLabel::interior_plus: return "interior_plus";
    case CandidateLabel::interior_minus: return "interior_minus";
    case CandidateLabel::boundary_d0: return "boundary_d0";
    case CandidateLabel::boundary_d1: return "boundary_d1";
    case CandidateLabel::default_large_sample: return "default_large_sample";
    case CandidateLabel::clamped: return "clamped";
  }
  return "?";
}

struct Candidate {
  PyParams params;
  CandidateLabel label;
  std::optional<double> objective;  // estimated upper bound, absent for defaults
};

struct SelectionConfig {
  double d0_default = 0.0;        // large-sample discount
  double alpha0_default = 1e-8;   // large-sample concentration
  double epsilon_boundary = 1e-6; // the d = 1-eps boundary candidate
  double epsilon_clamp = 1e-6;    // repair offset when a candidate has alpha <= -d
  // Use the literal published candidate (d0_default, 0) instead of the
  // derived d=0 minimizer (0, alpha_0). Comparison switch only.
  bool literal_d0_candidate = false;
};

namespace detail {

// log(N+alpha) - C01 log(1-d) + F log((alpha+Td+1)/(alpha+Td))
inline double upper_bound_kernel(double d, double alpha, double n, double t,
                                 double c01, double f) {
  const double ladder = alpha + t * d;
  if (!(ladder > 0.0))
    throw std::domain_error("upper bound: alpha + T d must be positive");
  if (!(d >= 0.0 && d < 1.0))
    throw std::invalid_argument("upper bound: d must be in [0,1)");
  double v = std::log(n + alpha) - c01 * std::log1p(-d);
  if (f != 0.0) v += f * std::log1p(1.0 / ladder);
  return v;
}

}  // namespace detail

/// Cross-entropy upper bound with explicit unseen-mass inputs (C0: unseen
/// mass, C1: singleton mass, K: species count, possibly estimates).
inline double upper_bound_f(double d, double alpha, std::int64_t n, std::int64_t t,
                            double c0, double c1, double k) {
  return detail::upper_bound_kernel(d, alpha, double(n), double(t), c0 + c1,
                                    0.5 * c0 * (k - double(t) + 1.0));
}

/// The estimated bound: Good-Turing plug-ins substituted for C0, C1, K.
inline double estimated_upper_bound(const FrequencyVector& y, double d, double alpha) {
  const CoverageEstimates cov = coverage_estimates(y);
  return detail::upper_bound_kernel(d, alpha, double(y.sample_size()),
                                    double(y.species()), cov.c01_hat, cov.f_hat);
}

/// Interior critical points of the estimated bound (quadratic in d with
/// alpha tied to d through the critical-point condition). Infeasible roots
/// are dropped; the result may be empty.
inline std::vector<Candidate> critical_candidates(const FrequencyVector& y) {
  std::vector<Candidate> out;
  if (y.singletons() == 0) return out;
  const CoverageEstimates cov = coverage_estimates(y);
  const double c01 = cov.c01_hat;
  const double f = cov.f_hat;
  const double t = double(y.species());
  const double n = double(y.sample_size());
  if (!(c01 > 0.0) || !(c01 < t / n)) return out;

  const double a = (c01 - 1.0) * (c01 - 1.0) * t * t;
  const double b = ((2.0 * t - 2.0 * c01 * n + c01) * (c01 - 1.0) + f * c01) * t;
  const double c = (t - c01 * n + c01) * (t - c01 * n) - t * f * c01;
  if (a == 0.0) return out;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;

  // numerically stable quadratic roots
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double r1 = q / a;
  const double r2 = (q != 0.0) ? c / q : r1;
  const double d_plus = std::max(r1, r2);   // (-b + sqrt)/2a since a > 0
  const double d_minus = std::min(r1, r2);

  const double d_max = (t - c01 * n) / (t - c01);
  const auto push_if_feasible = [&](double d_root, CandidateLabel label) {
    if (!(d_root >= 0.0 && d_root < 1.0 && d_root < d_max)) return;
    const double alpha = t * (1.0 - d_root) / c01 - n;
    if (!(alpha > -d_root) || !(alpha + t * d_root > 0.0)) return;
    out.push_back({PyParams(d_root, alpha), label, std::nullopt});
  };
  push_if_feasible(d_plus, CandidateLabel::interior_plus);
  if (d_minus != d_plus) push_if_feasible(d_minus, CandidateLabel::interior_minus);
  return out;
}

/// Boundary minimizers at d = 0 and d = 1-eps, with the alpha <= -d repair.
inline std::vector<Candidate> boundary_candidates(const FrequencyVector& y,
                                                  const SelectionConfig& cfg) {
  const CoverageEstimates cov = coverage_estimates(y);
  const double f = cov.f_hat;
  const double t = double(y.species());
  const double n = double(y.sample_size());

  const auto clamped = [&](double d, double alpha, CandidateLabel label) -> Candidate {
    if (alpha <= -d)
      return {PyParams(d, -d + cfg.epsilon_clamp), CandidateLabel::clamped,
              std::nullopt};
    return {PyParams(d, alpha), label, std::nullopt};
  };

  std::vector<Candidate> out;
  if (cfg.literal_d0_candidate) {
    out.push_back(clamped(cfg.d0_default, 0.0, CandidateLabel::boundary_d0));
  } else {
    const double alpha0 =
        0.5 * (f - 1.0 + std::sqrt((1.0 - f) * (1.0 - f) + 4.0 * f * n));
    out.push_back(clamped(0.0, alpha0, CandidateLabel::boundary_d0));
  }

  const double d1 = 1.0 - cfg.epsilon_boundary;
  const double disc1 = (1.0 - f) * (1.0 - f) + 4.0 * f * (n - t * d1);
  if (disc1 < 0.0)  // impossible while N >= T; kept as a guard
    throw std::domain_error("boundary_candidates: negative discriminant at d = 1-eps");
  const double alpha1 = 0.5 * (-(2.0 * t * d1 - f + 1.0) + std::sqrt(disc1));
  out.push_back(clamped(d1, alpha1, CandidateLabel::boundary_d1));
  return out;
}

enum class SelectionRule { large_sample_default, upper_bound_argmin };

struct SelectionDiagnostics {
  SelectionRule rule;
  CoverageEstimates coverage;
  std::vector<Candidate> candidates;  // objectives filled where evaluated
  std::size_t selected = 0;           // index into candidates
};

struct SelectionResult {
  PyParams params;
  SelectionDiagnostics diagnostics;
};

/// The selection rule: large-sample defaults when no singletons are present,
/// otherwise the argmin of the estimated bound over interior critical points
/// and boundary candidates. Ties break toward smaller d, then smaller alpha.
inline SelectionResult select_params(const FrequencyVector& y,
                                     const SelectionConfig& cfg = {}) {
  SelectionDiagnostics diag;
  diag.coverage = coverage_estimates(y);

  if (y.singletons() == 0) {
    diag.rule = SelectionRule::large_sample_default;
    PyParams p(cfg.d0_default, cfg.alpha0_default);
    diag.candidates.push_back({p, CandidateLabel::default_large_sample, std::nullopt});
    diag.selected = 0;
    return {p, diag};
  }

  diag.rule = SelectionRule::upper_bound_argmin;
  diag.candidates = critical_candidates(y);
  for (Candidate& c : boundary_candidates(y, cfg)) diag.candidates.push_back(c);

  std::size_t best = 0;
  for (std::size_t i = 0; i < diag.candidates.size(); ++i) {
    Candidate& c = diag.candidates[i];
    c.objective = estimated_upper_bound(y, c.params.d, c.params.alpha);
    if (i == 0) continue;
    const Candidate& b = diag.candidates[best];
    const double fo = *c.objective, fb = *b.objective;
    if (fo < fb ||
        (fo == fb && (c.params.d < b.params.d ||
                      (c.params.d == b.params.d && c.params.alpha < b.params.alpha))))
      best = i;
  }
  diag.selected = best;
  return {diag.candidates[best].params, diag};
}

}  // namespace pyent

#endif  // PYENT_SELECTION_HPP
