#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pyent/estimate.hpp"
#include "pyent/random.hpp"

using namespace pyent;

namespace {

FrequencyVector freq(std::initializer_list<std::int64_t> xs) {
  CountArray v(Index(xs.size()));
  Index i = 0;
  for (auto x : xs) v[i++] = x;
  return FrequencyVector(v);
}

// Independent end-to-end re-derivation of the selected-hyperparameter
// estimator in long double: coverage, candidate set, argmin, then the
// entropy decomposition with the truncated tail series.
long double proposed_ref(const std::vector<std::int64_t>& counts, std::int64_t trunc) {
  long double n = 0, m1 = 0;
  const long double t = (long double)counts.size();
  for (auto c : counts) {
    n += c;
    if (c == 1) ++m1;
  }
  long double d_hat = 0, a_hat = 1e-8L;
  if (m1 > 0) {
    if (m1 == n) m1 = n - 1;
    const long double c0 = m1 / n;
    const long double c1 = (1 - c0) * m1 / n;
    const long double c01 = c0 + c1;
    const long double kk = n / (1 - c0);
    const long double f = std::max(0.0L, 0.5L * c0 * (kk - t + 1));
    const auto fhat = [&](long double d, long double a) {
      return std::log(n + a) - c01 * std::log(1 - d) +
             (f != 0 ? f * std::log((a + t * d + 1) / (a + t * d)) : 0.0L);
    };
    std::vector<std::pair<long double, long double>> cand;
    if (c01 > 0 && c01 < t / n) {
      const long double qa = (c01 - 1) * (c01 - 1) * t * t;
      const long double qb = ((2 * t - 2 * c01 * n + c01) * (c01 - 1) + f * c01) * t;
      const long double qc = (t - c01 * n + c01) * (t - c01 * n) - t * f * c01;
      const long double disc = qb * qb - 4 * qa * qc;
      if (disc >= 0 && qa != 0) {
        for (const long double root :
             {(-qb + std::sqrt(disc)) / (2 * qa), (-qb - std::sqrt(disc)) / (2 * qa)}) {
          const long double a = t * (1 - root) / c01 - n;
          if (root >= 0 && root < 1 && root < (t - c01 * n) / (t - c01) && a > -root &&
              a + t * root > 0)
            cand.emplace_back(root, a);
        }
      }
    }
    const long double a0 = 0.5L * (f - 1 + std::sqrt((1 - f) * (1 - f) + 4 * f * n));
    cand.emplace_back(0.0L, a0 > 0 ? a0 : 1e-6L);
    const long double d1 = 1 - 1e-6L;
    const long double a1 =
        0.5L * (-(2 * t * d1 - f + 1) +
                std::sqrt((1 - f) * (1 - f) + 4 * f * (n - t * d1)));
    cand.emplace_back(d1, a1 > -d1 ? a1 : -d1 + 1e-6L);
    long double best = 1e300L;
    for (const auto& [d, a] : cand) {
      const long double v = fhat(d, a);
      if (v < best) {
        best = v;
        d_hat = d;
        a_hat = a;
      }
    }
  }
  // head entropy
  long double h = 0;
  for (auto c : counts) {
    const long double q = (c - d_hat) / (n + a_hat);
    h += -q * std::log(q);
  }
  const long double w = (a_hat + t * d_hat) / (n + a_hat);
  if (w > 0) h += -w * std::log(w);
  // tail entropy of MPY(d, alpha + T d)
  const long double ap = a_hat + t * d_hat;
  long double tail;
  if (d_hat == 0) {
    tail = (1 + ap) * std::log(1 + ap) - ap * std::log(ap);
  } else {
    const long double a = ap / d_hat, b = (ap + 1) / d_hat;
    const long double logpref = std::log(1 - d_hat) - std::log(d_hat) +
                                std::lgamma(b) - std::lgamma(a + 1);
    long double s = 0, logr = 0;
    for (std::int64_t k = 1; k <= trunc; ++k) {
      logr = std::lgamma(a + k) - std::lgamma(b + k);
      s += std::exp(logpref + logr) * logr;
    }
    const long double u0 = (long double)trunc + 0.5L + 0.5L * (a + b - 1);
    const long double x = std::pow(u0, (d_hat - 1) / d_hat);
    tail = -logpref - s +
           std::exp(logpref) * x *
               (std::log(u0) / (1 - d_hat) + d_hat / ((d_hat - 1) * (d_hat - 1)));
  }
  return h + w * tail;
}

}  // namespace

TEST_CASE("no singletons: estimator collapses to the plug-in") {
  Rng rng(606);
  for (int it = 0; it < 100; ++it) {
    CountArray c(1 + Index(rng.uniform01() * 80));
    for (Index i = 0; i < c.size(); ++i) c[i] = 2 + std::int64_t(rng.uniform01() * 30);
    const FrequencyVector y(c);
    REQUIRE(y.singletons() == 0);
    const EntropyEstimate est = proposed_entropy(y);
    CHECK(std::abs(est.value - mle_entropy(y)) <= 1e-6);
  }
}

TEST_CASE("single species") {
  const EntropyEstimate est = proposed_entropy(freq({9}));
  CHECK(est.value <= 1e-6);
  CHECK(est.value >= 0.0);
}

TEST_CASE("matches the selection + decomposition route and the reference pipeline") {
  for (const auto& counts :
       std::vector<std::vector<std::int64_t>>{{1, 1, 2},
                                              {1, 1, 1, 1},
                                              {1, 2, 3, 4, 5, 1, 1, 9},
                                              {1, 1, 1, 2, 2, 7, 40}}) {
    CountArray c(Index(counts.size()));
    for (Index i = 0; i < c.size(); ++i) c[i] = counts[size_t(i)];
    const FrequencyVector y(c);
    const EntropyEstimate est = proposed_entropy(y);
    const SelectionResult sel = select_params(y);
    CHECK(est.value == dpym_entropy(y, sel.params, kDefaultTruncation).value);
    CHECK(est.value ==
          doctest::Approx(double(proposed_ref(counts, kDefaultTruncation)))
              .epsilon(1e-6));
  }
}

TEST_CASE("estimate dispatch and metadata") {
  const FrequencyVector y = freq({1, 1, 2});
  const EntropyEstimate mle = estimate_entropy(y, {Method::mle, {}});
  CHECK(mle.value == doctest::Approx(1.0397207708399179));
  CHECK(!mle.params_used);

  const EntropyEstimate mm = estimate_entropy(y, {Method::miller_madow, {}});
  CHECK(mm.value == doctest::Approx(1.2897207708399179));

  const EntropyEstimate dp =
      estimate_entropy(y, {Method::dpym_fixed, PyParams(0.5, 0.0)});
  CHECK(dp.params_used.has_value());
  CHECK(dp.params_used->d == 0.5);
  CHECK(!dp.selection.has_value());

  const EntropyEstimate prop = estimate_entropy(y, {Method::proposed, {}});
  CHECK(prop.params_used.has_value());
  CHECK(prop.selection.has_value());
  CHECK(prop.value >= 0.0);

  CHECK_THROWS_AS(estimate_entropy(y, {Method::dpym_fixed, {}}), std::invalid_argument);

  CHECK(MethodSpec{Method::dpym_fixed, PyParams(0.5, 0.0)}.label() == "dpym_0.5_0");
  CHECK(MethodSpec{Method::proposed, {}}.label() == "proposed");
}

TEST_CASE("estimate never falls below its own head entropy") {
  Rng rng(17);
  for (int it = 0; it < 50; ++it) {
    CountArray c(1 + Index(rng.uniform01() * 30));
    for (Index i = 0; i < c.size(); ++i) c[i] = 1 + std::int64_t(rng.uniform01() * 6);
    const FrequencyVector y(c);
    const EntropyEstimate est = proposed_entropy(y);
    const double head = dpym_head_entropy(dpym_predictive(y, *est.params_used));
    CHECK(est.value >= head - 1e-12);
  }
}

TEST_CASE("permutation invariance of the full pipeline") {
  std::vector<std::int64_t> counts = {1, 1, 2, 3, 1, 8, 2, 1, 1, 5};
  CountArray a(Index(counts.size()));
  for (Index i = 0; i < a.size(); ++i) a[i] = counts[size_t(i)];
  const double v1 = proposed_entropy(FrequencyVector(a)).value;
  std::mt19937_64 shuf(99);
  for (int it = 0; it < 10; ++it) {
    std::shuffle(counts.begin(), counts.end(), shuf);
    CountArray b(Index(counts.size()));
    for (Index i = 0; i < b.size(); ++i) b[i] = counts[size_t(i)];
    CHECK(std::abs(proposed_entropy(FrequencyVector(b)).value - v1) <= 1e-12);
  }
}
