#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "pyent/dpym.hpp"
#include "pyent/random.hpp"

using namespace pyent;

namespace {

FrequencyVector freq(std::initializer_list<std::int64_t> xs) {
  CountArray v(Index(xs.size()));
  Index i = 0;
  for (auto x : xs) v[i++] = x;
  return FrequencyVector(v);
}

// Brute-force entropy of the full DPYM vector: head entries plus the scaled
// tail ladder summed term by term in long double.
long double dpym_entropy_brute(const FrequencyVector& y, double d, double alpha,
                               std::int64_t tail_terms) {
  const long double n = (long double)y.sample_size();
  const long double t = (long double)y.species();
  long double h = 0.0L;
  for (Index i = 0; i < y.counts().size(); ++i) {
    const long double q = ((long double)y.counts()[i] - d) / (n + alpha);
    h += -q * std::log(q);
  }
  const long double w = (alpha + t * d) / (n + alpha);
  // tail entries are w * pi_k with pi_k the T-shifted ladder,
  // pi_1 = (1-d)/(alpha'+1), alpha' = alpha + T d
  const long double alpha_p = (long double)alpha + t * d;
  long double pi = (1.0L - (long double)d) / (alpha_p + 1.0L);
  for (std::int64_t k = 0; k < tail_terms; ++k) {
    if (k > 0) {
      const long double rung = alpha_p + (long double)k * d;
      pi *= rung / (rung + 1.0L);
    }
    const long double q = w * pi;
    if (q > 0.0L) h += -q * std::log(q);
  }
  // remaining tail via the power-law integral, pi_x ~ A x^{-rho}: for heavy
  // tails the terms beyond the summation cutoff still carry real entropy
  if (d > 0) {
    const long double rho = 1.0L / (long double)d;
    const long double m = (long double)tail_terms + 0.5L;
    const long double a_loc = pi * std::pow((long double)tail_terms, rho);
    const long double wa = w * a_loc;
    h += wa * std::pow(m, 1.0L - rho) *
         (rho * (std::log(m) / (rho - 1.0L) + 1.0L / ((rho - 1.0L) * (rho - 1.0L))) -
          std::log(wa) / (rho - 1.0L));
  }
  return h;
}

}  // namespace

TEST_CASE("predictive distribution") {
  const DpymPredictive a = dpym_predictive(freq({2, 1}), PyParams(0.5, 1.0));
  CHECK(a.head[0] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(a.head[1] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(a.tail_weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a.tail_params.d == 0.5);
  CHECK(a.tail_params.alpha == doctest::Approx(2.0));

  // MLE limit: single species, alpha -> 0
  const DpymPredictive b = dpym_predictive(freq({7}), PyParams(0.0, 1e-12));
  CHECK(b.head[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.tail_weight <= 1e-12);

  const DpymPredictive c = dpym_predictive(freq({1, 1, 1}), PyParams(0.0, 1.0));
  for (Index i = 0; i < 3; ++i) CHECK(c.head[i] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(c.tail_weight == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("predictive head and tail weight sum to one") {
  Rng rng(31);
  for (int it = 0; it < 100; ++it) {
    CountArray c(1 + Index(rng.uniform01() * 50));
    for (Index i = 0; i < c.size(); ++i) c[i] = 1 + std::int64_t(rng.uniform01() * 20);
    const double d = rng.uniform01() * 0.95;
    const double alpha = -d + 0.01 + rng.uniform01() * 10.0;
    const DpymPredictive pred = dpym_predictive(FrequencyVector(c), PyParams(d, alpha));
    KahanAccumulator<double> s;
    for (Index i = 0; i < pred.head.size(); ++i) {
      CHECK(pred.head[i] > 0.0);
      s.add(pred.head[i]);
    }
    s.add(pred.tail_weight);
    CHECK(std::abs(s.value() - 1.0) <= 1e-12);
  }
}

TEST_CASE("head entropy") {
  const DpymPredictive a = dpym_predictive(freq({2, 1}), PyParams(0.5, 1.0));
  CHECK(dpym_head_entropy(a) == doctest::Approx(0.9743147528693494).epsilon(1e-13));

  const DpymPredictive b = dpym_predictive(freq({5}), PyParams(0.0, 1e-300));
  CHECK(dpym_head_entropy(b) == doctest::Approx(0.0).epsilon(1e-12));

  const DpymPredictive c = dpym_predictive(freq({1, 1, 1}), PyParams(0.0, 1.0));
  CHECK(dpym_head_entropy(c) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("entropy decomposition: geometric tail case") {
  // head (0.5, 0.25), tail weight 0.25, tail entropy 2 log 2
  const DpymEntropyResult r = dpym_entropy(freq({2, 1}), PyParams(0.0, 1.0), 100);
  CHECK(r.tail_weight == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.tail.value == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(r.value == doctest::Approx(1.3862943611198906).epsilon(1e-13));
  CHECK(r.value == r.head_entropy + r.tail_weight * r.tail.value);
}

TEST_CASE("degenerate limit") {
  const DpymEntropyResult r = dpym_entropy(freq({9}), PyParams(0.0, 1e-12), 100);
  CHECK(r.value <= 1e-9);
}

TEST_CASE("entropy vs flat brute force over the full vector") {
  const FrequencyVector y = freq({1, 1, 1, 1});
  const DpymEntropyResult r = dpym_entropy(y, PyParams(0.5, 0.0), 10000);
  const double brute = double(dpym_entropy_brute(y, 0.5, 0.0, 10000000));
  CHECK(std::abs(r.value - brute) <= 1e-3);

  // a second configuration, moderate discount
  const FrequencyVector y2 = freq({3, 2, 1, 1});
  const DpymEntropyResult r2 = dpym_entropy(y2, PyParams(0.75, 0.5), 10000);
  const double brute2 = double(dpym_entropy_brute(y2, 0.75, 0.5, 1000000));
  CHECK(std::abs(r2.value - brute2) <= 2e-3);
}

TEST_CASE("tail weight increases with alpha at d = 0") {
  const FrequencyVector y = freq({4, 2, 1});
  double prev = -1.0;
  for (const double alpha : {0.1, 0.5, 1.0, 5.0, 50.0}) {
    const double w = dpym_predictive(y, PyParams(0.0, alpha)).tail_weight;
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("tail normalization: shifted ladder sums toward one") {
  const DpymPredictive pred = dpym_predictive(freq({2, 1, 1}), PyParams(0.5, 1.0));
  long double pi = (1.0L - 0.5L) / ((long double)pred.tail_params.alpha + 1.0L);
  long double sum = pi;
  for (std::int64_t j = 1; j < 1000000; ++j) {
    const long double rung = (long double)pred.tail_params.alpha + 0.5L * j;
    pi *= rung / (rung + 1.0L);
    sum += pi;
  }
  CHECK(double(1.0L - sum) >= 0.0);
  CHECK(double(1.0L - sum) <= 10.0 * std::pow(1e6, -1.0));
}

TEST_CASE("sample_dpym: contract, determinism, predictive mean") {
  const FrequencyVector y = freq({2, 1});
  const PyParams p(0.5, 1.0);

  Rng a(11), b(11);
  const std::vector<double> w1 = sample_dpym(y, p, a, 0.5);
  const std::vector<double> w2 = sample_dpym(y, p, b, 0.5);
  CHECK(w1 == w2);
  double sum = 0.0;
  for (double w : w1) sum += w;
  CHECK(sum >= 0.5);

  Rng rng(404);
  const int reps = 100000;
  double s0 = 0, s1 = 0, q0 = 0, q1 = 0;
  for (int r = 0; r < reps; ++r) {
    const std::vector<double> w = sample_dpym(y, p, rng, 0.9);
    s0 += w[0];
    s1 += w[1];
    q0 += w[0] * w[0];
    q1 += w[1] * w[1];
  }
  const DpymPredictive pred = dpym_predictive(y, p);
  const double m0 = s0 / reps, m1 = s1 / reps;
  const double se0 = std::sqrt((q0 / reps - m0 * m0) / reps);
  const double se1 = std::sqrt((q1 / reps - m1 * m1) / reps);
  CHECK(std::abs(m0 - pred.head[0]) <= 3.0 * se0);
  CHECK(std::abs(m1 - pred.head[1]) <= 3.0 * se1);
}
