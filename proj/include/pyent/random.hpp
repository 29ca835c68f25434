#ifndef PYENT_RANDOM_HPP
#define PYENT_RANDOM_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pyent/core.hpp"

// Deterministic random machinery. The engine (mt19937_64) is fully specified
// by the standard and all variate transforms below are written out by hand,
// so a given seed produces the same stream on every platform and compiler.

namespace pyent {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for one simulation cell: mixes (master, scenario id, N, replication)
/// so streams are independent across the whole grid.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view scenario,
                                 std::uint64_t n, std::uint64_t rep) {
  std::uint64_t h = splitmix64(master ^ fnv1a64(scenario));
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ rep);
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe to pass to log().
  double uniform01_pos() { return double((engine_() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (no caching, two uniforms per draw).
  double normal() {
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang, with the shape<1 boost.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
    if (shape < 1.0)
      return gamma(shape + 1.0) * std::pow(uniform01_pos(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01_pos();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    const double s = x + y;
    return s > 0.0 ? x / s : 0.5;  // both-underflow guard, practically unreachable
  }

  /// Dirichlet(alpha) via normalized gamma draws.
  ArrayX<double> dirichlet(VecRef<double> alpha) {
    ArrayX<double> g(alpha.size());
    for (Index i = 0; i < alpha.size(); ++i) g[i] = gamma(alpha[i]);
    const double s = kahan_sum(g);
    if (!(s > 0.0)) throw std::runtime_error("dirichlet: degenerate draw");
    return g / s;
  }

 private:
  std::mt19937_64 engine_;
};

/// Walker alias table for O(1) categorical draws from a fixed distribution.
class AliasTable {
 public:
  explicit AliasTable(VecRef<double> probs) {
    const Index n = probs.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty");
    prob_.resize(n);
    alias_.assign(n, 0);
    const double total = kahan_sum(probs);
    std::vector<Index> small, large;
    std::vector<double> scaled(n);
    for (Index i = 0; i < n; ++i) {
      scaled[i] = probs[i] / total * double(n);
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const Index s = small.back();
      small.pop_back();
      const Index l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (const Index i : large) prob_[i] = 1.0;
    for (const Index i : small) prob_[i] = 1.0;
  }

  Index draw(Rng& rng) const {
    const Index n = Index(prob_.size());
    Index j = Index(rng.uniform01() * double(n));
    if (j >= n) j = n - 1;
    return rng.uniform01() < prob_[j] ? j : alias_[j];
  }

 private:
  std::vector<double> prob_;
  std::vector<Index> alias_;
};

}  // namespace pyent

#endif  // PYENT_RANDOM_HPP
