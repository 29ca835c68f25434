#ifndef PYENT_CORE_HPP
#define PYENT_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

// Finite-dimensional information-theoretic primitives: validated probability
// vectors and entropy / cross-entropy / KL over them, all in nats.
//
// Accumulations use Kahan compensation so that entropies of vectors with up
// to ~10^6 entries agree with an extended-precision reference to < 1e-10.

namespace pyent {

using Eigen::Index;

template <std::floating_point Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <std::floating_point Scalar>
using VecRef = const Eigen::Ref<const ArrayX<Scalar>>&;

/// Thrown when a cross entropy is +infinity (some q_i = 0 on p's support).
class infinite_cross_entropy : public std::domain_error {
 public:
  explicit infinite_cross_entropy(Index i)
      : std::domain_error("cross entropy is infinite: q[" + std::to_string(i) +
                          "] = 0 on the support of p") {}
};

template <std::floating_point Scalar>
class KahanAccumulator {
 public:
  void add(Scalar x) {
    const Scalar y = x - comp_;
    const Scalar t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  Scalar value() const { return sum_; }

 private:
  Scalar sum_ = 0;
  Scalar comp_ = 0;
};

template <class Derived>
typename Derived::Scalar kahan_sum(const Eigen::ArrayBase<Derived>& v) {
  KahanAccumulator<typename Derived::Scalar> acc;
  for (Index i = 0; i < v.size(); ++i) acc.add(v(i));
  return acc.value();
}

namespace detail {

// Absolute tolerance on |sum - 1| at construction.
inline constexpr double kSumTol = 1e-12;

template <class Derived>
void check_sums_to_one(const Eigen::ArrayBase<Derived>& v, const char* what) {
  using Scalar = typename Derived::Scalar;
  const Scalar s = kahan_sum(v);
  if (std::abs(s - Scalar(1)) > Scalar(kSumTol))
    throw std::invalid_argument(std::string(what) +
                                ": entries sum to " + std::to_string(double(s)) +
                                ", expected 1 within 1e-12");
}

}  // namespace detail

/// Probability vector with strictly positive entries summing to 1.
/// Validated once at construction; operations assume validity.
template <std::floating_point Scalar>
class ProbabilityVectorT {
 public:
  explicit ProbabilityVectorT(ArrayX<Scalar> probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0)
      throw std::invalid_argument("ProbabilityVector: empty");
    if (!(probs_ > Scalar(0)).all())
      throw std::invalid_argument("ProbabilityVector: entries must be > 0");
    detail::check_sums_to_one(probs_, "ProbabilityVector");
  }

  const ArrayX<Scalar>& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  Scalar operator[](Index i) const { return probs_[i]; }

 private:
  ArrayX<Scalar> probs_;
};

/// Probability vector allowing zero entries, with the 0 log 0 = 0 convention.
template <std::floating_point Scalar>
class ExtendedProbabilityVectorT {
 public:
  explicit ExtendedProbabilityVectorT(ArrayX<Scalar> probs)
      : probs_(std::move(probs)) {
    if (probs_.size() == 0)
      throw std::invalid_argument("ExtendedProbabilityVector: empty");
    if (!(probs_ >= Scalar(0)).all())
      throw std::invalid_argument("ExtendedProbabilityVector: entries must be >= 0");
    detail::check_sums_to_one(probs_, "ExtendedProbabilityVector");
  }

  const ArrayX<Scalar>& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  Scalar operator[](Index i) const { return probs_[i]; }

 private:
  ArrayX<Scalar> probs_;
};

using ProbabilityVector = ProbabilityVectorT<double>;
using ExtendedProbabilityVector = ExtendedProbabilityVectorT<double>;

/// -sum p_i log p_i over raw entries; zero entries contribute 0.
/// No validation; the *_entropy overloads below validate via their types.
template <class Derived>
typename Derived::Scalar entropy_nats(const Eigen::ArrayBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  KahanAccumulator<Scalar> acc;
  for (Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p(i);
    if (pi > Scalar(0)) acc.add(-pi * std::log(pi));
  }
  return acc.value();
}

template <std::floating_point Scalar>
Scalar shannon_entropy(const ProbabilityVectorT<Scalar>& p) {
  return entropy_nats(p.probs());
}

template <std::floating_point Scalar>
Scalar shannon_entropy(const ExtendedProbabilityVectorT<Scalar>& p) {
  return entropy_nats(p.probs());
}

/// -sum_i p_i log q_i, where q may be the head of a longer (even infinite)
/// vector: only q_0..q_{|p|-1} are read and they need not sum to 1.
template <std::floating_point Scalar, class Derived>
Scalar cross_entropy(const ProbabilityVectorT<Scalar>& p,
                     const Eigen::ArrayBase<Derived>& q) {
  static_assert(std::is_same_v<typename Derived::Scalar, Scalar>);
  if (q.size() < p.size())
    throw std::invalid_argument("cross_entropy: q shorter than p");
  KahanAccumulator<Scalar> acc;
  for (Index i = 0; i < p.size(); ++i) {
    const Scalar qi = q(i);
    if (qi < Scalar(0))
      throw std::invalid_argument("cross_entropy: q entries must be >= 0");
    if (qi == Scalar(0)) throw infinite_cross_entropy(i);
    acc.add(-p[i] * std::log(qi));
  }
  return acc.value();
}

/// cross_entropy(p, q) - shannon_entropy(p), clamped to 0 when the
/// difference is a tiny negative rounding residue (>= -1e-10).
template <std::floating_point Scalar, class Derived>
Scalar kl_divergence(const ProbabilityVectorT<Scalar>& p,
                     const Eigen::ArrayBase<Derived>& q) {
  const Scalar v = cross_entropy(p, q) - shannon_entropy(p);
  if (v < Scalar(0) && v >= Scalar(-1e-10)) return Scalar(0);
  return v;
}

}  // namespace pyent

#endif  // PYENT_CORE_HPP
