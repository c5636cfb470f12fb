#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "kernelcat/numeric.hpp"

namespace krn {

/// Finite outcome set {0, ..., size-1} with the discrete sigma-algebra and a
/// probability vector. Weights are validated and never renormalized.
template <class Scalar>
class ProbSpace {
 public:
  using scalar_type = Scalar;

  ProbSpace(Vector<Scalar> weights, double tolerance = kDefaultTolerance)
      : weights_(std::move(weights)), tolerance_(is_exact_v<Scalar> ? 0.0 : tolerance) {
    if (weights_.size() == 0) throw Error(ErrorCode::EmptySupport, "space has no outcomes");
    if (!is_exact_v<Scalar> && !(tolerance > 0.0)) {
      throw Error(ErrorCode::SumNotOne, "float tolerance must be positive");
    }
    Scalar total(0);
    bool any_positive = false;
    for (Index i = 0; i < weights_.size(); ++i) {
      if (weights_[i] < Scalar(0)) {
        throw Error(ErrorCode::NegativeWeight,
                    "weight " + std::to_string(i) + " = " + format_scalar(weights_[i]));
      }
      any_positive = any_positive || weights_[i] > Scalar(0);
      total += weights_[i];
    }
    if (!nearly_equal(total, Scalar(1), tolerance_)) {
      throw Error(ErrorCode::SumNotOne,
                  "weights sum to " + format_scalar(total) + " (deviation " +
                      format_scalar(Scalar(total - Scalar(1))) + ")");
    }
    if (!any_positive) throw Error(ErrorCode::EmptySupport, "no outcome has positive weight");
  }

  static ProbSpace uniform(Index n, double tolerance = kDefaultTolerance) {
    return ProbSpace(Vector<Scalar>::Constant(n, ratio<Scalar>(1, n)), tolerance);
  }

  static ProbSpace point() { return ProbSpace(Vector<Scalar>::Ones(1)); }

  Index size() const { return weights_.size(); }
  const Vector<Scalar>& weights() const { return weights_; }
  const Scalar& weight(Index i) const { return weights_[i]; }
  double tolerance() const { return tolerance_; }

  bool in_support(Index i) const { return weights_[i] > Scalar(0); }

  std::vector<Index> support() const {
    std::vector<Index> out;
    for (Index i = 0; i < size(); ++i)
      if (in_support(i)) out.push_back(i);
    return out;
  }

  /// true marks a null outcome.
  std::vector<bool> null_mask() const {
    std::vector<bool> out(static_cast<std::size_t>(size()));
    for (Index i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = !in_support(i);
    return out;
  }

  /// Same size and weights equal within tolerance.
  bool same_as(const ProbSpace& other) const {
    if (size() != other.size()) return false;
    double tol = std::max(tolerance_, other.tolerance_);
    for (Index i = 0; i < size(); ++i)
      if (!nearly_equal(weights_[i], other.weights_[i], tol)) return false;
    return true;
  }

 private:
  Vector<Scalar> weights_;
  double tolerance_;
};

template <class Scalar>
ProbSpace<Scalar> make_space(std::span<const Scalar> weights, double tolerance = kDefaultTolerance) {
  Vector<Scalar> w(static_cast<Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) w[static_cast<Index>(i)] = weights[i];
  return ProbSpace<Scalar>(std::move(w), tolerance);
}

template <class Scalar>
ProbSpace<Scalar> make_space(std::initializer_list<Scalar> weights,
                             double tolerance = kDefaultTolerance) {
  return make_space<Scalar>(std::span<const Scalar>(weights.begin(), weights.size()), tolerance);
}

template <class Scalar>
void require_same_space(const ProbSpace<Scalar>& a, const ProbSpace<Scalar>& b, const char* what) {
  if (!a.same_as(b)) throw Error(ErrorCode::SpaceMismatch, what);
}

}  // namespace krn
