#pragma once

#include <limits>
#include <string>
#include <vector>

#include "kernelcat/partition.hpp"
#include "kernelcat/prob_space.hpp"

namespace krn {

/// The index n of L^n, with n = infinity allowed.
class LnExponent {
 public:
  constexpr explicit LnExponent(unsigned n) : n_(n) {
    if (n == 0) throw Error(ErrorCode::ParseError, "L^n exponent must be positive");
  }
  static constexpr LnExponent infinity() { return LnExponent(kInfinity, 0); }

  constexpr bool is_infinite() const { return n_ == kInfinity; }
  constexpr unsigned value() const { return n_; }

  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(n_); }

  friend constexpr bool operator==(LnExponent a, LnExponent b) { return a.n_ == b.n_; }
  friend constexpr bool operator<(LnExponent a, LnExponent b) { return a.n_ < b.n_; }
  friend constexpr bool operator<=(LnExponent a, LnExponent b) { return a.n_ <= b.n_; }

 private:
  static constexpr unsigned kInfinity = std::numeric_limits<unsigned>::max();
  constexpr LnExponent(unsigned n, int) : n_(n) {}
  unsigned n_;
};

/// "1", "2", ..., "inf".
LnExponent parse_exponent(const std::string& text);

/// Real random variable on a finite space; compared up to almost-sure equality.
template <class Scalar>
class RandomVar {
 public:
  RandomVar(ProbSpace<Scalar> space, Vector<Scalar> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.size()) {
      throw Error(ErrorCode::SizeMismatch, "random variable has " + std::to_string(values_.size()) +
                                               " values on a space of " + std::to_string(space_.size()));
    }
  }

  static RandomVar constant(const ProbSpace<Scalar>& space, const Scalar& c) {
    return RandomVar(space, Vector<Scalar>::Constant(space.size(), c));
  }

  const ProbSpace<Scalar>& space() const { return space_; }
  const Vector<Scalar>& values() const { return values_; }
  const Scalar& operator()(Index i) const { return values_[i]; }
  Index size() const { return values_.size(); }

  friend RandomVar operator-(const RandomVar& f, const RandomVar& g) {
    require_same_space(f.space_, g.space_, "difference of random variables");
    return RandomVar(f.space_, f.values_ - g.values_);
  }
  friend RandomVar operator+(const RandomVar& f, const RandomVar& g) {
    require_same_space(f.space_, g.space_, "sum of random variables");
    return RandomVar(f.space_, f.values_ + g.values_);
  }
  friend RandomVar operator*(const Scalar& c, const RandomVar& f) { return RandomVar(f.space_, c * f.values_); }

 private:
  ProbSpace<Scalar> space_;
  Vector<Scalar> values_;
};

/// Indicator 1_A of the outcomes flagged in `members`.
template <class Scalar>
RandomVar<Scalar> indicator(const ProbSpace<Scalar>& space, const std::vector<bool>& members) {
  if (static_cast<Index>(members.size()) != space.size()) {
    throw Error(ErrorCode::SizeMismatch, "indicator mask size");
  }
  Vector<Scalar> v(space.size());
  for (Index i = 0; i < space.size(); ++i) v[i] = members[static_cast<std::size_t>(i)] ? Scalar(1) : Scalar(0);
  return RandomVar<Scalar>(space, std::move(v));
}

/// Indicator of the subset encoded by the bits of `mask` (outcome i <-> bit i).
template <class Scalar>
RandomVar<Scalar> indicator_of_mask(const ProbSpace<Scalar>& space, std::uint64_t mask) {
  Vector<Scalar> v(space.size());
  for (Index i = 0; i < space.size(); ++i) v[i] = ((mask >> i) & 1u) ? Scalar(1) : Scalar(0);
  return RandomVar<Scalar>(space, std::move(v));
}

/// Agreement at every outcome of positive probability.
template <class Scalar>
bool as_equal_rv(const RandomVar<Scalar>& f, const RandomVar<Scalar>& g) {
  require_same_space(f.space(), g.space(), "a.s. comparison of random variables");
  const double tol = f.space().tolerance();
  for (Index i = 0; i < f.size(); ++i)
    if (f.space().in_support(i) && !nearly_equal(f(i), g(i), tol)) return false;
  return true;
}

/// Integral of |f|^n, the n-th power of the L^n norm (exact in rational mode).
template <class Scalar>
Scalar ln_power_sum(const RandomVar<Scalar>& f, unsigned n) {
  Scalar total(0);
  for (Index i = 0; i < f.size(); ++i) {
    if (!f.space().in_support(i)) continue;
    Scalar a = abs_of(f(i));
    Scalar term = a;
    for (unsigned k = 1; k < n; ++k) term *= a;
    total += f.space().weight(i) * term;
  }
  return total;
}

/// (integral |f|^n dp)^(1/n); for n = infinity the maximum of |f| over the
/// support. Exact for n in {1, inf} in rational mode, and exact whenever the
/// norm is zero.
template <class Scalar>
Scalar ln_norm(const RandomVar<Scalar>& f, LnExponent n) {
  if (n.is_infinite()) {
    Scalar best(0);
    for (Index i = 0; i < f.size(); ++i)
      if (f.space().in_support(i)) best = std::max(best, Scalar(abs_of(f(i))));
    return best;
  }
  return root_of(ln_power_sum(f, n.value()), n.value());
}

template <class Scalar>
Scalar expectation(const RandomVar<Scalar>& f) {
  return f.space().weights().dot(f.values());
}

/// f is constant on every block of P.
template <class Scalar>
bool measurable_wrt(const RandomVar<Scalar>& f, const Partition& p) {
  if (p.parent_size() != static_cast<std::size_t>(f.size())) {
    throw Error(ErrorCode::SizeMismatch, "random variable and partition sizes differ");
  }
  const double tol = f.space().tolerance();
  for (const auto& block : p.blocks())
    for (std::size_t x : block)
      if (!nearly_equal(f(static_cast<Index>(x)), f(static_cast<Index>(block.front())), tol)) return false;
  return true;
}

/// Measurable with respect to the null-set completion of P: constant on the
/// supported part of each block.
template <class Scalar>
bool as_measurable_wrt(const RandomVar<Scalar>& f, const Partition& p) {
  return measurable_wrt(f, complete_partition(p, f.space()));
}

/// Norm on the value space V = R^d.
enum class VectorNorm { Euclidean, Max, One };

std::string to_string(VectorNorm norm);
VectorNorm parse_vector_norm(const std::string& text);

/// R^d-valued random variable; row i holds the value at outcome i.
template <class Scalar>
class VecRandomVar {
 public:
  VecRandomVar(ProbSpace<Scalar> space, Matrix<Scalar> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.rows() != space_.size()) {
      throw Error(ErrorCode::SizeMismatch, "vector random variable rows differ from space size");
    }
    if (values_.cols() == 0) throw Error(ErrorCode::DimMismatch, "value dimension must be positive");
  }

  const ProbSpace<Scalar>& space() const { return space_; }
  const Matrix<Scalar>& values() const { return values_; }
  Index dim() const { return values_.cols(); }
  Index size() const { return values_.rows(); }

  RandomVar<Scalar> coordinate(Index j) const {
    if (j < 0 || j >= dim()) throw Error(ErrorCode::DimMismatch, "coordinate out of range");
    return RandomVar<Scalar>(space_, values_.col(j));
  }

  friend VecRandomVar operator-(const VecRandomVar& f, const VecRandomVar& g) {
    require_same_space(f.space_, g.space_, "difference of vector random variables");
    if (f.dim() != g.dim()) throw Error(ErrorCode::DimMismatch, "difference of vector random variables");
    return VecRandomVar(f.space_, f.values_ - g.values_);
  }

 private:
  ProbSpace<Scalar> space_;
  Matrix<Scalar> values_;
};

template <class Scalar>
VecRandomVar<Scalar> from_scalar(const RandomVar<Scalar>& f) {
  return VecRandomVar<Scalar>(f.space(), Matrix<Scalar>(f.values()));
}

/// Norm of one value vector. The Euclidean norm in rational mode is exact
/// only when it vanishes.
template <class Scalar, class Derived>
Scalar value_norm(const Eigen::MatrixBase<Derived>& v, VectorNorm norm) {
  switch (norm) {
    case VectorNorm::Max: {
      Scalar best(0);
      for (Index j = 0; j < v.size(); ++j) best = std::max(best, Scalar(abs_of(Scalar(v(j)))));
      return best;
    }
    case VectorNorm::One: {
      Scalar total(0);
      for (Index j = 0; j < v.size(); ++j) total += abs_of(Scalar(v(j)));
      return total;
    }
    case VectorNorm::Euclidean:
    default: {
      Scalar squared(0);
      for (Index j = 0; j < v.size(); ++j) squared += Scalar(v(j)) * Scalar(v(j));
      return root_of(squared, 2);
    }
  }
}

/// (integral ||G(x)||_V^n p(dx))^(1/n), sup over the support for n = inf.
template <class Scalar>
Scalar bochner_norm(const VecRandomVar<Scalar>& g, LnExponent n, VectorNorm norm = VectorNorm::Euclidean) {
  Vector<Scalar> pointwise(g.size());
  for (Index i = 0; i < g.size(); ++i) pointwise[i] = value_norm<Scalar>(g.values().row(i), norm);
  return ln_norm(RandomVar<Scalar>(g.space(), std::move(pointwise)), n);
}

}  // namespace krn
