#pragma once

#include "kernelcat/idempotent.hpp"
#include "kernelcat/kernel.hpp"
#include "kernelcat/random_var.hpp"

namespace krn {

/// k* g (x) = sum_y k(y | x) g(y): pullback of a codomain random variable.
template <class Scalar>
RandomVar<Scalar> apply_pullback(const Kernel<Scalar>& k, const RandomVar<Scalar>& g) {
  require_same_space(k.codomain(), g.space(), "pullback: variable does not live on the codomain");
  return RandomVar<Scalar>(k.domain(), k.rows() * g.values());
}

/// Componentwise pullback of an R^d-valued variable.
template <class Scalar>
VecRandomVar<Scalar> vector_pullback(const Kernel<Scalar>& k, const VecRandomVar<Scalar>& g) {
  require_same_space(k.codomain(), g.space(), "vector pullback: variable does not live on the codomain");
  return VecRandomVar<Scalar>(k.domain(), k.rows() * g.values());
}

/// E[f | P]: the p-weighted block average at supported outcomes, the global
/// mean at null outcomes.
template <class Scalar>
RandomVar<Scalar> cond_expectation(const RandomVar<Scalar>& f, const Partition& part) {
  const auto& space = f.space();
  if (part.parent_size() != static_cast<std::size_t>(space.size())) {
    throw Error(ErrorCode::SizeMismatch, "partition and random variable sizes differ");
  }
  std::vector<Scalar> mass(part.num_blocks(), Scalar(0));
  std::vector<Scalar> integral(part.num_blocks(), Scalar(0));
  for (Index x = 0; x < space.size(); ++x) {
    const std::size_t b = part.block_of(static_cast<std::size_t>(x));
    mass[b] += space.weight(x);
    integral[b] += space.weight(x) * f(x);
  }
  const Scalar mean = expectation(f);
  Vector<Scalar> out(space.size());
  for (Index x = 0; x < space.size(); ++x) {
    const std::size_t b = part.block_of(static_cast<std::size_t>(x));
    out[x] = space.in_support(x) ? Scalar(integral[b] / mass[b]) : mean;
  }
  return RandomVar<Scalar>(space, std::move(out));
}

/// Componentwise E[G | P].
template <class Scalar>
VecRandomVar<Scalar> cond_expectation(const VecRandomVar<Scalar>& g, const Partition& part) {
  Matrix<Scalar> out(g.size(), g.dim());
  for (Index j = 0; j < g.dim(); ++j) out.col(j) = cond_expectation(g.coordinate(j), part).values();
  return VecRandomVar<Scalar>(g.space(), std::move(out));
}

/// <f, g> = sum_x p(x) f(x) g(x).
template <class Scalar>
Scalar inner_product(const RandomVar<Scalar>& f, const RandomVar<Scalar>& g) {
  require_same_space(f.space(), g.space(), "inner product of variables on different spaces");
  return f.space().weights().dot(f.values().cwiseProduct(g.values()));
}

/// | <f, k* g>_p - <(k+)* f, g>_q |, zero when Bayesian inversion is the
/// L^2 adjoint.
template <class Scalar>
Scalar adjointness_defect(const Kernel<Scalar>& k, const RandomVar<Scalar>& f, const RandomVar<Scalar>& g) {
  require_same_space(k.domain(), f.space(), "adjointness: f must live on the domain");
  require_same_space(k.codomain(), g.space(), "adjointness: g must live on the codomain");
  const Kernel<Scalar> inv = bayes_inverse(k);
  return abs_of(Scalar(inner_product(f, apply_pullback(k, g)) - inner_product(apply_pullback(inv, f), g)));
}

/// ||f||_n <= ||g||_n. Finite n in rational mode compares the exact power
/// sums instead of rounded roots.
template <class Scalar>
bool ln_norm_leq(const RandomVar<Scalar>& f, const RandomVar<Scalar>& g, LnExponent n, double tol) {
  if constexpr (is_exact_v<Scalar>) {
    if (!n.is_infinite()) return ln_power_sum(f, n.value()) <= ln_power_sum(g, n.value());
  }
  return nearly_leq(ln_norm(f, n), ln_norm(g, n), tol);
}

/// ||k* g||_n <= ||g||_n up to the domain tolerance.
template <class Scalar>
bool lipschitz_check(const Kernel<Scalar>& k, const RandomVar<Scalar>& g, LnExponent n) {
  return ln_norm_leq(apply_pullback(k, g), g, n, k.domain().tolerance());
}

template <class Scalar>
bool vector_lipschitz_check(const Kernel<Scalar>& k, const VecRandomVar<Scalar>& g, LnExponent n,
                            VectorNorm norm = VectorNorm::Euclidean) {
  return nearly_leq(bochner_norm(vector_pullback(k, g), n, norm), bochner_norm(g, n, norm), k.domain().tolerance());
}

/// Order of the pullback idempotents e1*, e2* as operators on L^n: the
/// composites equal e1* on every function, which compares supported rows and
/// supported columns only. The result does not depend on n.
template <class Scalar>
bool operator_leq(const IdempotentKernel<Scalar>& e1, const IdempotentKernel<Scalar>& e2) {
  require_same_space(e1.space(), e2.space(), "operator order on different spaces");
  const auto& space = e1.space();
  const double tol = space.tolerance();
  const Matrix<Scalar> left = e1.rows() * e2.rows();
  const Matrix<Scalar> right = e2.rows() * e1.rows();
  for (Index x = 0; x < left.rows(); ++x) {
    if (!space.in_support(x)) continue;
    for (Index y = 0; y < left.cols(); ++y) {
      if (!space.in_support(y)) continue;
      if (!nearly_equal(left(x, y), e1.rows()(x, y), tol) || !nearly_equal(right(x, y), e1.rows()(x, y), tol)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace krn
