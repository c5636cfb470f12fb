#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "kernelcat/kernel.hpp"

namespace krn {

/// A measure-preserving endo-kernel with e * e = e almost surely.
template <class Scalar>
class IdempotentKernel {
 public:
  explicit IdempotentKernel(Kernel<Scalar> kernel) : kernel_(std::move(kernel)) {
    if (!kernel_.domain().same_as(kernel_.codomain())) {
      throw Error(ErrorCode::SpaceMismatch, "idempotent kernel must be an endo-kernel");
    }
    require_measure_preserving(kernel_, "idempotent kernel");
    if (!detail::product_as_equal(kernel_.rows(), kernel_.rows(), kernel_.rows(), kernel_.domain())) {
      throw Error(ErrorCode::NotIdempotent, "k * k differs from k on the support");
    }
  }

  /// Skips validation; for kernels idempotent by construction.
  static IdempotentKernel trusted(Kernel<Scalar> kernel) { return IdempotentKernel(std::move(kernel), 0); }

  const Kernel<Scalar>& kernel() const { return kernel_; }
  const ProbSpace<Scalar>& space() const { return kernel_.domain(); }
  const Matrix<Scalar>& rows() const { return kernel_.rows(); }

 private:
  IdempotentKernel(Kernel<Scalar> kernel, int) : kernel_(std::move(kernel)) {}
  Kernel<Scalar> kernel_;
};

template <class Scalar>
bool is_idempotent(const Kernel<Scalar>& k) {
  if (!k.domain().same_as(k.codomain())) throw Error(ErrorCode::SpaceMismatch, "is_idempotent: not an endo-kernel");
  require_measure_preserving(k, "is_idempotent");
  return detail::product_as_equal(k.rows(), k.rows(), k.rows(), k.domain());
}

/// The conditional expectation kernel e_B: the row at a supported x is the
/// conditional distribution p( . | block(x)); rows at null x are p.
template <class Scalar>
IdempotentKernel<Scalar> cond_exp_kernel(const ProbSpace<Scalar>& space, const Partition& part) {
  if (part.parent_size() != static_cast<std::size_t>(space.size())) {
    throw Error(ErrorCode::SizeMismatch, "partition and space sizes differ");
  }
  const Index n = space.size();
  std::vector<Scalar> block_mass(part.num_blocks(), Scalar(0));
  for (Index x = 0; x < n; ++x) block_mass[part.block_of(static_cast<std::size_t>(x))] += space.weight(x);

  Matrix<Scalar> rows = Matrix<Scalar>::Zero(n, n);
  for (Index x = 0; x < n; ++x) {
    if (!space.in_support(x)) {
      rows.row(x) = space.weights().transpose();
      continue;
    }
    const std::size_t b = part.block_of(static_cast<std::size_t>(x));
    for (std::size_t y : part.block(b)) rows(x, static_cast<Index>(y)) = space.weight(static_cast<Index>(y)) / block_mass[b];
  }
  return IdempotentKernel<Scalar>::trusted(Kernel<Scalar>(space, space, std::move(rows)));
}

/// Partition generated by the almost surely invariant sets of e: connected
/// components of the support under "e(y | x) > 0", each null outcome a
/// singleton.
template <class Scalar>
Partition invariant_partition(const IdempotentKernel<Scalar>& e) {
  const auto& space = e.space();
  const auto n = static_cast<std::size_t>(space.size());
  const double tol = space.tolerance();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t x = 0; x < n; ++x) {
    if (!space.in_support(static_cast<Index>(x))) continue;
    for (std::size_t y = 0; y < n; ++y) {
      if (!space.in_support(static_cast<Index>(y))) continue;
      if (nearly_zero(e.rows()(static_cast<Index>(x), static_cast<Index>(y)), tol)) continue;
      std::size_t a = find(x), b = find(y);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = find(x);
  return Partition::from_labels(labels);
}

/// Splitting (A, iota = pi_dag, pi) of an idempotent through the quotient by
/// its invariant partition: pi after pi_dag is id_A, pi_dag after pi is e.
template <class Scalar>
struct Splitting {
  ProbSpace<Scalar> quotient;
  Kernel<Scalar> pi;      // X -> A
  Kernel<Scalar> pi_dag;  // A -> X
  Partition invariant_partition;
};

template <class Scalar>
Splitting<Scalar> split(const IdempotentKernel<Scalar>& e) {
  Partition inv = invariant_partition(e);
  Coarsening<Scalar> c = coarsening_kernel(e.space(), inv);
  return {std::move(c.quotient), std::move(c.pi), std::move(c.pi_dag), std::move(inv)};
}

/// e1 <= e2 iff e1 e2 = e2 e1 = e1 almost surely.
template <class Scalar>
bool idem_leq(const IdempotentKernel<Scalar>& e1, const IdempotentKernel<Scalar>& e2) {
  require_same_space(e1.space(), e2.space(), "idem_leq: idempotents on different spaces");
  return detail::product_as_equal(e1.rows(), e2.rows(), e1.rows(), e1.space()) &&
         detail::product_as_equal(e2.rows(), e1.rows(), e1.rows(), e1.space());
}

/// e2 fixes iota_1 and pi_1 is unchanged by precomposing e2.
template <class Scalar>
bool fixes_splitting(const IdempotentKernel<Scalar>& e2, const Splitting<Scalar>& s1) {
  return as_equal_kernels(compose(s1.pi_dag, e2.kernel()), s1.pi_dag) &&
         as_equal_kernels(compose(e2.kernel(), s1.pi), s1.pi);
}

/// The comparison maps between the splittings of e1 <= e2:
/// f = pi_2 after iota_1 : A_1 -> A_2 and g = pi_1 after iota_2 : A_2 -> A_1.
template <class Scalar>
struct OrderWitnesses {
  Splitting<Scalar> lower;
  Splitting<Scalar> upper;
  Kernel<Scalar> f;
  Kernel<Scalar> g;
};

/// The only candidates for f and g, before checking that they commute.
template <class Scalar>
OrderWitnesses<Scalar> candidate_witnesses(const IdempotentKernel<Scalar>& e1, const IdempotentKernel<Scalar>& e2) {
  Splitting<Scalar> s1 = split(e1);
  Splitting<Scalar> s2 = split(e2);
  Kernel<Scalar> f = compose(s1.pi_dag, s2.pi);
  Kernel<Scalar> g = compose(s2.pi_dag, s1.pi);
  return {std::move(s1), std::move(s2), std::move(f), std::move(g)};
}

/// iota_2 after f = iota_1 and g after pi_2 = pi_1.
template <class Scalar>
bool witnesses_commute(const OrderWitnesses<Scalar>& w) {
  return as_equal_kernels(compose(w.f, w.upper.pi_dag), w.lower.pi_dag) &&
         as_equal_kernels(compose(w.upper.pi, w.g), w.lower.pi);
}

template <class Scalar>
OrderWitnesses<Scalar> eqcondorder_witnesses(const IdempotentKernel<Scalar>& e1, const IdempotentKernel<Scalar>& e2) {
  if (!idem_leq(e1, e2)) throw Error(ErrorCode::NotComparable, "order witnesses need e1 <= e2");
  return candidate_witnesses(e1, e2);
}

/// Outcome of the exhaustive audit of the correspondence between partitions
/// and idempotents on one space.
struct GaloisReport {
  std::size_t partitions = 0;
  std::size_t pairs_checked = 0;
  std::size_t adjunction_failures = 0;   // B subset of I_e  <=>  e_B <= e
  std::size_t fixpoint_failures = 0;     // e_{I_e} = e
  std::size_t completion_failures = 0;   // I_{e_B} = completion of B
  std::size_t monotonicity_failures = 0; // both maps order-preserving

  bool ok() const {
    return adjunction_failures == 0 && fixpoint_failures == 0 && completion_failures == 0 &&
           monotonicity_failures == 0;
  }
};

inline constexpr Index kMaxGaloisSize = 8;

/// Runs every law over every partition B and every idempotent e = e_C.
/// Sigma-algebra inclusion B subset of C is "C refines B".
template <class Scalar>
GaloisReport galois_roundtrips(const ProbSpace<Scalar>& space) {
  if (space.size() > kMaxGaloisSize) {
    throw Error(ErrorCode::TooLarge, "exhaustive audit limited to " + std::to_string(kMaxGaloisSize) + " outcomes");
  }
  const std::vector<Partition> parts = all_partitions(static_cast<std::size_t>(space.size()));
  std::vector<IdempotentKernel<Scalar>> idem;
  std::vector<Partition> inv;
  idem.reserve(parts.size());
  inv.reserve(parts.size());
  GaloisReport report;
  report.partitions = parts.size();
  for (const Partition& b : parts) {
    idem.push_back(cond_exp_kernel(space, b));
    inv.push_back(invariant_partition(idem.back()));
    if (!(inv.back() == complete_partition(b, space))) ++report.completion_failures;
    IdempotentKernel<Scalar> round = cond_exp_kernel(space, inv.back());
    if (!as_equal_kernels(round.kernel(), idem.back().kernel())) ++report.fixpoint_failures;
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      ++report.pairs_checked;
      const bool leq = idem_leq(idem[i], idem[j]);
      const bool included = inv[j].refines(parts[i]);
      if (leq != included) ++report.adjunction_failures;
      if (parts[j].refines(parts[i]) && !leq) ++report.monotonicity_failures;
      if (leq && !inv[j].refines(inv[i])) ++report.monotonicity_failures;
    }
  }
  return report;
}

/// Least upper bound of an increasing chain: e of the join of the invariant
/// partitions.
template <class Scalar>
IdempotentKernel<Scalar> sup_idempotents(std::span<const IdempotentKernel<Scalar>> chain) {
  if (chain.empty()) throw Error(ErrorCode::NotAChain, "empty chain");
  Partition joined = invariant_partition(chain.front());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!idem_leq(chain[i], chain[i + 1])) {
      throw Error(ErrorCode::NotAChain, "element " + std::to_string(i) + " is not below its successor");
    }
    joined = join_partitions(joined, invariant_partition(chain[i + 1]));
  }
  return cond_exp_kernel(chain.front().space(), joined);
}

/// Greatest lower bound of a decreasing chain: e of the meet of the completed
/// invariant partitions.
template <class Scalar>
IdempotentKernel<Scalar> inf_idempotents(std::span<const IdempotentKernel<Scalar>> chain) {
  if (chain.empty()) throw Error(ErrorCode::NotAChain, "empty chain");
  const auto& space = chain.front().space();
  Partition met = complete_partition(invariant_partition(chain.front()), space);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!idem_leq(chain[i + 1], chain[i])) {
      throw Error(ErrorCode::NotAChain, "element " + std::to_string(i) + " is not above its successor");
    }
    met = meet_partitions(met, complete_partition(invariant_partition(chain[i + 1]), space));
  }
  return cond_exp_kernel(space, met);
}

}  // namespace krn
