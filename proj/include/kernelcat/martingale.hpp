#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kernelcat/functor.hpp"
#include "kernelcat/idempotent.hpp"
#include "kernelcat/topology.hpp"

namespace krn {

enum class Direction { Increasing, Decreasing };

inline std::string to_string(Direction d) { return d == Direction::Increasing ? "increasing" : "decreasing"; }

/// Monotone sequence of sub-sigma-algebras. Monotonicity is checked up to
/// null sets: consecutive completions must refine each other, so almost
/// surely equal partitions form a valid (constant) filtration.
template <class Scalar>
class Filtration {
 public:
  Filtration(ProbSpace<Scalar> space, std::vector<Partition> partitions, Direction direction)
      : space_(std::move(space)), partitions_(std::move(partitions)), direction_(direction) {
    if (partitions_.empty()) throw Error(ErrorCode::InvalidFiltration, "filtration has no levels");
    for (const auto& p : partitions_) {
      if (p.parent_size() != static_cast<std::size_t>(space_.size())) {
        throw Error(ErrorCode::InvalidFiltration, "partition size differs from the space");
      }
    }
    for (std::size_t i = 0; i + 1 < partitions_.size(); ++i) {
      const Partition& finer = direction_ == Direction::Increasing ? partitions_[i + 1] : partitions_[i];
      const Partition& coarser = direction_ == Direction::Increasing ? partitions_[i] : partitions_[i + 1];
      if (!as_refines(finer, coarser, space_)) {
        throw Error(ErrorCode::InvalidFiltration,
                    "levels " + std::to_string(i) + " and " + std::to_string(i + 1) + " are not " + to_string(direction_));
      }
    }
  }

  const ProbSpace<Scalar>& space() const { return space_; }
  const std::vector<Partition>& partitions() const { return partitions_; }
  const Partition& level(std::size_t i) const { return partitions_[i]; }
  std::size_t length() const { return partitions_.size(); }
  Direction direction() const { return direction_; }

 private:
  ProbSpace<Scalar> space_;
  std::vector<Partition> partitions_;
  Direction direction_;
};

/// Uniform space on 2^levels atoms with the dyadic cells of levels 0..levels.
template <class Scalar>
Filtration<Scalar> dyadic_filtration(std::size_t levels) {
  std::vector<Partition> parts;
  for (std::size_t l = 0; l <= levels; ++l) parts.push_back(dyadic_partition(levels, l));
  return Filtration<Scalar>(ProbSpace<Scalar>::uniform(Index{1} << levels), std::move(parts), Direction::Increasing);
}

/// Join of an increasing filtration; meet of the completions of a
/// decreasing one.
template <class Scalar>
Partition filtration_limit(const Filtration<Scalar>& f) {
  if (f.direction() == Direction::Increasing) {
    Partition out = f.level(0);
    for (std::size_t i = 1; i < f.length(); ++i) out = join_partitions(out, f.level(i));
    return out;
  }
  Partition out = complete_partition(f.level(0), f.space());
  for (std::size_t i = 1; i < f.length(); ++i) out = meet_partitions(out, complete_partition(f.level(i), f.space()));
  return out;
}

/// First level whose completion equals the completed limit.
template <class Scalar>
std::size_t filtration_stabilization_index(const Filtration<Scalar>& f) {
  const Partition limit = complete_partition(filtration_limit(f), f.space());
  for (std::size_t i = 0; i < f.length(); ++i)
    if (complete_partition(f.level(i), f.space()) == limit) return i;
  return f.length();
}

/// An adapted sequence of random variables; `is_martingale` decides whether
/// it satisfies the tower identities.
template <class Scalar>
class Martingale {
 public:
  Martingale(Filtration<Scalar> filtration, std::vector<RandomVar<Scalar>> rvs)
      : filtration_(std::move(filtration)), rvs_(std::move(rvs)) {
    if (rvs_.size() != filtration_.length()) {
      throw Error(ErrorCode::SizeMismatch, "one random variable per filtration level required");
    }
    for (const auto& f : rvs_) require_same_space(f.space(), filtration_.space(), "martingale variable");
  }

  const Filtration<Scalar>& filtration() const { return filtration_; }
  const std::vector<RandomVar<Scalar>>& rvs() const { return rvs_; }
  const RandomVar<Scalar>& at(std::size_t i) const { return rvs_[i]; }
  std::size_t length() const { return rvs_.size(); }

 private:
  Filtration<Scalar> filtration_;
  std::vector<RandomVar<Scalar>> rvs_;
};

/// rvs[i] = E[f | level i]. Forward martingale on an increasing filtration,
/// backward martingale on a decreasing one.
template <class Scalar>
Martingale<Scalar> martingale_from_terminal(const RandomVar<Scalar>& f, const Filtration<Scalar>& filt) {
  require_same_space(f.space(), filt.space(), "martingale_from_terminal");
  std::vector<RandomVar<Scalar>> rvs;
  rvs.reserve(filt.length());
  for (const auto& p : filt.partitions()) rvs.push_back(cond_expectation(f, p));
  return Martingale<Scalar>(filt, std::move(rvs));
}

/// Adaptedness plus the tower identity E[later-in-refinement | coarser] =
/// coarser-level variable, almost surely. Adjacent pairs suffice by the tower
/// property; `all_pairs` checks every i < j.
template <class Scalar>
bool is_martingale(const Martingale<Scalar>& m, bool all_pairs = false) {
  const auto& filt = m.filtration();
  for (std::size_t i = 0; i < m.length(); ++i)
    if (!as_measurable_wrt(m.at(i), filt.level(i))) return false;
  for (std::size_t i = 0; i < m.length(); ++i) {
    const std::size_t last = all_pairs ? m.length() : std::min(i + 2, m.length());
    for (std::size_t j = i + 1; j < last; ++j) {
      const bool forward = filt.direction() == Direction::Increasing;
      const std::size_t coarse = forward ? i : j;
      const std::size_t fine = forward ? j : i;
      if (!as_equal_rv(m.at(coarse), cond_expectation(m.at(fine), filt.level(coarse)))) return false;
    }
  }
  return true;
}

/// Distances || f_i - f_inf ||_n with f_inf = E[f | limit sigma-algebra].
template <class Scalar>
ConvergenceReport<Scalar> levy_report(const Martingale<Scalar>& m, LnExponent n) {
  if (!is_martingale(m)) throw Error(ErrorCode::NotAMartingale, "levy_report on a non-martingale");
  const auto& filt = m.filtration();
  const RandomVar<Scalar>& source = filt.direction() == Direction::Increasing ? m.rvs().back() : m.rvs().front();
  const RandomVar<Scalar> limit = cond_expectation(source, filtration_limit(filt));
  std::vector<Scalar> d;
  d.reserve(m.length());
  for (const auto& f : m.rvs()) d.push_back(ln_norm(f - limit, n));
  return make_report(std::move(d), filt.space().tolerance(), "L" + n.to_string());
}

/// CSV columns: step,ln_distance,n,stabilized.
template <class Scalar>
void write_levy_csv(std::ostream& out, const ConvergenceReport<Scalar>& r, LnExponent n) {
  out << "step,ln_distance,n,stabilized\n";
  for (std::size_t i = 0; i < r.step_distances.size(); ++i) {
    const bool tail = r.stabilization_index && i >= *r.stabilization_index;
    out << i << ',' << format_scalar(r.step_distances[i]) << ',' << n.to_string() << ',' << (tail ? "true" : "false")
        << '\n';
  }
}

/// The dyadic martingale f_n = 2^n on the first cell of level n, 0 elsewhere,
/// with its L^1 diagnostics.
template <class Scalar>
struct NonintegrableExample {
  Martingale<Scalar> martingale;
  std::vector<Scalar> l1_norms;        // ||f_n||_1, n = 0..K
  std::vector<Scalar> increment_norms; // ||f_{n+1} - f_n||_1, n = 0..K-1
};

template <class Scalar>
NonintegrableExample<Scalar> nonintegrable_example(std::size_t levels) {
  if (levels < 2) throw Error(ErrorCode::ConfigError, "the dyadic example needs at least 2 levels");
  if (levels > 24) throw Error(ErrorCode::TooLarge, "dyadic example limited to 24 levels");
  Filtration<Scalar> filt = dyadic_filtration<Scalar>(levels);
  const Index atoms = Index{1} << levels;
  std::vector<RandomVar<Scalar>> rvs;
  for (std::size_t n = 0; n <= levels; ++n) {
    const Index cell = Index{1} << (levels - n);
    Vector<Scalar> v = Vector<Scalar>::Zero(atoms);
    v.head(cell).setConstant(ratio<Scalar>(std::int64_t{1} << n));
    rvs.emplace_back(filt.space(), std::move(v));
  }
  std::vector<Scalar> norms, increments;
  for (std::size_t n = 0; n <= levels; ++n) norms.push_back(ln_norm(rvs[n], LnExponent(1)));
  for (std::size_t n = 0; n < levels; ++n) increments.push_back(ln_norm(rvs[n + 1] - rvs[n], LnExponent(1)));
  return {Martingale<Scalar>(std::move(filt), std::move(rvs)), std::move(norms), std::move(increments)};
}

inline constexpr Index kMaxExhaustiveOptimaSize = 8;

/// The pullback idempotent of the limit sigma-algebra is the least upper
/// bound (increasing) or greatest lower bound (decreasing) of the level
/// idempotents in the operator order, checked against every
/// partition-induced idempotent; and every level operator applied to each
/// indicator converges in L^n to the limit operator's image.
template <class Scalar>
bool preserves_optima_check(const Filtration<Scalar>& filt, LnExponent n) {
  const auto& space = filt.space();
  if (space.size() > kMaxExhaustiveOptimaSize) {
    throw Error(ErrorCode::TooLarge, "exhaustive optimum check limited to " +
                                         std::to_string(kMaxExhaustiveOptimaSize) + " outcomes");
  }
  const bool up = filt.direction() == Direction::Increasing;
  std::vector<IdempotentKernel<Scalar>> levels;
  for (const auto& p : filt.partitions()) levels.push_back(cond_exp_kernel(space, p));
  const IdempotentKernel<Scalar> limit = cond_exp_kernel(space, filtration_limit(filt));

  auto bounds = [&](const IdempotentKernel<Scalar>& candidate) {
    for (const auto& e : levels)
      if (up ? !operator_leq(e, candidate) : !operator_leq(candidate, e)) return false;
    return true;
  };
  if (!bounds(limit)) return false;
  for (const Partition& q : all_partitions(static_cast<std::size_t>(space.size()))) {
    const IdempotentKernel<Scalar> other = cond_exp_kernel(space, q);
    if (!bounds(other)) continue;
    if (up ? !operator_leq(limit, other) : !operator_leq(other, limit)) return false;
  }

  for (Index x = 0; x < space.size(); ++x) {
    std::vector<bool> mask(static_cast<std::size_t>(space.size()), false);
    mask[static_cast<std::size_t>(x)] = true;
    const RandomVar<Scalar> ind = indicator(space, mask);
    const RandomVar<Scalar> target = apply_pullback(limit.kernel(), ind);
    if (!nearly_zero(ln_norm(apply_pullback(levels.back().kernel(), ind) - target, n), space.tolerance())) {
      return false;
    }
  }
  return true;
}

/// Distances from a monotone chain of idempotents to its supremum
/// (increasing) or infimum (decreasing) in the one-sided metric, which on
/// idempotents is half the two-sided one.
template <class Scalar>
ConvergenceReport<Scalar> levi_property_check(std::span<const IdempotentKernel<Scalar>> chain) {
  if (chain.empty()) throw Error(ErrorCode::NotMonotone, "empty chain");
  bool up = true, down = true;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    up = up && idem_leq(chain[i], chain[i + 1]);
    down = down && idem_leq(chain[i + 1], chain[i]);
  }
  if (!up && !down) throw Error(ErrorCode::NotMonotone, "chain is neither increasing nor decreasing");
  const IdempotentKernel<Scalar> limit = up ? sup_idempotents(chain) : inf_idempotents(chain);
  std::vector<Scalar> d;
  d.reserve(chain.size());
  for (const auto& e : chain) d.push_back(one_sided_distance(e.kernel(), limit.kernel()));
  return make_report(std::move(d), chain.front().space().tolerance(), to_string(KernelMetric::OneSided));
}

/// Vector-valued Levy report: || E[G | level i] - E[G | limit] || in the
/// Bochner L^n norm over the chosen value norm.
template <class Scalar>
ConvergenceReport<Scalar> bochner_levy_report(const VecRandomVar<Scalar>& g, const Filtration<Scalar>& filt,
                                              LnExponent n, VectorNorm norm = VectorNorm::Euclidean) {
  require_same_space(g.space(), filt.space(), "bochner_levy_report");
  const VecRandomVar<Scalar> limit = cond_expectation(g, filtration_limit(filt));
  std::vector<Scalar> d;
  d.reserve(filt.length());
  for (const auto& p : filt.partitions()) d.push_back(bochner_norm(cond_expectation(g, p) - limit, n, norm));
  return make_report(std::move(d), filt.space().tolerance(), "bochner-L" + n.to_string() + "-" + to_string(norm));
}

}  // namespace krn
