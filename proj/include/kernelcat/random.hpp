#pragma once

#include <cstdint>
#include <vector>

#include "kernelcat/kernel.hpp"
#include "kernelcat/partition.hpp"
#include "kernelcat/random_var.hpp"

namespace krn {

/// SplitMix64. `split()` derives an independent child stream, so every
/// experiment and every trial draws from its own seed-determined generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  SplitMix64 split() { return SplitMix64((*this)() ^ 0x6A09E667F3BCC909ULL); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>((*this)() % span);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Random probability vector built from small integer masses, so that the
/// rational version is exact and cheap. Each outcome is null with
/// probability `null_fraction`; at least one outcome stays supported.
template <class Scalar>
ProbSpace<Scalar> random_space(SplitMix64& rng, Index n, double null_fraction = 0.0) {
  std::vector<std::int64_t> mass(static_cast<std::size_t>(n));
  std::int64_t total = 0;
  for (auto& m : mass) {
    m = rng.uniform() < null_fraction ? 0 : rng.uniform_int(1, 9);
    total += m;
  }
  if (total == 0) {
    mass[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] = 1;
    total = 1;
  }
  Vector<Scalar> w(n);
  for (Index i = 0; i < n; ++i) w[i] = ratio<Scalar>(mass[static_cast<std::size_t>(i)], total);
  if constexpr (!is_exact_v<Scalar>) w /= w.sum();
  return ProbSpace<Scalar>(std::move(w));
}

/// Random row-stochastic matrix with integer masses in [0, 9] and sparse
/// zeros; every row has at least one positive entry.
template <class Scalar>
Matrix<Scalar> random_stochastic(SplitMix64& rng, Index rows, Index cols, double zero_fraction = 0.3) {
  Matrix<Scalar> m(rows, cols);
  for (Index x = 0; x < rows; ++x) {
    std::vector<std::int64_t> mass(static_cast<std::size_t>(cols));
    std::int64_t total = 0;
    for (auto& v : mass) {
      v = rng.uniform() < zero_fraction ? 0 : rng.uniform_int(1, 9);
      total += v;
    }
    if (total == 0) {
      mass[static_cast<std::size_t>(rng.uniform_int(0, cols - 1))] = 1;
      total = 1;
    }
    for (Index y = 0; y < cols; ++y) m(x, y) = ratio<Scalar>(mass[static_cast<std::size_t>(y)], total);
  }
  return m;
}

/// Measure-preserving kernel from `domain` onto the image measure of a random
/// stochastic matrix.
template <class Scalar>
Kernel<Scalar> random_kernel(SplitMix64& rng, const ProbSpace<Scalar>& domain, Index codomain_size,
                             double zero_fraction = 0.3) {
  Matrix<Scalar> rows = random_stochastic<Scalar>(rng, domain.size(), codomain_size, zero_fraction);
  Vector<Scalar> q = (domain.weights().transpose() * rows).transpose();
  if constexpr (!is_exact_v<Scalar>) q /= q.sum();
  return Kernel<Scalar>(domain, ProbSpace<Scalar>(std::move(q), domain.tolerance()), std::move(rows));
}

/// Kernel into a given codomain that is generally not measure-preserving.
template <class Scalar>
Kernel<Scalar> random_kernel_between(SplitMix64& rng, const ProbSpace<Scalar>& domain, const ProbSpace<Scalar>& codomain,
                                     double zero_fraction = 0.3) {
  return Kernel<Scalar>(domain, codomain, random_stochastic<Scalar>(rng, domain.size(), codomain.size(), zero_fraction));
}

/// Partition with at most `max_blocks` blocks from uniformly drawn labels.
inline Partition random_partition(SplitMix64& rng, std::size_t n, std::size_t max_blocks) {
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_blocks) - 1));
  return Partition::from_labels(labels);
}

/// Merges random pairs of blocks: a partition refined by `p`.
inline Partition random_coarsening(SplitMix64& rng, const Partition& p) {
  if (p.num_blocks() == 1) return p;
  std::vector<std::size_t> relabel(p.num_blocks());
  const auto merges = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>((p.num_blocks() + 1) / 2)));
  for (std::size_t b = 0; b < relabel.size(); ++b) relabel[b] = b;
  for (std::size_t k = 0; k < merges; ++k) {
    const auto a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(relabel.size()) - 1));
    const auto b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(relabel.size()) - 1));
    const std::size_t from = relabel[b], to = relabel[a];
    for (auto& r : relabel)
      if (r == from) r = to;
  }
  std::vector<std::size_t> labels(p.parent_size());
  for (std::size_t x = 0; x < labels.size(); ++x) labels[x] = relabel[p.block_of(x)];
  return Partition::from_labels(labels);
}

/// Splits each block in two at a random point with probability 1/2: a
/// partition refining `p`.
inline Partition random_refinement(SplitMix64& rng, const Partition& p) {
  std::vector<std::size_t> labels(p.parent_size());
  std::size_t next = 0;
  for (const auto& block : p.blocks()) {
    const std::size_t cut = block.size() > 1 && rng.uniform() < 0.5
                                ? static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(block.size()) - 1))
                                : block.size();
    for (std::size_t i = 0; i < block.size(); ++i) labels[block[i]] = i < cut ? next : next + 1;
    next += 2;
  }
  return Partition::from_labels(labels);
}

/// Random variable with small integer values (exact in both modes).
template <class Scalar>
RandomVar<Scalar> random_rv(SplitMix64& rng, const ProbSpace<Scalar>& space, std::int64_t lo = -9, std::int64_t hi = 9) {
  Vector<Scalar> v(space.size());
  for (Index i = 0; i < space.size(); ++i) v[i] = ratio<Scalar>(rng.uniform_int(lo, hi));
  return RandomVar<Scalar>(space, std::move(v));
}

template <class Scalar>
VecRandomVar<Scalar> random_vec_rv(SplitMix64& rng, const ProbSpace<Scalar>& space, Index dim,
                                   std::int64_t lo = -9, std::int64_t hi = 9) {
  Matrix<Scalar> v(space.size(), dim);
  for (Index i = 0; i < space.size(); ++i)
    for (Index j = 0; j < dim; ++j) v(i, j) = ratio<Scalar>(rng.uniform_int(lo, hi));
  return VecRandomVar<Scalar>(space, std::move(v));
}

}  // namespace krn
