#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kernelcat/prob_space.hpp"

namespace krn {

/// A sub-sigma-algebra of a finite discrete space, stored as the partition of
/// outcomes into its atoms. Always kept in canonical form: blocks ordered by
/// their minimal element, indices ascending inside each block.
class Partition {
 public:
  using Block = std::vector<std::size_t>;

  Partition(std::vector<Block> blocks, std::size_t parent_size);

  /// Outcomes with equal labels share a block; labels are arbitrary integers.
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition discrete(std::size_t n);
  static Partition trivial(std::size_t n);

  std::size_t parent_size() const { return labels_.size(); }
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(std::size_t b) const { return blocks_[b]; }
  /// Index of the block containing outcome x.
  std::size_t block_of(std::size_t x) const { return labels_[x]; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  /// Every block of *this lies inside a block of `coarser`, i.e. the
  /// sigma-algebra of `coarser` is contained in ours.
  bool refines(const Partition& coarser) const;

  bool is_discrete() const { return blocks_.size() == labels_.size(); }
  bool is_trivial() const { return blocks_.size() == 1; }

  /// "{{0,1},{2}}"
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.labels_ == b.labels_; }

 private:
  Partition() = default;
  void canonicalize_from_labels(std::span<const std::size_t> labels);

  std::vector<Block> blocks_;
  std::vector<std::size_t> labels_;
};

/// Common refinement: the join of the two sigma-algebras.
Partition join_partitions(const Partition& p, const Partition& q);

/// Finest common coarsening: the intersection of the two sigma-algebras.
Partition meet_partitions(const Partition& p, const Partition& q);

/// Splits every outcome flagged in `null_mask` into its own singleton.
Partition complete_partition(const Partition& p, const std::vector<bool>& null_mask);

template <class Scalar>
Partition complete_partition(const Partition& p, const ProbSpace<Scalar>& space) {
  if (p.parent_size() != static_cast<std::size_t>(space.size())) {
    throw Error(ErrorCode::SizeMismatch, "partition and space sizes differ");
  }
  return complete_partition(p, space.null_mask());
}

/// The sigma-algebra of sets of measure zero or one: the support as one
/// block, null outcomes as singletons.
template <class Scalar>
Partition null_sets_partition(const ProbSpace<Scalar>& space) {
  return complete_partition(Partition::trivial(static_cast<std::size_t>(space.size())), space);
}

/// Refinement of completions: the almost-surely-coarser preorder.
template <class Scalar>
bool as_refines(const Partition& finer, const Partition& coarser, const ProbSpace<Scalar>& space) {
  return complete_partition(finer, space).refines(complete_partition(coarser, space));
}

/// All set partitions of {0..n-1} in restricted-growth-string order.
std::vector<Partition> all_partitions(std::size_t n);

/// Partition of 2^levels dyadic atoms into 2^level consecutive cells.
Partition dyadic_partition(std::size_t levels, std::size_t level);

}  // namespace krn
