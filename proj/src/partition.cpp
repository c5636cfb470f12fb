#include "kernelcat/partition.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace krn {

namespace {

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::vector<std::size_t> parent;
};

void require_same_size(const Partition& p, const Partition& q) {
  if (p.parent_size() != q.parent_size()) {
    throw Error(ErrorCode::SizeMismatch, "partitions of " + std::to_string(p.parent_size()) +
                                             " and " + std::to_string(q.parent_size()) + " outcomes");
  }
}

}  // namespace

Partition::Partition(std::vector<Block> blocks, std::size_t parent_size) {
  if (parent_size == 0) throw Error(ErrorCode::InvalidPartition, "empty parent set");
  std::vector<std::size_t> labels(parent_size, kUnassigned);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw Error(ErrorCode::InvalidPartition, "empty block");
    for (std::size_t x : blocks[b]) {
      if (x >= parent_size) {
        throw Error(ErrorCode::InvalidPartition, "outcome " + std::to_string(x) + " out of range");
      }
      if (labels[x] != kUnassigned) {
        throw Error(ErrorCode::InvalidPartition, "outcome " + std::to_string(x) + " in two blocks");
      }
      labels[x] = b;
    }
  }
  for (std::size_t x = 0; x < parent_size; ++x) {
    if (labels[x] == kUnassigned) {
      throw Error(ErrorCode::InvalidPartition, "outcome " + std::to_string(x) + " not covered");
    }
  }
  canonicalize_from_labels(labels);
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  if (labels.empty()) throw Error(ErrorCode::InvalidPartition, "empty parent set");
  Partition p;
  p.canonicalize_from_labels(labels);
  return p;
}

Partition Partition::discrete(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(labels);
}

Partition Partition::trivial(std::size_t n) { return from_labels(std::vector<std::size_t>(n, 0)); }

void Partition::canonicalize_from_labels(std::span<const std::size_t> labels) {
  // Relabel in order of first appearance, which orders blocks by minimal element.
  labels_.assign(labels.size(), kUnassigned);
  blocks_.clear();
  std::unordered_map<std::size_t, std::size_t> seen;  // raw label -> canonical
  for (std::size_t x = 0; x < labels.size(); ++x) {
    auto [it, inserted] = seen.try_emplace(labels[x], blocks_.size());
    std::size_t canonical = it->second;
    if (inserted) blocks_.emplace_back();
    labels_[x] = canonical;
    blocks_[canonical].push_back(x);
  }
}

bool Partition::refines(const Partition& coarser) const {
  if (parent_size() != coarser.parent_size()) return false;
  for (const Block& block : blocks_) {
    std::size_t target = coarser.block_of(block.front());
    for (std::size_t x : block)
      if (coarser.block_of(x) != target) return false;
  }
  return true;
}

std::string Partition::to_string() const {
  std::string out = "{";
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) out += ",";
    out += "{";
    for (std::size_t i = 0; i < blocks_[b].size(); ++i) {
      if (i) out += ",";
      out += std::to_string(blocks_[b][i]);
    }
    out += "}";
  }
  return out + "}";
}

Partition join_partitions(const Partition& p, const Partition& q) {
  require_same_size(p, q);
  const std::size_t n = p.parent_size();
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = p.block_of(x) * q.num_blocks() + q.block_of(x);
  return Partition::from_labels(labels);
}

Partition meet_partitions(const Partition& p, const Partition& q) {
  require_same_size(p, q);
  DisjointSets sets(p.parent_size());
  for (const auto* part : {&p, &q})
    for (const auto& block : part->blocks())
      for (std::size_t x : block) sets.unite(block.front(), x);
  std::vector<std::size_t> labels(p.parent_size());
  for (std::size_t x = 0; x < labels.size(); ++x) labels[x] = sets.find(x);
  return Partition::from_labels(labels);
}

Partition complete_partition(const Partition& p, const std::vector<bool>& null_mask) {
  if (null_mask.size() != p.parent_size()) {
    throw Error(ErrorCode::SizeMismatch, "partition and space sizes differ");
  }
  const std::size_t n = p.parent_size();
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = null_mask[x] ? n + x : p.block_of(x);
  return Partition::from_labels(labels);
}

std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  if (n == 0) return out;
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<std::size_t> a(n, 0), running_max(n, 0);
  while (true) {
    out.push_back(Partition::from_labels(a));
    std::size_t i = n - 1;
    while (i > 0 && a[i] == running_max[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    running_max[i] = std::max(running_max[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      running_max[j] = running_max[i];
    }
  }
  return out;
}

Partition dyadic_partition(std::size_t levels, std::size_t level) {
  if (level > levels) throw Error(ErrorCode::InvalidPartition, "dyadic level beyond resolution");
  const std::size_t atoms = std::size_t{1} << levels;
  const std::size_t cell = std::size_t{1} << (levels - level);
  std::vector<std::size_t> labels(atoms);
  for (std::size_t x = 0; x < atoms; ++x) labels[x] = x / cell;
  return Partition::from_labels(labels);
}

}  // namespace krn
