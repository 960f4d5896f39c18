#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nsub {

/// Walks every set partition of {0, ..., n-1} once, as restricted growth
/// strings in lexicographic order: labels()[i] is the block of element i,
/// labels()[0] == 0 and labels()[i] <= 1 + max(labels()[0..i-1]).
/// The first partition is the single block, the last is all singletons.
class SetPartitionGenerator {
 public:
  explicit SetPartitionGenerator(std::size_t n);

  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  std::size_t block_count() const noexcept;
  std::vector<std::vector<std::size_t>> blocks() const;

  /// Advances to the next partition; false once exhausted.
  bool next();

 private:
  std::vector<std::size_t> labels_;
  std::vector<std::size_t> prefix_max_;
};

/// Bell numbers from the Bell triangle. Exact up to n = 25.
std::uint64_t bell_number(std::size_t n);

}  // namespace nsub
