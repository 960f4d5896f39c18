#include "nsub/partitions.hpp"

#include <stdexcept>

namespace nsub {

SetPartitionGenerator::SetPartitionGenerator(std::size_t n) : labels_(n, 0), prefix_max_(n, 0) {}

std::size_t SetPartitionGenerator::block_count() const noexcept {
  return labels_.empty() ? 0 : prefix_max_.back() + 1;
}

std::vector<std::vector<std::size_t>> SetPartitionGenerator::blocks() const {
  std::vector<std::vector<std::size_t>> out(block_count());
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

bool SetPartitionGenerator::next() {
  const std::size_t n = labels_.size();
  for (std::size_t i = n; i-- > 1;) {
    if (labels_[i] <= prefix_max_[i - 1]) {
      ++labels_[i];
      prefix_max_[i] = std::max(prefix_max_[i - 1], labels_[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        labels_[j] = 0;
        prefix_max_[j] = prefix_max_[i];
      }
      return true;
    }
  }
  return false;
}

std::uint64_t bell_number(std::size_t n) {
  if (n > 25) throw std::out_of_range("bell_number: n > 25 overflows 64 bits");
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

}  // namespace nsub
