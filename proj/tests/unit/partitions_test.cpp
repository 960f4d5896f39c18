#include <gtest/gtest.h>

#include <set>

#include "nsub/partitions.hpp"

namespace nsub {
namespace {

using Partition = std::set<std::set<std::size_t>>;

// Oracle: every labelling of n points by n labels induces a partition;
// collecting them gives every partition exactly once.
std::set<Partition> all_partitions_by_labelling(std::size_t n) {
  std::set<Partition> out;
  std::vector<std::size_t> label(n, 0);
  while (true) {
    std::map<std::size_t, std::set<std::size_t>> blocks;
    for (std::size_t i = 0; i < n; ++i) blocks[label[i]].insert(i);
    Partition p;
    for (auto& [_, b] : blocks) p.insert(b);
    out.insert(p);
    std::size_t i = 0;
    while (i < n && ++label[i] == n) label[i++] = 0;
    if (i == n) break;
  }
  return out;
}

TEST(BellTest, KnownValues) {
  const std::vector<std::uint64_t> expected = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (std::size_t n = 0; n < expected.size(); ++n) EXPECT_EQ(bell_number(n), expected[n]) << n;
}

TEST(SetPartitionGeneratorTest, MatchesLabellingOracle) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto oracle = all_partitions_by_labelling(n);
    std::set<Partition> generated;
    std::size_t count = 0;
    SetPartitionGenerator gen(n);
    do {
      Partition p;
      for (const auto& b : gen.blocks()) p.insert(std::set<std::size_t>(b.begin(), b.end()));
      EXPECT_EQ(p.size(), gen.block_count());
      generated.insert(p);
      ++count;
    } while (gen.next());
    EXPECT_EQ(count, oracle.size()) << n;
    EXPECT_EQ(generated, oracle) << n;
    EXPECT_EQ(count, bell_number(n));
  }
}

TEST(SetPartitionGeneratorTest, OrderStartsCoarseEndsFine) {
  SetPartitionGenerator gen(4);
  EXPECT_EQ(gen.block_count(), 1u);
  std::vector<std::size_t> last;
  do last = gen.labels();
  while (gen.next());
  EXPECT_EQ(last, (std::vector<std::size_t>{0, 1, 2, 3}));
}

}  // namespace
}  // namespace nsub
