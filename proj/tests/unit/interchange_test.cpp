#include <gtest/gtest.h>

#include <sstream>

#include "nsub/errors.hpp"
#include "nsub/interchange.hpp"
#include "support/generators.hpp"

namespace nsub {
namespace {

using namespace regimes;

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

TEST(ExportLogTest, EmptyAndSingle) {
  LayeredStore store;
  EXPECT_EQ(export_log(store), "");
  store.create_entity(K1, "org-1");
  EXPECT_EQ(export_log(store),
            R"({"kind":"entity","payload":{"attributes":{},"createdAt":0,"id":"org-1","regime":"K1"},"seq":0})"
            "\n");
}

TEST(ImportLogTest, ThreeLineLog) {
  const std::string log =
      R"({"kind":"entity","payload":{"attributes":{},"createdAt":0,"id":"org-1","regime":"K1"},"seq":0})"
      "\n"
      R"({"kind":"entity","payload":{"attributes":{},"createdAt":1,"id":"permit-9","regime":"K3"},"seq":1})"
      "\n"
      R"({"kind":"relation","payload":{"createdAt":2,"dst":"permit-9","id":"@2","relType":"party-to","src":"org-1"},"seq":2})"
      "\n";
  const auto store = import_log(log);
  EXPECT_EQ(store.base().entity_count(), 2u);
  EXPECT_EQ(store.base().edge_count(), 1u);
  EXPECT_EQ(export_log(store), log);
}

TEST(ImportLogTest, SequenceGap) {
  const std::string log =
      R"({"kind":"entity","payload":{"attributes":{},"createdAt":0,"id":"org-1","regime":"K1"},"seq":0})"
      "\n"
      R"({"kind":"entity","payload":{"attributes":{},"createdAt":1,"id":"permit-9","regime":"K3"},"seq":2})"
      "\n";
  try {
    import_log(log);
    FAIL();
  } catch (const ImportError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SequenceGap);
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ImportLogTest, ReplayViolationCarriesCause) {
  const std::string log =
      R"({"kind":"entity","payload":{"attributes":{},"createdAt":0,"id":"inspection-4","occurredAt":"2024-01-05T00:00:00Z","provenance":"field-report","regime":"K4"},"seq":0})"
      "\n"
      R"({"kind":"entity","payload":{"attributes":{},"createdAt":1,"id":"permit-9","regime":"K3"},"seq":1})"
      "\n"
      R"({"kind":"relation","payload":{"createdAt":2,"dst":"permit-9","id":"@2","relType":"acts-on","src":"inspection-4"},"seq":2})"
      "\n";
  try {
    import_log(log);
    FAIL();
  } catch (const ImportError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReplayViolation);
    EXPECT_EQ(e.cause(), ErrorCode::RegimeViolation);
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ImportLogTest, MalformedLines) {
  const std::string good =
      R"({"kind":"entity","payload":{"attributes":{},"createdAt":0,"id":"org-1","regime":"K1"},"seq":0})";
  for (const std::string& bad : {good, good + " \n", good + "\r\n", std::string("\n"), std::string("{}\n"),
                                 std::string("not json\n"),
                                 std::string(R"({"kind":"vote","payload":{},"seq":0})") + "\n"}) {
    try {
      import_log(bad);
      ADD_FAILURE() << bad;
    } catch (const ImportError& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedLine) << bad;
    }
  }
}

TEST(RoundTripTest, RandomStoresAreByteIdentical) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto store = testing::random_substrate(rng, 25);
    const std::size_t k = testing::pick(rng, 4);
    for (std::size_t i = 0; i < k; ++i) store.attach(testing::random_layer(store, rng, "L" + std::to_string(i)));
    testing::add_random_entity(store, rng, 1000);
    const auto bytes = export_log(store);
    const auto back = import_log(bytes);
    EXPECT_EQ(export_log(back), bytes);
    EXPECT_EQ(back.base().records(), store.base().records());
    EXPECT_EQ(back.layers(), store.layers());
    EXPECT_EQ(export_clif(back), export_clif(store));
  }
}

TEST(ClifTest, EmptyStoreAxioms) {
  const auto text = export_clif(SubstrateStore{});
  EXPECT_EQ(clif_axiom_count(default_schema()), 25u);
  EXPECT_EQ(count_lines_starting(text, "(forall (x) (not (and"), 15u);
  EXPECT_EQ(count_lines_starting(text, "(forall (x y) (if"), 10u);
}

TEST(ClifTest, EdgeSentence) {
  LayeredStore store;
  store.create_entity(K1, "org-1");
  store.create_entity(K3, "permit-9");
  store.add_relation(RelationType::PartyTo, "org-1", "permit-9");
  const auto text = export_clif(store);
  EXPECT_NE(text.find("\n(party-to org-1 permit-9)\n"), std::string::npos);
  EXPECT_NE(text.find("\n(K1 org-1)\n"), std::string::npos);
}

TEST(ClifTest, LayersLeaveSubstrateSectionUntouched) {
  testing::Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto store = testing::random_substrate(rng, 15);
    const auto before = clif_substrate_section(export_clif(store));
    store.attach(testing::random_layer(store, rng, "econ-1"));
    store.attach(testing::random_layer(store, rng, "law-2"));
    const auto full = export_clif(store);
    EXPECT_NE(full.find(";; layer: econ-1"), std::string::npos);
    EXPECT_EQ(clif_substrate_section(full), before);
    EXPECT_EQ(clif_substrate_section(full), export_clif(store.base()));
  }
}

}  // namespace
}  // namespace nsub
