#include <gtest/gtest.h>

#include "nsub/codec.hpp"
#include "nsub/errors.hpp"
#include "nsub/layers.hpp"
#include "support/generators.hpp"

namespace nsub {
namespace {

using namespace regimes;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::MalformedValue;
}

LayeredStore sample() {
  LayeredStore store;
  store.create_entity(K1, "org-1");
  store.create_entity(K3, "permit-9");
  store.add_relation(RelationType::PartyTo, "org-1", "permit-9");
  return store;
}

TEST(LayersTest, DisagreeingLayersCoexist) {
  auto store = sample();
  const auto before = store;
  store.attach({"econ-1", {{"org-1", "status", std::string("solvent")}}, {}, {}});
  store.attach({"law-2", {{"org-1", "status", std::string("in-default")}}, {}, {}});
  EXPECT_TRUE(check_conservative(before, store));
  const auto conflicts = detect_conflicts(store);
  ASSERT_EQ(conflicts.size(), 1u);
  EXPECT_EQ(conflicts[0].target, "org-1");
  EXPECT_EQ(conflicts[0].key, "status");
  ASSERT_EQ(conflicts[0].assertions.size(), 2u);
  EXPECT_EQ(conflicts[0].assertions[0].first, "econ-1");
  EXPECT_EQ(conflicts[0].assertions[1].first, "law-2");
  EXPECT_EQ(store.attachment_order(), (std::vector<std::string>{"econ-1", "law-2"}));
}

TEST(LayersTest, DuplicateNameRejected) {
  auto store = sample();
  store.attach({"econ-1", {}, {}, {}});
  EXPECT_EQ(code_of([&] { store.attach({"econ-1", {}, {}, {}}); }), ErrorCode::DuplicateLayerName);
  EXPECT_EQ(store.layers().size(), 1u);
}

TEST(LayersTest, ValidationErrors) {
  auto store = sample();
  EXPECT_EQ(code_of([&] { store.attach({"", {}, {}, {}}); }), ErrorCode::MalformedId);
  EXPECT_EQ(code_of([&] { store.attach({"a/b", {}, {}, {}}); }), ErrorCode::MalformedId);
  EXPECT_EQ(code_of([&] { store.attach({"x", {{"org-404", "k", true}}, {}, {}}); }), ErrorCode::DanglingTarget);
  EXPECT_EQ(code_of([&] { store.attach({"x", {{"@9", "k", true}}, {}, {}}); }), ErrorCode::DanglingTarget);
  EXPECT_NO_THROW(apply_extension(store, {"x", {{"@2", "k", true}}, {}, {}}));
  EXPECT_EQ(code_of([&] { store.attach({"x", {}, {{"n1", {}}}, {}}); }), ErrorCode::NamespaceViolation);
  EXPECT_EQ(code_of([&] { store.attach({"x", {}, {{"y/n1", {}}}, {}}); }), ErrorCode::NamespaceViolation);
  EXPECT_EQ(code_of([&] { store.attach({"x", {}, {{"x/n1", {}}, {"x/n1", {}}}, {}}); }),
            ErrorCode::NamespaceViolation);
  EXPECT_EQ(code_of([&] { store.attach({"x", {}, {{"x/n1", {}}}, {{"x/n1", "l", "x/n2"}}}); }),
            ErrorCode::DanglingTarget);
  EXPECT_NO_THROW(apply_extension(store, {"x", {}, {{"x/n1", {}}}, {{"x/n1", "explains", "org-1"}}}));
  EXPECT_TRUE(store.layers().empty());
}

TEST(LayersTest, InterLayerReferencesRejected) {
  auto store = sample();
  store.attach({"a", {}, {{"a/n1", {}}}, {}});
  EXPECT_EQ(code_of([&] { store.attach({"b", {}, {{"b/n1", {}}}, {{"b/n1", "cites", "a/n1"}}}); }),
            ErrorCode::DanglingTarget);
}

TEST(LayersTest, EqualValuesAreNotConflicts) {
  auto store = sample();
  EXPECT_TRUE(detect_conflicts(store).empty());
  store.attach({"a", {{"org-1", "status", std::int64_t{1}}}, {}, {}});
  store.attach({"b", {{"org-1", "status", std::int64_t{1}}}, {}, {}});
  EXPECT_TRUE(detect_conflicts(store).empty());
  store.attach({"c", {{"org-1", "status", 1.0}}, {}, {}});  // different kind, different value
  EXPECT_EQ(detect_conflicts(store).size(), 1u);
}

TEST(LayersTest, SubstrateWritesAfterLayersStillAdmitted) {
  auto store = sample();
  store.attach({"a", {{"org-1", "status", true}}, {}, {}});
  store.create_entity(K5, "zone-1");
  store.add_relation(RelationType::AppliesIn, "permit-9", "zone-1");
  EXPECT_EQ(store.journal().size(), 6u);
  EXPECT_EQ(store.journal()[3].kind, EventKind::Layer);
  EXPECT_EQ(substrate_projection(store).edges.size(), 2u);
}

TEST(ConservativityTest, DetectsSeededFault) {
  const auto store = sample();
  auto before = substrate_projection(store);
  auto tampered = before;
  tampered.entities[0] = Entity(EntityId("org-1"), K1, 0, {{"status", true}}, {});
  const auto report = check_conservative(before, tampered);
  EXPECT_FALSE(report);
  EXPECT_NE(report.first_divergence.find("org-1"), std::string::npos);
  auto shorter = before;
  shorter.edges.clear();
  EXPECT_FALSE(check_conservative(before, shorter));
}

// Property: any set of valid layers, attached in any order, leaves the
// substrate projection byte-identical and yields the same layer set and
// conflict report.
TEST(ConservativityTest, RandomLayersAnyOrder) {
  testing::Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const auto base = testing::random_substrate(rng, 20);
    const std::size_t k = 1 + testing::pick(rng, 10);
    std::vector<ExtensionLayer> layers;
    for (std::size_t i = 0; i < k; ++i) layers.push_back(testing::random_layer(base, rng, "L" + std::to_string(i)));

    auto forward = base;
    for (const auto& l : layers) forward = apply_extension(std::move(forward), l);
    std::shuffle(layers.begin(), layers.end(), rng);
    auto shuffled = base;
    for (const auto& l : layers) shuffled.attach(l);

    ASSERT_TRUE(check_conservative(base, forward));
    ASSERT_TRUE(check_conservative(base, shuffled));
    EXPECT_EQ(forward.layers(), shuffled.layers());
    const auto c1 = detect_conflicts(forward), c2 = detect_conflicts(shuffled);
    ASSERT_EQ(c1.size(), c2.size());
    for (std::size_t i = 0; i < c1.size(); ++i) {
      EXPECT_EQ(c1[i].target, c2[i].target);
      EXPECT_EQ(c1[i].assertions, c2[i].assertions);
    }
  }
}

// Removing one layer leaves every other layer's content unchanged.
TEST(ConservativityTest, NonInterference) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto base = testing::random_substrate(rng, 15);
    std::vector<ExtensionLayer> layers;
    for (int i = 0; i < 4; ++i) layers.push_back(testing::random_layer(base, rng, "L" + std::to_string(i)));
    auto all = base;
    for (const auto& l : layers) all.attach(l);
    for (std::size_t drop = 0; drop < layers.size(); ++drop) {
      auto partial = base;
      for (std::size_t i = 0; i < layers.size(); ++i) {
        if (i != drop) partial.attach(layers[i]);
      }
      for (const auto& [name, layer] : partial.layers()) EXPECT_EQ(all.layers().at(name), layer);
      EXPECT_TRUE(check_conservative(all, partial));
    }
  }
}

}  // namespace
}  // namespace nsub
