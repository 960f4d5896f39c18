#pragma once

// Interpretive layers sitting above the substrate. A layer may reference
// substrate entities and edges by id but never owns or changes them; its
// own entities live under "<layer name>/".

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsub/store.hpp"

namespace nsub {

struct Annotation {
  std::string target;  // substrate entity id or edge id
  std::string key;
  AttributeValue value;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct LocalEntity {
  std::string id;  // "<layer>/..."
  nlohmann::json payload;  // opaque

  friend bool operator==(const LocalEntity&, const LocalEntity&) = default;
};

struct LocalLink {
  std::string src;
  std::string label;
  std::string dst;

  friend bool operator==(const LocalLink&, const LocalLink&) = default;
};

struct ExtensionLayer {
  std::string name;
  std::vector<Annotation> annotations;
  std::vector<LocalEntity> local_entities;
  std::vector<LocalLink> local_links;

  friend bool operator==(const ExtensionLayer&, const ExtensionLayer&) = default;
};

enum class EventKind { Entity, Relation, Layer };

/// One substrate append or layer attachment, in the order it happened.
/// `index` points into records().entities, records().edges or the layer
/// attachment order.
struct JournalEntry {
  EventKind kind;
  std::size_t index;

  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

class LayeredStore {
 public:
  explicit LayeredStore(SubstrateSchema schema = default_schema());

  const SubstrateStore& base() const noexcept { return base_; }
  const SubstrateSchema& schema() const noexcept { return base_.schema(); }

  Entity create_entity(const RegimeId& regime, std::string id, Attributes attributes = {},
                       TemporalAnchor anchor = {});
  RelationEdge add_relation(RelationType rel_type, std::string_view src, std::string_view dst);

  /// Errors: DuplicateLayerName, DanglingTarget, NamespaceViolation,
  /// MalformedValue. Leaves the store untouched on error.
  void attach(ExtensionLayer layer);

  /// Layers keyed by name, so the set is independent of attachment order.
  const std::map<std::string, ExtensionLayer>& layers() const noexcept { return layers_; }
  const std::vector<std::string>& attachment_order() const noexcept { return order_; }
  const std::vector<JournalEntry>& journal() const noexcept { return journal_; }

 private:
  void validate(const ExtensionLayer& layer) const;

  SubstrateStore base_;
  std::map<std::string, ExtensionLayer> layers_;
  std::vector<std::string> order_;
  std::vector<JournalEntry> journal_;
};

LayeredStore apply_extension(LayeredStore store, ExtensionLayer layer);

/// The substrate records with every layer stripped.
SubstrateRecords substrate_projection(const LayeredStore& store);

struct ConservativityReport {
  bool conservative = true;
  std::string first_divergence;  // empty when conservative

  explicit operator bool() const noexcept { return conservative; }
};

ConservativityReport check_conservative(const SubstrateRecords& before, const SubstrateRecords& after);
ConservativityReport check_conservative(const LayeredStore& before, const LayeredStore& after);

struct Conflict {
  std::string target;
  std::string key;
  std::vector<std::pair<std::string, AttributeValue>> assertions;  // (layer, value)
};

/// Every (target, key) given non-equal values by two or more layers,
/// sorted by (target, key); assertions are listed by layer name. Reports
/// only, never resolves.
std::vector<Conflict> detect_conflicts(const LayeredStore& store);

}  // namespace nsub
