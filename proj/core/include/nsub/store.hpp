#pragma once

// Append-only entity/relation store. Identity keys and regime membership
// are fixed at creation; the schema is fixed at construction, so an edge
// admitted once stays admissible.
//
// Threading: one writer, many readers. Reads take a shared lock and hand
// back copies, which are safe to move across threads.

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nsub/ids.hpp"
#include "nsub/schema.hpp"

namespace nsub {

using Attributes = std::map<std::string, AttributeValue>;

/// Temporal and provenance bundle. OCCURRENT regimes require occurred_at
/// and provenance, RECORD regimes require asserted_at and provenance, and
/// ENDURANT regimes take none of them.
struct TemporalAnchor {
  std::optional<Timestamp> occurred_at;
  std::optional<Timestamp> asserted_at;
  std::optional<std::string> provenance;

  bool empty() const noexcept { return !occurred_at && !asserted_at && !provenance; }
  friend bool operator==(const TemporalAnchor&, const TemporalAnchor&) = default;
};

class Entity {
 public:
  Entity(EntityId id, RegimeId regime, std::uint64_t created_at, Attributes attributes,
         TemporalAnchor anchor);

  const EntityId& id() const noexcept { return id_; }
  const RegimeId& regime() const noexcept { return regime_; }
  std::uint64_t created_at() const noexcept { return created_at_; }
  const Attributes& attributes() const noexcept { return attributes_; }
  const TemporalAnchor& anchor() const noexcept { return anchor_; }
  const std::optional<Timestamp>& occurred_at() const noexcept { return anchor_.occurred_at; }
  const std::optional<Timestamp>& asserted_at() const noexcept { return anchor_.asserted_at; }
  const std::optional<std::string>& provenance() const noexcept { return anchor_.provenance; }

  friend bool operator==(const Entity&, const Entity&) = default;

 private:
  EntityId id_;
  RegimeId regime_;
  std::uint64_t created_at_;
  Attributes attributes_;
  TemporalAnchor anchor_;
};

/// Edge ids are "@<createdAt>"; the '@' prefix is unavailable to entities.
class RelationEdge {
 public:
  RelationEdge(RelationType rel_type, EntityId src, EntityId dst, std::uint64_t created_at);

  const std::string& id() const noexcept { return id_; }
  RelationType rel_type() const noexcept { return rel_type_; }
  const EntityId& src() const noexcept { return src_; }
  const EntityId& dst() const noexcept { return dst_; }
  std::uint64_t created_at() const noexcept { return created_at_; }

  friend bool operator==(const RelationEdge&, const RelationEdge&) = default;

 private:
  std::string id_;
  RelationType rel_type_;
  EntityId src_;
  EntityId dst_;
  std::uint64_t created_at_;
};

std::string edge_id_for(std::uint64_t created_at);

/// Compile-time view of the store contract: Entity offers no way to
/// reassign an id or a regime after construction.
template <typename E>
concept RegimeReassignable = requires(E& e, RegimeId r, EntityId id) {
  { e.set_regime(r) };
} || requires(E& e, RegimeId r) { e.regime() = r; } || requires(E& e, EntityId id) { e.id() = id; };

inline constexpr bool kEntityIdentityWriteOnce = !RegimeReassignable<Entity>;

struct EdgeFilter {
  std::optional<RelationType> rel_type;
  std::optional<RegimeId> src_regime;
  std::optional<RegimeId> dst_regime;
  std::optional<EntityId> entity;
};

/// Snapshot of the substrate: entities and edges, each in append order.
struct SubstrateRecords {
  std::vector<Entity> entities;
  std::vector<RelationEdge> edges;

  friend bool operator==(const SubstrateRecords&, const SubstrateRecords&) = default;
};

class SubstrateStore {
 public:
  explicit SubstrateStore(SubstrateSchema schema = default_schema());
  SubstrateStore(const SubstrateStore& other);
  SubstrateStore& operator=(const SubstrateStore& other);
  SubstrateStore(SubstrateStore&& other) noexcept;
  SubstrateStore& operator=(SubstrateStore&& other) noexcept;

  const SubstrateSchema& schema() const noexcept { return schema_; }

  /// Errors: MalformedId, UnknownRegime, DuplicateId, MissingTemporalAnchor,
  /// ForbiddenTemporalAnchor, MalformedValue.
  Entity create_entity(const RegimeId& regime, std::string id, Attributes attributes = {},
                       TemporalAnchor anchor = {});

  /// Errors: MalformedId, UnknownEntity, UnknownRelationType, RegimeViolation.
  RelationEdge add_relation(RelationType rel_type, std::string_view src, std::string_view dst);

  std::optional<Entity> get_entity(std::string_view id) const;
  std::optional<RelationEdge> get_edge(std::string_view id) const;
  /// True when `id` names an entity or an edge.
  bool resolves(std::string_view id) const;

  /// Edges matching every supplied field, in append order.
  std::vector<RelationEdge> query_edges(const EdgeFilter& filter = {}) const;

  SubstrateRecords records() const;
  std::size_t entity_count() const;
  std::size_t edge_count() const;
  std::uint64_t next_seq() const;

 private:
  const Entity* find_locked(std::string_view id) const;

  SubstrateSchema schema_;
  mutable std::shared_mutex mutex_;
  std::vector<Entity> entities_;
  std::vector<RelationEdge> edges_;
  std::unordered_map<std::string, std::size_t> entity_index_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace nsub
