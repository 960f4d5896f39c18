#include "nsub/store.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>

#include "nsub/errors.hpp"

namespace nsub {

Entity::Entity(EntityId id, RegimeId regime, std::uint64_t created_at, Attributes attributes,
               TemporalAnchor anchor)
    : id_(std::move(id)),
      regime_(std::move(regime)),
      created_at_(created_at),
      attributes_(std::move(attributes)),
      anchor_(std::move(anchor)) {}

std::string edge_id_for(std::uint64_t created_at) { return "@" + std::to_string(created_at); }

RelationEdge::RelationEdge(RelationType rel_type, EntityId src, EntityId dst, std::uint64_t created_at)
    : id_(edge_id_for(created_at)),
      rel_type_(rel_type),
      src_(std::move(src)),
      dst_(std::move(dst)),
      created_at_(created_at) {}

SubstrateStore::SubstrateStore(SubstrateSchema schema) : schema_(std::move(schema)) {}

SubstrateStore::SubstrateStore(const SubstrateStore& other) : schema_(other.schema_) {
  std::shared_lock lock(other.mutex_);
  entities_ = other.entities_;
  edges_ = other.edges_;
  entity_index_ = other.entity_index_;
  next_seq_ = other.next_seq_;
}

SubstrateStore& SubstrateStore::operator=(const SubstrateStore& other) {
  if (this != &other) {
    SubstrateStore copy(other);
    *this = std::move(copy);
  }
  return *this;
}

SubstrateStore::SubstrateStore(SubstrateStore&& other) noexcept
    : schema_(std::move(other.schema_)),
      entities_(std::move(other.entities_)),
      edges_(std::move(other.edges_)),
      entity_index_(std::move(other.entity_index_)),
      next_seq_(other.next_seq_) {}

SubstrateStore& SubstrateStore::operator=(SubstrateStore&& other) noexcept {
  if (this != &other) {
    std::unique_lock lock(mutex_);
    schema_ = std::move(other.schema_);
    entities_ = std::move(other.entities_);
    edges_ = std::move(other.edges_);
    entity_index_ = std::move(other.entity_index_);
    next_seq_ = other.next_seq_;
  }
  return *this;
}

namespace {

void check_anchor(const RegimeSpec& spec, const TemporalAnchor& anchor, const std::string& id) {
  const std::string who = "entity " + id + " (" + spec.id.str() + ", " +
                          std::string(to_string(spec.persistence)) + ")";
  const bool has_provenance = anchor.provenance && !anchor.provenance->empty();
  switch (spec.persistence) {
    case PersistenceClass::Endurant:
      if (!anchor.empty()) {
        throw Error(ErrorCode::ForbiddenTemporalAnchor, who + " takes no temporal or provenance anchor");
      }
      return;
    case PersistenceClass::Occurrent:
      if (anchor.asserted_at) {
        throw Error(ErrorCode::ForbiddenTemporalAnchor, who + " takes occurredAt, not assertedAt");
      }
      if (!anchor.occurred_at || !has_provenance) {
        throw Error(ErrorCode::MissingTemporalAnchor, who + " requires occurredAt and provenance");
      }
      return;
    case PersistenceClass::Record:
      if (anchor.occurred_at) {
        throw Error(ErrorCode::ForbiddenTemporalAnchor, who + " takes assertedAt, not occurredAt");
      }
      if (!anchor.asserted_at || !has_provenance) {
        throw Error(ErrorCode::MissingTemporalAnchor, who + " requires assertedAt and provenance");
      }
      return;
  }
}

}  // namespace

Entity SubstrateStore::create_entity(const RegimeId& regime, std::string id, Attributes attributes,
                                     TemporalAnchor anchor) {
  EntityId key(std::move(id));
  const RegimeSpec* spec = schema_.find_regime(regime);
  if (!spec) throw Error(ErrorCode::UnknownRegime, "undeclared regime " + regime.str());
  for (const auto& [name, value] : attributes) {
    if (name.empty() || !is_valid_utf8(name)) {
      throw Error(ErrorCode::MalformedValue, "attribute names must be non-empty UTF-8");
    }
    validate_value(value);
  }
  if (anchor.provenance && !is_valid_utf8(*anchor.provenance)) {
    throw Error(ErrorCode::MalformedValue, "provenance is not valid UTF-8");
  }

  std::unique_lock lock(mutex_);
  if (entity_index_.contains(key.str())) {
    throw Error(ErrorCode::DuplicateId, "entity id " + key.str() + " is already bound");
  }
  check_anchor(*spec, anchor, key.str());
  Entity entity(key, regime, next_seq_, std::move(attributes), std::move(anchor));
  entity_index_.emplace(key.str(), entities_.size());
  entities_.push_back(entity);
  ++next_seq_;
  return entity;
}

const Entity* SubstrateStore::find_locked(std::string_view id) const {
  auto it = entity_index_.find(std::string(id));
  return it == entity_index_.end() ? nullptr : &entities_[it->second];
}

RelationEdge SubstrateStore::add_relation(RelationType rel_type, std::string_view src,
                                          std::string_view dst) {
  EntityId src_id{std::string(src)};
  EntityId dst_id{std::string(dst)};

  std::unique_lock lock(mutex_);
  const Entity* s = find_locked(src_id.str());
  const Entity* d = find_locked(dst_id.str());
  if (!s) throw Error(ErrorCode::UnknownEntity, "no entity " + src_id.str());
  if (!d) throw Error(ErrorCode::UnknownEntity, "no entity " + dst_id.str());
  const auto verdict = check_admissible(schema_, rel_type, s->regime(), d->regime());
  if (!verdict) throw Error(ErrorCode::RegimeViolation, verdict.describe());

  RelationEdge edge(rel_type, std::move(src_id), std::move(dst_id), next_seq_);
  edges_.push_back(edge);
  ++next_seq_;
  return edge;
}

std::optional<Entity> SubstrateStore::get_entity(std::string_view id) const {
  std::shared_lock lock(mutex_);
  const Entity* e = find_locked(id);
  return e ? std::optional<Entity>(*e) : std::nullopt;
}

std::optional<RelationEdge> SubstrateStore::get_edge(std::string_view id) const {
  if (id.size() < 2 || id.front() != '@') return std::nullopt;
  std::uint64_t seq = 0;
  const auto* first = id.data() + 1;
  const auto* last = id.data() + id.size();
  auto [ptr, ec] = std::from_chars(first, last, seq);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  std::shared_lock lock(mutex_);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), seq,
                             [](const RelationEdge& e, std::uint64_t key) { return e.created_at() < key; });
  if (it == edges_.end() || it->id() != id) return std::nullopt;
  return *it;
}

bool SubstrateStore::resolves(std::string_view id) const {
  if (get_edge(id)) return true;
  std::shared_lock lock(mutex_);
  return find_locked(id) != nullptr;
}

std::vector<RelationEdge> SubstrateStore::query_edges(const EdgeFilter& filter) const {
  std::shared_lock lock(mutex_);
  std::vector<RelationEdge> out;
  for (const auto& edge : edges_) {
    if (filter.rel_type && edge.rel_type() != *filter.rel_type) continue;
    if (filter.entity && edge.src() != *filter.entity && edge.dst() != *filter.entity) continue;
    if (filter.src_regime && find_locked(edge.src().str())->regime() != *filter.src_regime) continue;
    if (filter.dst_regime && find_locked(edge.dst().str())->regime() != *filter.dst_regime) continue;
    out.push_back(edge);
  }
  return out;
}

SubstrateRecords SubstrateStore::records() const {
  std::shared_lock lock(mutex_);
  return {entities_, edges_};
}

std::size_t SubstrateStore::entity_count() const {
  std::shared_lock lock(mutex_);
  return entities_.size();
}

std::size_t SubstrateStore::edge_count() const {
  std::shared_lock lock(mutex_);
  return edges_.size();
}

std::uint64_t SubstrateStore::next_seq() const {
  std::shared_lock lock(mutex_);
  return next_seq_;
}

}  // namespace nsub
