#include "nsub/layers.hpp"

#include <set>

#include "nsub/codec.hpp"
#include "nsub/errors.hpp"

namespace nsub {

LayeredStore::LayeredStore(SubstrateSchema schema) : base_(std::move(schema)) {}

Entity LayeredStore::create_entity(const RegimeId& regime, std::string id, Attributes attributes,
                                   TemporalAnchor anchor) {
  Entity e = base_.create_entity(regime, std::move(id), std::move(attributes), std::move(anchor));
  journal_.push_back({EventKind::Entity, base_.entity_count() - 1});
  return e;
}

RelationEdge LayeredStore::add_relation(RelationType rel_type, std::string_view src, std::string_view dst) {
  RelationEdge edge = base_.add_relation(rel_type, src, dst);
  journal_.push_back({EventKind::Relation, base_.edge_count() - 1});
  return edge;
}

namespace {

bool has_whitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n\v\f") != std::string_view::npos;
}

}  // namespace

void LayeredStore::validate(const ExtensionLayer& layer) const {
  const auto& name = layer.name;
  if (name.empty() || has_whitespace(name) || name.find('/') != std::string::npos ||
      !is_valid_utf8(name)) {
    throw Error(ErrorCode::MalformedId, "layer name '" + name + "' must be non-empty, without '/' or whitespace");
  }
  if (layers_.contains(name)) throw Error(ErrorCode::DuplicateLayerName, "layer " + name + " already attached");

  for (const auto& a : layer.annotations) {
    if (a.key.empty() || !is_valid_utf8(a.key)) {
      throw Error(ErrorCode::MalformedValue, "annotation keys must be non-empty UTF-8");
    }
    validate_value(a.value);
    if (!base_.resolves(a.target)) {
      throw Error(ErrorCode::DanglingTarget, "annotation target " + a.target + " is not in the substrate");
    }
  }

  const std::string prefix = name + "/";
  std::set<std::string> locals;
  for (const auto& e : layer.local_entities) {
    if (e.id.size() <= prefix.size() || e.id.compare(0, prefix.size(), prefix) != 0 ||
        has_whitespace(e.id) || !is_valid_utf8(e.id)) {
      throw Error(ErrorCode::NamespaceViolation, "local id '" + e.id + "' must start with '" + prefix + "'");
    }
    if (base_.resolves(e.id)) {
      throw Error(ErrorCode::NamespaceViolation, "local id " + e.id + " collides with a substrate id");
    }
    if (!locals.insert(e.id).second) {
      throw Error(ErrorCode::NamespaceViolation, "local id " + e.id + " declared twice");
    }
  }

  for (const auto& l : layer.local_links) {
    if (l.label.empty() || !is_valid_utf8(l.label)) {
      throw Error(ErrorCode::MalformedValue, "link labels must be non-empty UTF-8");
    }
    for (const auto* end : {&l.src, &l.dst}) {
      // Other layers' local entities are deliberately not resolvable here.
      if (!locals.contains(*end) && !base_.resolves(*end)) {
        throw Error(ErrorCode::DanglingTarget, "link endpoint " + *end + " is neither local nor in the substrate");
      }
    }
  }
}

void LayeredStore::attach(ExtensionLayer layer) {
  validate(layer);
  const std::string name = layer.name;
  layers_.emplace(name, std::move(layer));
  journal_.push_back({EventKind::Layer, order_.size()});
  order_.push_back(name);
}

LayeredStore apply_extension(LayeredStore store, ExtensionLayer layer) {
  store.attach(std::move(layer));
  return store;
}

SubstrateRecords substrate_projection(const LayeredStore& store) { return store.base().records(); }

ConservativityReport check_conservative(const SubstrateRecords& before, const SubstrateRecords& after) {
  auto diverge = [](const std::string& what, std::size_t i, const std::string& a, const std::string& b) {
    return ConservativityReport{false, what + "[" + std::to_string(i) + "]: before " + a + " after " + b};
  };
  const std::size_t ne = std::max(before.entities.size(), after.entities.size());
  for (std::size_t i = 0; i < ne; ++i) {
    const std::string a = i < before.entities.size() ? codec::encode(before.entities[i]).dump() : "<absent>";
    const std::string b = i < after.entities.size() ? codec::encode(after.entities[i]).dump() : "<absent>";
    if (a != b) return diverge("entity", i, a, b);
  }
  const std::size_t nr = std::max(before.edges.size(), after.edges.size());
  for (std::size_t i = 0; i < nr; ++i) {
    const std::string a = i < before.edges.size() ? codec::encode(before.edges[i]).dump() : "<absent>";
    const std::string b = i < after.edges.size() ? codec::encode(after.edges[i]).dump() : "<absent>";
    if (a != b) return diverge("edge", i, a, b);
  }
  return {};
}

ConservativityReport check_conservative(const LayeredStore& before, const LayeredStore& after) {
  return check_conservative(substrate_projection(before), substrate_projection(after));
}

std::vector<Conflict> detect_conflicts(const LayeredStore& store) {
  std::map<std::pair<std::string, std::string>, Conflict> grouped;
  for (const auto& [name, layer] : store.layers()) {
    for (const auto& a : layer.annotations) {
      auto& c = grouped[{a.target, a.key}];
      c.target = a.target;
      c.key = a.key;
      c.assertions.emplace_back(name, a.value);
    }
  }
  std::vector<Conflict> out;
  for (auto& [_, c] : grouped) {
    std::set<std::string> layers;
    bool differs = false;
    for (const auto& [layer, value] : c.assertions) {
      layers.insert(layer);
      if (!(value == c.assertions.front().second)) differs = true;
    }
    if (layers.size() >= 2 && differs) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace nsub
