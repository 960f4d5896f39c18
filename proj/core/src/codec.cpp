#include "nsub/codec.hpp"

#include <algorithm>
#include <limits>

#include "nsub/errors.hpp"

namespace nsub::codec {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedValue, why); }

void expect_object(const json& doc, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional, const char* what) {
  if (!doc.is_object()) malformed(std::string(what) + " must be a JSON object");
  for (const auto& [k, _] : doc.items()) {
    auto match = [&](const char* key) { return k == key; };
    if (std::none_of(required.begin(), required.end(), match) &&
        std::none_of(optional.begin(), optional.end(), match)) {
      malformed(std::string(what) + " has unexpected key '" + k + "'");
    }
  }
  for (const char* key : required) {
    if (!doc.contains(key)) malformed(std::string(what) + " lacks '" + key + "'");
  }
}

std::string get_string(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_string()) malformed(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t get_seq(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number_unsigned()) malformed(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

json encode(const AttributeValue& value) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Timestamp>) {
          return json{{"timestamp", v.str()}};
        } else {
          return json(v);
        }
      },
      value);
}

AttributeValue decode_value(const json& doc) {
  if (doc.is_string()) return doc.get<std::string>();
  if (doc.is_boolean()) return doc.get<bool>();
  if (doc.is_number_unsigned()) {
    const auto u = doc.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      malformed("integer out of range");
    }
    return static_cast<std::int64_t>(u);
  }
  if (doc.is_number_integer()) return doc.get<std::int64_t>();
  if (doc.is_number_float()) return doc.get<double>();
  if (doc.is_object() && doc.size() == 1 && doc.contains("timestamp") && doc["timestamp"].is_string()) {
    return Timestamp::parse(doc["timestamp"].get<std::string>());
  }
  malformed("unsupported scalar " + doc.dump());
}

json encode(const Entity& entity) {
  json attrs = json::object();
  for (const auto& [k, v] : entity.attributes()) attrs[k] = encode(v);
  json out{{"id", entity.id().str()},
           {"regime", entity.regime().str()},
           {"createdAt", entity.created_at()},
           {"attributes", std::move(attrs)}};
  if (entity.occurred_at()) out["occurredAt"] = entity.occurred_at()->str();
  if (entity.asserted_at()) out["assertedAt"] = entity.asserted_at()->str();
  if (entity.provenance()) out["provenance"] = *entity.provenance();
  return out;
}

json encode(const RelationEdge& edge) {
  return {{"id", edge.id()},
          {"relType", std::string(to_string(edge.rel_type()))},
          {"src", edge.src().str()},
          {"dst", edge.dst().str()},
          {"createdAt", edge.created_at()}};
}

json encode(const ExtensionLayer& layer) {
  json annotations = json::array();
  for (const auto& a : layer.annotations) {
    annotations.push_back({{"target", a.target}, {"key", a.key}, {"value", encode(a.value)}});
  }
  json locals = json::array();
  for (const auto& e : layer.local_entities) locals.push_back({{"id", e.id}, {"payload", e.payload}});
  json links = json::array();
  for (const auto& l : layer.local_links) {
    links.push_back({{"src", l.src}, {"label", l.label}, {"dst", l.dst}});
  }
  return {{"name", layer.name},
          {"annotations", std::move(annotations)},
          {"localEntities", std::move(locals)},
          {"localLinks", std::move(links)}};
}

ExtensionLayer decode_layer(const json& doc) {
  expect_object(doc, {"name"}, {"annotations", "localEntities", "localLinks"}, "layer");
  ExtensionLayer layer;
  layer.name = get_string(doc, "name");
  auto array_of = [&](const char* key) -> const json& {
    static const json empty = json::array();
    if (!doc.contains(key)) return empty;
    if (!doc[key].is_array()) malformed(std::string("'") + key + "' must be an array");
    return doc[key];
  };
  for (const auto& a : array_of("annotations")) {
    expect_object(a, {"target", "key", "value"}, {}, "annotation");
    layer.annotations.push_back({get_string(a, "target"), get_string(a, "key"), decode_value(a["value"])});
  }
  for (const auto& e : array_of("localEntities")) {
    expect_object(e, {"id"}, {"payload"}, "local entity");
    layer.local_entities.push_back({get_string(e, "id"), e.value("payload", json(nullptr))});
  }
  for (const auto& l : array_of("localLinks")) {
    expect_object(l, {"src", "label", "dst"}, {}, "local link");
    layer.local_links.push_back({get_string(l, "src"), get_string(l, "label"), get_string(l, "dst")});
  }
  return layer;
}

EntityFields decode_entity(const json& doc) {
  expect_object(doc, {"id", "regime", "createdAt", "attributes"},
                {"occurredAt", "assertedAt", "provenance"}, "entity");
  EntityFields f{get_string(doc, "id"), RegimeId(get_string(doc, "regime")), get_seq(doc, "createdAt"),
                 {}, {}};
  const auto& attrs = doc["attributes"];
  if (!attrs.is_object()) malformed("'attributes' must be an object");
  for (const auto& [k, v] : attrs.items()) f.attributes.emplace(k, decode_value(v));
  if (doc.contains("occurredAt")) f.anchor.occurred_at = Timestamp::parse(get_string(doc, "occurredAt"));
  if (doc.contains("assertedAt")) f.anchor.asserted_at = Timestamp::parse(get_string(doc, "assertedAt"));
  if (doc.contains("provenance")) f.anchor.provenance = get_string(doc, "provenance");
  return f;
}

EdgeFields decode_edge(const json& doc) {
  expect_object(doc, {"id", "relType", "src", "dst", "createdAt"}, {}, "relation");
  const auto rel = parse_relation_type(get_string(doc, "relType"));
  if (!rel) malformed("unknown relation type " + doc["relType"].dump());
  return {get_string(doc, "id"), *rel, get_string(doc, "src"), get_string(doc, "dst"),
          get_seq(doc, "createdAt")};
}

}  // namespace nsub::codec
