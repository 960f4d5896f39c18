#pragma once

// JSON encodings of substrate records and layers. Objects use sorted keys,
// so dump() output is canonical.
//
// Scalars: string, integer, decimal and boolean map onto the JSON types of
// the same name; a timestamp is {"timestamp": "<RFC 3339>"}.

#include <nlohmann/json.hpp>

#include "nsub/layers.hpp"
#include "nsub/store.hpp"

namespace nsub::codec {

nlohmann::json encode(const AttributeValue& value);
nlohmann::json encode(const Entity& entity);
nlohmann::json encode(const RelationEdge& edge);
nlohmann::json encode(const ExtensionLayer& layer);

// Decoders throw Error(MalformedValue) on shape errors.
AttributeValue decode_value(const nlohmann::json& doc);
ExtensionLayer decode_layer(const nlohmann::json& doc);

/// Fields of a serialized entity, before it is replayed through a store.
struct EntityFields {
  std::string id;
  RegimeId regime;
  std::uint64_t created_at;
  Attributes attributes;
  TemporalAnchor anchor;
};
EntityFields decode_entity(const nlohmann::json& doc);

struct EdgeFields {
  std::string id;
  RelationType rel_type;
  std::string src;
  std::string dst;
  std::uint64_t created_at;
};
EdgeFields decode_edge(const nlohmann::json& doc);

}  // namespace nsub::codec
