#include <algorithm>

#include "nsub/errors.hpp"
#include "nsub/schema.hpp"

namespace nsub {

using nlohmann::json;

json to_json(const SubstrateSchema& schema) {
  json regimes = json::array();
  for (const auto& spec : schema.regimes()) {
    std::vector<std::string> caps;
    for (auto c : spec.capabilities) caps.emplace_back(to_string(c));
    std::sort(caps.begin(), caps.end());
    regimes.push_back({{"id", spec.id.str()},
                       {"persistence", std::string(to_string(spec.persistence))},
                       {"capabilities", caps}});
  }
  json signatures = json::array();
  for (const auto& sig : schema.signatures()) {
    json src = json::array(), dst = json::array();
    for (const auto& id : sig.src) src.push_back(id.str());
    for (const auto& id : sig.dst) dst.push_back(id.str());
    signatures.push_back({{"relType", std::string(to_string(sig.rel_type))}, {"src", src}, {"dst", dst}});
  }
  return {{"regimes", regimes}, {"signatures", signatures}};
}

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedSchema, why); }

void expect_keys(const json& obj, std::initializer_list<const char*> keys, const char* what) {
  if (!obj.is_object()) malformed(std::string(what) + " must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; })) {
      malformed(std::string(what) + " has unexpected key '" + k + "'");
    }
  }
  for (const char* key : keys) {
    if (!obj.contains(key)) malformed(std::string(what) + " lacks '" + key + "'");
  }
}

std::set<RegimeId> regime_set(const json& arr, const char* what) {
  if (!arr.is_array()) malformed(std::string(what) + " must be an array");
  std::set<RegimeId> out;
  for (const auto& v : arr) {
    if (!v.is_string()) malformed(std::string(what) + " entries must be strings");
    out.insert(RegimeId(v.get<std::string>()));
  }
  return out;
}

}  // namespace

SubstrateSchema schema_from_json(const json& doc) {
  try {
    expect_keys(doc, {"regimes", "signatures"}, "schema");
    if (!doc["regimes"].is_array() || !doc["signatures"].is_array()) {
      malformed("'regimes' and 'signatures' must be arrays");
    }
    std::vector<RegimeSpec> regimes;
    for (const auto& r : doc["regimes"]) {
      expect_keys(r, {"id", "persistence", "capabilities"}, "regime");
      if (!r["id"].is_string() || !r["persistence"].is_string() || !r["capabilities"].is_array()) {
        malformed("regime fields have the wrong type");
      }
      const auto persistence = parse_persistence(r["persistence"].get<std::string>());
      if (!persistence) malformed("unknown persistence class " + r["persistence"].dump());
      std::set<Capability> caps;
      for (const auto& c : r["capabilities"]) {
        const auto cap = c.is_string() ? parse_capability(c.get<std::string>()) : std::nullopt;
        if (!cap) malformed("unknown capability " + c.dump());
        caps.insert(*cap);
      }
      regimes.push_back({RegimeId(r["id"].get<std::string>()), *persistence, std::move(caps)});
    }
    std::vector<RelationSignature> signatures;
    for (const auto& s : doc["signatures"]) {
      expect_keys(s, {"relType", "src", "dst"}, "signature");
      const auto rel = s["relType"].is_string() ? parse_relation_type(s["relType"].get<std::string>())
                                                : std::nullopt;
      if (!rel) malformed("unknown relation type " + s["relType"].dump());
      signatures.push_back({*rel, regime_set(s["src"], "src"), regime_set(s["dst"], "dst")});
    }
    return SubstrateSchema(std::move(regimes), std::move(signatures));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedSchema) throw;
    malformed(e.detail());
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

std::string canonical_json(const SubstrateSchema& schema) { return to_json(schema).dump(); }

bool is_default_schema(const SubstrateSchema& schema) { return schema == default_schema(); }

}  // namespace nsub
