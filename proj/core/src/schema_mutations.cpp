#include "nsub/schema_mutations.hpp"

#include <algorithm>

#include "nsub/errors.hpp"

namespace nsub {

namespace {

void require(const SubstrateSchema& schema, const RegimeId& id) {
  if (!schema.has_regime(id)) throw Error(ErrorCode::UnknownRegime, "undeclared regime " + id.str());
}

}  // namespace

SubstrateSchema without_regime(const SubstrateSchema& schema, const RegimeId& id) {
  require(schema, id);
  std::vector<RegimeSpec> regimes;
  for (const auto& spec : schema.regimes()) {
    if (spec.id != id) regimes.push_back(spec);
  }
  std::vector<RelationSignature> signatures;
  for (auto sig : schema.signatures()) {
    sig.src.erase(id);
    sig.dst.erase(id);
    if (!sig.src.empty() && !sig.dst.empty()) signatures.push_back(std::move(sig));
  }
  return SubstrateSchema(std::move(regimes), std::move(signatures));
}

RegimeId merged_regime_id(const std::vector<RegimeId>& block) {
  std::vector<RegimeId> sorted = block;
  std::sort(sorted.begin(), sorted.end());
  std::string name;
  for (const auto& id : sorted) {
    if (!name.empty()) name += '+';
    name += id.str();
  }
  return RegimeId(name);
}

SubstrateSchema merge_regimes(const SubstrateSchema& schema, const std::vector<RegimeId>& block) {
  if (block.empty()) throw Error(ErrorCode::UnknownRegime, "cannot merge an empty block");
  for (const auto& id : block) require(schema, id);
  std::vector<RegimeId> members = block;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  const RegimeId merged = merged_regime_id(members);
  auto in_block = [&](const RegimeId& id) { return std::binary_search(members.begin(), members.end(), id); };

  RegimeSpec spec{merged, schema.find_regime(members.front())->persistence, {}};
  std::vector<RegimeSpec> regimes;
  for (const auto& r : schema.regimes()) {
    if (in_block(r.id)) {
      spec.capabilities.insert(r.capabilities.begin(), r.capabilities.end());
    } else {
      regimes.push_back(r);
    }
  }
  regimes.push_back(std::move(spec));

  auto rewrite = [&](const std::set<RegimeId>& ids) {
    std::set<RegimeId> out;
    for (const auto& id : ids) out.insert(in_block(id) ? merged : id);
    return out;
  };
  std::vector<RelationSignature> signatures;
  for (const auto& sig : schema.signatures()) {
    RelationSignature rewritten{sig.rel_type, rewrite(sig.src), rewrite(sig.dst)};
    if (std::find(signatures.begin(), signatures.end(), rewritten) == signatures.end()) {
      signatures.push_back(std::move(rewritten));
    }
  }
  return SubstrateSchema(std::move(regimes), std::move(signatures));
}

SubstrateSchema with_clone(const SubstrateSchema& schema, const RegimeId& source, const RegimeId& clone) {
  require(schema, source);
  if (schema.has_regime(clone)) throw Error(ErrorCode::MalformedSchema, "regime " + clone.str() + " already declared");
  std::vector<RegimeSpec> regimes = schema.regimes();
  RegimeSpec spec = *schema.find_regime(source);
  spec.id = clone;
  regimes.push_back(std::move(spec));
  std::vector<RelationSignature> signatures;
  for (auto sig : schema.signatures()) {
    if (sig.src.contains(source)) sig.src.insert(clone);
    if (sig.dst.contains(source)) sig.dst.insert(clone);
    signatures.push_back(std::move(sig));
  }
  return SubstrateSchema(std::move(regimes), std::move(signatures));
}

SubstrateSchema widen_signature(const SubstrateSchema& schema, RelationType rel, SignatureSide side,
                                const RegimeId& regime) {
  require(schema, regime);
  if (!schema.declares(rel)) {
    throw Error(ErrorCode::UnknownRelationType, "schema declares no " + std::string(to_string(rel)));
  }
  std::vector<RelationSignature> signatures;
  for (auto sig : schema.signatures()) {
    if (sig.rel_type == rel) (side == SignatureSide::Source ? sig.src : sig.dst).insert(regime);
    signatures.push_back(std::move(sig));
  }
  return SubstrateSchema(schema.regimes(), std::move(signatures));
}

}  // namespace nsub
