#include "nsub/schema.hpp"

#include <algorithm>

#include "nsub/errors.hpp"

namespace nsub {

std::string_view to_string(PersistenceClass p) {
  switch (p) {
    case PersistenceClass::Endurant: return "ENDURANT";
    case PersistenceClass::Occurrent: return "OCCURRENT";
    case PersistenceClass::Record: return "RECORD";
  }
  return "?";
}

std::string_view to_string(Capability c) {
  switch (c) {
    case Capability::ObligationBearing: return "OBLIGATION_BEARING";
    case Capability::ActedUpon: return "ACTED_UPON";
    case Capability::AuthorityGrounding: return "AUTHORITY_GROUNDING";
    case Capability::TemporalIdentity: return "TEMPORAL_IDENTITY";
    case Capability::ScopeContext: return "SCOPE_CONTEXT";
    case Capability::DescriptiveRecord: return "DESCRIPTIVE_RECORD";
  }
  return "?";
}

std::string_view to_string(RelationType r) {
  switch (r) {
    case RelationType::Enacts: return "enacts";
    case RelationType::Issues: return "issues";
    case RelationType::PartyTo: return "party-to";
    case RelationType::OccursUnder: return "occurs-under";
    case RelationType::Involves: return "involves";
    case RelationType::ActsOn: return "acts-on";
    case RelationType::AppliesIn: return "applies-in";
    case RelationType::NestedIn: return "nested-in";
    case RelationType::AnchoredAt: return "anchored-at";
    case RelationType::Measures: return "measures";
  }
  return "?";
}

std::optional<PersistenceClass> parse_persistence(std::string_view text) {
  for (auto p : {PersistenceClass::Endurant, PersistenceClass::Occurrent, PersistenceClass::Record}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<Capability> parse_capability(std::string_view text) {
  for (auto c : kAllCapabilities) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::optional<RelationType> parse_relation_type(std::string_view text) {
  for (auto r : kAllRelationTypes) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

namespace {

std::string describe_set(const std::set<RegimeId>& ids) {
  if (ids.size() == 1) return ids.begin()->str();
  std::string out = "(";
  for (auto it = ids.begin(); it != ids.end(); ++it) {
    if (it != ids.begin()) out += '|';
    out += it->str();
  }
  return out + ")";
}

bool signature_less(const RelationSignature& a, const RelationSignature& b) {
  const auto an = to_string(a.rel_type), bn = to_string(b.rel_type);
  if (an != bn) return an < bn;
  if (a.src != b.src) return a.src < b.src;
  return a.dst < b.dst;
}

}  // namespace

std::string describe(const RelationSignature& sig) {
  return describe_set(sig.src) + "→" + describe_set(sig.dst);
}

SubstrateSchema::SubstrateSchema(std::vector<RegimeSpec> regimes,
                                 std::vector<RelationSignature> signatures)
    : regimes_(std::move(regimes)), signatures_(std::move(signatures)) {
  std::sort(regimes_.begin(), regimes_.end(),
            [](const RegimeSpec& a, const RegimeSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < regimes_.size(); ++i) {
    if (regimes_[i].id == regimes_[i - 1].id) {
      throw Error(ErrorCode::MalformedSchema, "regime " + regimes_[i].id.str() + " declared twice");
    }
  }
  for (const auto& sig : signatures_) {
    if (sig.src.empty() || sig.dst.empty()) {
      throw Error(ErrorCode::MalformedSchema,
                  std::string(to_string(sig.rel_type)) + " has an empty endpoint set");
    }
    for (const auto* side : {&sig.src, &sig.dst}) {
      for (const auto& id : *side) {
        if (!has_regime(id)) {
          throw Error(ErrorCode::MalformedSchema, std::string(to_string(sig.rel_type)) +
                                                      " references undeclared regime " + id.str());
        }
      }
    }
  }
  std::sort(signatures_.begin(), signatures_.end(), signature_less);
  for (std::size_t i = 1; i < signatures_.size(); ++i) {
    if (signatures_[i] == signatures_[i - 1]) {
      throw Error(ErrorCode::MalformedSchema,
                  "duplicate signature for " + std::string(to_string(signatures_[i].rel_type)));
    }
  }
}

const RegimeSpec* SubstrateSchema::find_regime(const RegimeId& id) const {
  auto it = std::lower_bound(regimes_.begin(), regimes_.end(), id,
                             [](const RegimeSpec& spec, const RegimeId& key) { return spec.id < key; });
  return (it != regimes_.end() && it->id == id) ? &*it : nullptr;
}

std::vector<RegimeId> SubstrateSchema::regime_ids() const {
  std::vector<RegimeId> ids;
  ids.reserve(regimes_.size());
  for (const auto& spec : regimes_) ids.push_back(spec.id);
  return ids;
}

std::vector<const RelationSignature*> SubstrateSchema::signatures_for(RelationType rel) const {
  std::vector<const RelationSignature*> out;
  for (const auto& sig : signatures_) {
    if (sig.rel_type == rel) out.push_back(&sig);
  }
  return out;
}

const SubstrateSchema& default_schema() {
  using namespace regimes;
  using C = Capability;
  using P = PersistenceClass;
  using R = RelationType;
  static const SubstrateSchema schema{
      {
          {K1, P::Endurant, {C::ObligationBearing}},
          {K2, P::Endurant, {C::ActedUpon}},
          {K3, P::Endurant, {C::AuthorityGrounding}},
          {K4, P::Occurrent, {C::TemporalIdentity}},
          {K5, P::Endurant, {C::ScopeContext}},
          {K6, P::Record, {C::DescriptiveRecord}},
      },
      {
          {R::Enacts, {K1}, {K3}},
          {R::Issues, {K1}, {K3}},
          {R::PartyTo, {K1}, {K3}},
          {R::OccursUnder, {K4}, {K3}},
          {R::Involves, {K4}, {K1}},
          {R::ActsOn, {K4}, {K2}},
          {R::AppliesIn, {K3}, {K5}},
          {R::NestedIn, {K5}, {K5}},
          {R::AnchoredAt, {K6}, {K4}},
          {R::Measures, {K6}, {K1, K2, K5}},
      },
  };
  return schema;
}

std::string AdmissibilityVerdict::describe() const {
  std::string out = std::string(to_string(rel_type)) + " " + src.str() + "→" + dst.str();
  if (admissible) return out + " admissible";
  out += "; declared ";
  for (std::size_t i = 0; i < declared.size(); ++i) {
    if (i) out += ", ";
    out += nsub::describe(declared[i]);
  }
  return out;
}

AdmissibilityVerdict check_admissible(const SubstrateSchema& schema, RelationType rel,
                                      const RegimeId& src, const RegimeId& dst) {
  const auto sigs = schema.signatures_for(rel);
  if (sigs.empty()) {
    throw Error(ErrorCode::UnknownRelationType,
                "schema declares no signature for " + std::string(to_string(rel)));
  }
  for (const auto* id : {&src, &dst}) {
    if (!schema.has_regime(*id)) throw Error(ErrorCode::UnknownRegime, "undeclared regime " + id->str());
  }
  AdmissibilityVerdict verdict{false, rel, src, dst, {}};
  for (const auto* sig : sigs) {
    verdict.declared.push_back(*sig);
    if (sig->src.contains(src) && sig->dst.contains(dst)) verdict.admissible = true;
  }
  return verdict;
}

AdmissibilityMatrix::AdmissibilityMatrix(const SubstrateSchema& schema)
    : regimes_(schema.regime_ids()) {
  const std::size_t n = regimes_.size();
  cells_.assign(kAllRelationTypes.size() * n * n, false);
  for (std::size_t r = 0; r < kAllRelationTypes.size(); ++r) {
    if (!schema.declares(kAllRelationTypes[r])) continue;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t d = 0; d < n; ++d) {
        cells_[(r * n + s) * n + d] =
            check_admissible(schema, kAllRelationTypes[r], regimes_[s], regimes_[d]).admissible;
      }
    }
  }
}

std::size_t AdmissibilityMatrix::index_of(const RegimeId& id) const {
  auto it = std::lower_bound(regimes_.begin(), regimes_.end(), id);
  if (it == regimes_.end() || *it != id) throw Error(ErrorCode::UnknownRegime, "undeclared regime " + id.str());
  return static_cast<std::size_t>(it - regimes_.begin());
}

bool AdmissibilityMatrix::at(RelationType rel, const RegimeId& src, const RegimeId& dst) const {
  const std::size_t n = regimes_.size();
  return cells_[(static_cast<std::size_t>(rel) * n + index_of(src)) * n + index_of(dst)];
}

std::size_t AdmissibilityMatrix::admissible_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), true));
}

AdmissibilityMatrix admissibility_matrix(const SubstrateSchema& schema) {
  return AdmissibilityMatrix(schema);
}

}  // namespace nsub
