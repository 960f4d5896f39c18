#pragma once

// Regime specifications and relation signatures. The schema is the only
// input to admissibility: a verdict depends on (relation type, source
// regime, target regime) and nothing else.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsub/ids.hpp"

namespace nsub {

enum class PersistenceClass { Endurant, Occurrent, Record };

enum class Capability {
  ObligationBearing,
  ActedUpon,
  AuthorityGrounding,
  TemporalIdentity,
  ScopeContext,
  DescriptiveRecord,
};

enum class RelationType {
  Enacts,
  Issues,
  PartyTo,
  OccursUnder,
  Involves,
  ActsOn,
  AppliesIn,
  NestedIn,
  AnchoredAt,
  Measures,
};

inline constexpr std::array kAllRelationTypes = {
    RelationType::Enacts,   RelationType::Issues,    RelationType::PartyTo,
    RelationType::OccursUnder, RelationType::Involves, RelationType::ActsOn,
    RelationType::AppliesIn, RelationType::NestedIn, RelationType::AnchoredAt,
    RelationType::Measures,
};

inline constexpr std::array kAllCapabilities = {
    Capability::ObligationBearing, Capability::ActedUpon,    Capability::AuthorityGrounding,
    Capability::TemporalIdentity,  Capability::ScopeContext, Capability::DescriptiveRecord,
};

std::string_view to_string(PersistenceClass p);
std::string_view to_string(Capability c);
std::string_view to_string(RelationType r);
std::optional<PersistenceClass> parse_persistence(std::string_view text);
std::optional<Capability> parse_capability(std::string_view text);
std::optional<RelationType> parse_relation_type(std::string_view text);

struct RegimeSpec {
  RegimeId id;
  PersistenceClass persistence;
  std::set<Capability> capabilities;

  friend bool operator==(const RegimeSpec&, const RegimeSpec&) = default;
};

struct RelationSignature {
  RelationType rel_type;
  std::set<RegimeId> src;
  std::set<RegimeId> dst;

  friend bool operator==(const RelationSignature&, const RelationSignature&) = default;
};

/// Renders "K1→K3" or "K6→(K1|K2|K5)".
std::string describe(const RelationSignature& sig);

/// Immutable after construction. The constructor validates (unique regime
/// ids, non-empty signature endpoint sets naming declared regimes) and puts
/// both sequences in canonical order: regimes by id, signatures by relation
/// name then endpoint sets.
class SubstrateSchema {
 public:
  SubstrateSchema(std::vector<RegimeSpec> regimes, std::vector<RelationSignature> signatures);

  const std::vector<RegimeSpec>& regimes() const noexcept { return regimes_; }
  const std::vector<RelationSignature>& signatures() const noexcept { return signatures_; }

  const RegimeSpec* find_regime(const RegimeId& id) const;
  bool has_regime(const RegimeId& id) const { return find_regime(id) != nullptr; }
  std::vector<RegimeId> regime_ids() const;

  std::vector<const RelationSignature*> signatures_for(RelationType rel) const;
  bool declares(RelationType rel) const { return !signatures_for(rel).empty(); }

  friend bool operator==(const SubstrateSchema&, const SubstrateSchema&) = default;

 private:
  std::vector<RegimeSpec> regimes_;
  std::vector<RelationSignature> signatures_;
};

/// The shipped six-regime construction with its ten relation signatures.
const SubstrateSchema& default_schema();

struct AdmissibilityVerdict {
  bool admissible = false;
  RelationType rel_type;
  RegimeId src;
  RegimeId dst;
  std::vector<RelationSignature> declared;

  explicit operator bool() const noexcept { return admissible; }
  /// "acts-on K4→K3; declared K4→K2"
  std::string describe() const;
};

/// Throws UnknownRelationType when the schema declares no signature for
/// `rel`, UnknownRegime when either regime is undeclared.
AdmissibilityVerdict check_admissible(const SubstrateSchema& schema, RelationType rel,
                                      const RegimeId& src, const RegimeId& dst);

/// Exhaustive relation × source × target table. Relation types the schema
/// does not declare have all cells false.
class AdmissibilityMatrix {
 public:
  explicit AdmissibilityMatrix(const SubstrateSchema& schema);

  const std::vector<RegimeId>& regimes() const noexcept { return regimes_; }
  bool at(RelationType rel, const RegimeId& src, const RegimeId& dst) const;
  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t admissible_count() const;

 private:
  std::size_t index_of(const RegimeId& id) const;

  std::vector<RegimeId> regimes_;
  std::vector<bool> cells_;
};

AdmissibilityMatrix admissibility_matrix(const SubstrateSchema& schema);

// Canonical JSON form: {"regimes":[...], "signatures":[...]}, keys sorted.
nlohmann::json to_json(const SubstrateSchema& schema);
/// Throws MalformedSchema.
SubstrateSchema schema_from_json(const nlohmann::json& doc);
std::string canonical_json(const SubstrateSchema& schema);
/// "sha256:<hex>" over canonical_json().
std::string schema_digest(const SubstrateSchema& schema);
bool is_default_schema(const SubstrateSchema& schema);

}  // namespace nsub
