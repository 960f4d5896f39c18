#pragma once

// Collapse and requirement analysis over a schema.
//
// Merging a block of regimes is judged on three failure modes:
//   IDENTITY_INSTABILITY  the members disagree on persistence class.
//   CATEGORY_ERROR        rewriting every signature endpoint to the merged
//                         regime admits some (relation, src, dst) over the
//                         original regimes that the schema rejects.
//   HIDDEN_REGIME         CATEGORY_ERROR fired, or the members carry different
//                         capability sets. Either way only an entity-level
//                         discriminator could recover the distinction, and
//                         admissibility never consults entity attributes.
// A merge is admissible iff no mode fires.

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nsub/schema.hpp"

namespace nsub {

enum class FailureMode { IdentityInstability, CategoryError, HiddenRegime };

std::string_view to_string(FailureMode mode);

struct RegimeTriple {
  RelationType rel_type;
  RegimeId src;
  RegimeId dst;

  friend auto operator<=>(const RegimeTriple&, const RegimeTriple&) = default;
};

using RegimeBlock = std::vector<RegimeId>;
using RegimePartition = std::vector<RegimeBlock>;

struct BlockAnalysis {
  RegimeBlock block;
  std::set<FailureMode> modes;
  std::map<RegimeId, PersistenceClass> persistence;
  /// Admissible after the merge, rejected before; in relation-enum order,
  /// then source, then target.
  std::vector<RegimeTriple> newly_admissible;
  std::map<RegimeId, std::set<Capability>> capabilities;
  /// Capabilities carried by some member but not by all of them.
  std::set<Capability> capability_difference;

  bool failed() const noexcept { return !modes.empty(); }
};

struct CollapseCertificate {
  RegimePartition merged_blocks;         // every block, singletons included
  std::vector<BlockAnalysis> analyses;   // one per block of size >= 2

  bool admissible() const;
  std::set<FailureMode> modes() const;
};

/// Analyses one merged block with every other regime left alone.
BlockAnalysis analyze_block(const SubstrateSchema& schema, const RegimeBlock& block);

/// Errors: UnknownRegime, SameRegime.
CollapseCertificate collapse_pair(const SubstrateSchema& schema, const RegimeId& a, const RegimeId& b);

/// `partition` must cover every schema regime exactly once.
CollapseCertificate collapse_partition(const SubstrateSchema& schema, const RegimePartition& partition);

/// Whether results speak about the shipped construction or a custom schema.
enum class Claim { ReferenceConstruction, None };

struct PairsReport {
  std::string schema_digest;
  Claim claim;
  std::vector<CollapseCertificate> certificates;
  std::size_t inadmissible = 0;

  bool all_inadmissible() const noexcept { return inadmissible == certificates.size(); }
};

PairsReport verify_all_pairs(const SubstrateSchema& schema);

struct PartitionVerdict {
  RegimePartition blocks;
  std::vector<std::pair<RegimeBlock, std::set<FailureMode>>> merged;  // blocks of size >= 2
  bool admissible = true;
};

struct PartitionsReport {
  std::string schema_digest;
  Claim claim;
  std::size_t regime_count = 0;
  std::vector<PartitionVerdict> partitions;  // restricted-growth-string order
  std::size_t inadmissible = 0;

  bool all_inadmissible() const noexcept { return inadmissible == partitions.size(); }
};

/// Every partition with fewer blocks than regimes.
PartitionsReport verify_partitions(const SubstrateSchema& schema);

enum class Requirement { R1, R2, R3, R4, R5, R6 };
inline constexpr std::array kAllRequirements = {Requirement::R1, Requirement::R2, Requirement::R3,
                                                Requirement::R4, Requirement::R5, Requirement::R6};
std::string_view to_string(Requirement r);

struct RequirementResult {
  bool pass = false;
  std::string evidence;
};

struct RequirementReport {
  std::string schema_digest;
  Claim claim;
  std::map<Requirement, RequirementResult> results;

  bool overall() const;
  std::vector<Requirement> failing() const;
};

RequirementReport check_requirements(const SubstrateSchema& schema);

/// A regime carrying more than one capability realizes a collapse of the
/// capacities those capabilities stand for.
struct CapacityCollapse {
  RegimeId regime;
  std::set<Capability> capabilities;
};

struct TightnessReport {
  std::string schema_digest;
  Claim claim;
  std::size_t regime_count = 0;
  PairsReport pairs;
  PartitionsReport partitions;
  RequirementReport requirements;
  std::vector<CapacityCollapse> capacity_collapses;

  /// No pair of regimes can be merged.
  bool minimal() const noexcept { return pairs.all_inadmissible(); }
  bool necessity() const noexcept {
    return minimal() && partitions.all_inadmissible() && capacity_collapses.empty();
  }
  bool sufficiency() const { return requirements.overall(); }
  bool tight() const { return necessity() && sufficiency(); }
  /// "tight at <n>" or "not tight".
  std::string verdict() const;
};

TightnessReport tightness_report(const SubstrateSchema& schema);

}  // namespace nsub
