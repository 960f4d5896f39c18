#include "nsub/verifier.hpp"

#include <algorithm>

#include "nsub/errors.hpp"
#include "nsub/partitions.hpp"
#include "nsub/store.hpp"

namespace nsub {

std::string_view to_string(FailureMode mode) {
  switch (mode) {
    case FailureMode::IdentityInstability: return "IDENTITY_INSTABILITY";
    case FailureMode::CategoryError: return "CATEGORY_ERROR";
    case FailureMode::HiddenRegime: return "HIDDEN_REGIME";
  }
  return "?";
}

std::string_view to_string(Requirement r) {
  static constexpr std::string_view kNames[] = {"R1", "R2", "R3", "R4", "R5", "R6"};
  return kNames[static_cast<int>(r)];
}

bool CollapseCertificate::admissible() const {
  return std::none_of(analyses.begin(), analyses.end(), [](const BlockAnalysis& a) { return a.failed(); });
}

std::set<FailureMode> CollapseCertificate::modes() const {
  std::set<FailureMode> out;
  for (const auto& a : analyses) out.insert(a.modes.begin(), a.modes.end());
  return out;
}

namespace {

Claim claim_for(const SubstrateSchema& schema) {
  return is_default_schema(schema) ? Claim::ReferenceConstruction : Claim::None;
}

}  // namespace

BlockAnalysis analyze_block(const SubstrateSchema& schema, const RegimeBlock& block) {
  BlockAnalysis out;
  out.block = block;
  std::sort(out.block.begin(), out.block.end());
  out.block.erase(std::unique(out.block.begin(), out.block.end()), out.block.end());
  for (const auto& id : out.block) {
    const RegimeSpec* spec = schema.find_regime(id);
    if (!spec) throw Error(ErrorCode::UnknownRegime, "undeclared regime " + id.str());
    out.persistence.emplace(id, spec->persistence);
    out.capabilities.emplace(id, spec->capabilities);
  }
  if (out.block.size() < 2) return out;

  std::set<PersistenceClass> classes;
  for (const auto& [_, p] : out.persistence) classes.insert(p);
  if (classes.size() > 1) out.modes.insert(FailureMode::IdentityInstability);

  // Class representative: every block member maps to the first member.
  const RegimeId& rep = out.block.front();
  auto cls = [&](const RegimeId& id) -> const RegimeId& {
    return std::binary_search(out.block.begin(), out.block.end(), id) ? rep : id;
  };
  auto hits = [&](const std::set<RegimeId>& side, const RegimeId& id) {
    return std::any_of(side.begin(), side.end(), [&](const RegimeId& s) { return cls(s) == cls(id); });
  };
  const auto ids = schema.regime_ids();
  for (auto rel : kAllRelationTypes) {
    const auto sigs = schema.signatures_for(rel);
    if (sigs.empty()) continue;
    for (const auto& src : ids) {
      for (const auto& dst : ids) {
        const bool before = check_admissible(schema, rel, src, dst).admissible;
        if (before) continue;
        const bool after = std::any_of(sigs.begin(), sigs.end(), [&](const RelationSignature* sig) {
          return hits(sig->src, src) && hits(sig->dst, dst);
        });
        if (after) out.newly_admissible.push_back({rel, src, dst});
      }
    }
  }
  if (!out.newly_admissible.empty()) out.modes.insert(FailureMode::CategoryError);

  std::set<Capability> all, common = out.capabilities.begin()->second;
  for (const auto& [_, caps] : out.capabilities) {
    all.insert(caps.begin(), caps.end());
    std::set<Capability> keep;
    std::set_intersection(common.begin(), common.end(), caps.begin(), caps.end(),
                          std::inserter(keep, keep.end()));
    common = std::move(keep);
  }
  std::set_difference(all.begin(), all.end(), common.begin(), common.end(),
                      std::inserter(out.capability_difference, out.capability_difference.end()));
  if (out.modes.contains(FailureMode::CategoryError) || !out.capability_difference.empty()) {
    out.modes.insert(FailureMode::HiddenRegime);
  }
  return out;
}

CollapseCertificate collapse_partition(const SubstrateSchema& schema, const RegimePartition& partition) {
  std::set<RegimeId> seen;
  for (const auto& block : partition) {
    for (const auto& id : block) {
      if (!schema.has_regime(id)) throw Error(ErrorCode::UnknownRegime, "undeclared regime " + id.str());
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::SameRegime, "regime " + id.str() + " appears in two blocks");
      }
    }
  }
  if (seen.size() != schema.regimes().size()) {
    throw Error(ErrorCode::UnknownRegime, "partition does not cover every regime");
  }
  CollapseCertificate cert;
  cert.merged_blocks = partition;
  for (auto& block : cert.merged_blocks) std::sort(block.begin(), block.end());
  std::sort(cert.merged_blocks.begin(), cert.merged_blocks.end());
  for (const auto& block : cert.merged_blocks) {
    if (block.size() >= 2) cert.analyses.push_back(analyze_block(schema, block));
  }
  return cert;
}

CollapseCertificate collapse_pair(const SubstrateSchema& schema, const RegimeId& a, const RegimeId& b) {
  for (const auto* id : {&a, &b}) {
    if (!schema.has_regime(*id)) throw Error(ErrorCode::UnknownRegime, "undeclared regime " + id->str());
  }
  if (a == b) throw Error(ErrorCode::SameRegime, "cannot collapse " + a.str() + " with itself");
  RegimePartition partition{{a, b}};
  for (const auto& id : schema.regime_ids()) {
    if (id != a && id != b) partition.push_back({id});
  }
  return collapse_partition(schema, partition);
}

PairsReport verify_all_pairs(const SubstrateSchema& schema) {
  PairsReport report{schema_digest(schema), claim_for(schema), {}, 0};
  const auto ids = schema.regime_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      auto cert = collapse_pair(schema, ids[i], ids[j]);
      if (!cert.admissible()) ++report.inadmissible;
      report.certificates.push_back(std::move(cert));
    }
  }
  return report;
}

PartitionsReport verify_partitions(const SubstrateSchema& schema) {
  const auto ids = schema.regime_ids();
  PartitionsReport report{schema_digest(schema), claim_for(schema), ids.size(), {}, 0};
  // Block analyses depend only on the block, so cache them by member set.
  std::map<RegimeBlock, std::set<FailureMode>> cache;
  SetPartitionGenerator gen(ids.size());
  do {
    if (gen.block_count() == ids.size()) continue;
    PartitionVerdict verdict;
    for (const auto& members : gen.blocks()) {
      RegimeBlock block;
      for (auto idx : members) block.push_back(ids[idx]);
      if (block.size() >= 2) {
        auto it = cache.find(block);
        if (it == cache.end()) it = cache.emplace(block, analyze_block(schema, block).modes).first;
        if (!it->second.empty()) verdict.admissible = false;
        verdict.merged.emplace_back(block, it->second);
      }
      verdict.blocks.push_back(std::move(block));
    }
    if (!verdict.admissible) ++report.inadmissible;
    report.partitions.push_back(std::move(verdict));
  } while (gen.next());
  return report;
}

bool RequirementReport::overall() const {
  return results.size() == kAllRequirements.size() &&
         std::all_of(results.begin(), results.end(), [](const auto& kv) { return kv.second.pass; });
}

std::vector<Requirement> RequirementReport::failing() const {
  std::vector<Requirement> out;
  for (auto r : kAllRequirements) {
    auto it = results.find(r);
    if (it == results.end() || !it->second.pass) out.push_back(r);
  }
  return out;
}

namespace {

std::string join_ids(const std::set<RegimeId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ",";
    out += id.str();
  }
  return out.empty() ? "none" : out;
}

struct RequirementContext {
  const SubstrateSchema& schema;

  bool has(const RegimeId& id, PersistenceClass p, Capability c) const {
    const RegimeSpec* spec = schema.find_regime(id);
    return spec && spec->persistence == p && spec->capabilities.contains(c);
  }
  bool persistence_is(const RegimeId& id, PersistenceClass p) const {
    const RegimeSpec* spec = schema.find_regime(id);
    return spec && spec->persistence == p;
  }
  std::set<RegimeId> sources(RelationType rel) const {
    std::set<RegimeId> out;
    for (const auto* sig : schema.signatures_for(rel)) out.insert(sig->src.begin(), sig->src.end());
    return out;
  }
  std::set<RegimeId> targets(RelationType rel) const {
    std::set<RegimeId> out;
    for (const auto* sig : schema.signatures_for(rel)) out.insert(sig->dst.begin(), sig->dst.end());
    return out;
  }
  std::set<RegimeId> carriers(PersistenceClass p, Capability c) const {
    std::set<RegimeId> out;
    for (const auto& spec : schema.regimes()) {
      if (has(spec.id, p, c)) out.insert(spec.id);
    }
    return out;
  }
  bool admits(RelationType rel, const RegimeId& src, const RegimeId& dst) const {
    return schema.declares(rel) && check_admissible(schema, rel, src, dst).admissible;
  }
};

template <typename Pred>
bool all_of(const std::set<RegimeId>& ids, Pred pred) {
  return std::all_of(ids.begin(), ids.end(), pred);
}

RequirementResult check_r1(const RequirementContext& ctx) {
  // Anchor rules are a total function of persistence class, and the store
  // exposes no regime or id reassignment.
  const bool regimes_declared = !ctx.schema.regimes().empty();
  const bool pass = kEntityIdentityWriteOnce && regimes_declared;
  std::string evidence = std::string("entity id and regime write-once: ") +
                         (kEntityIdentityWriteOnce ? "yes" : "no") +
                         "; admissibility keyed on (relation, source regime, target regime) only; " +
                         std::to_string(ctx.schema.regimes().size()) + " regime(s) declared";
  return {pass, evidence};
}

RequirementResult check_r2(const RequirementContext& ctx) {
  using P = PersistenceClass;
  const auto bearers = ctx.carriers(P::Endurant, Capability::ObligationBearing);
  const auto src = ctx.sources(RelationType::PartyTo);
  const auto dst = ctx.targets(RelationType::PartyTo);
  const bool src_ok = !src.empty() && all_of(src, [&](const RegimeId& id) { return bearers.contains(id); });
  const bool dst_ok = !dst.empty() && all_of(dst, [&](const RegimeId& id) {
    const RegimeSpec* spec = ctx.schema.find_regime(id);
    return spec && spec->capabilities.contains(Capability::AuthorityGrounding);
  });
  return {src_ok && dst_ok, "obligation-bearing endurants: " + join_ids(bearers) +
                                "; party-to sources: " + join_ids(src) + "; party-to targets: " + join_ids(dst)};
}

RequirementResult check_r3(const RequirementContext& ctx) {
  using P = PersistenceClass;
  const auto grounds = ctx.carriers(P::Endurant, Capability::AuthorityGrounding);
  const auto src = ctx.sources(RelationType::OccursUnder);
  const auto dst = ctx.targets(RelationType::OccursUnder);
  const bool src_ok =
      !src.empty() && all_of(src, [&](const RegimeId& id) { return ctx.persistence_is(id, P::Occurrent); });
  const bool target_ok = std::any_of(grounds.begin(), grounds.end(),
                                     [&](const RegimeId& id) { return dst.contains(id) && !src.contains(id); });
  return {src_ok && target_ok, "authority-grounding endurants: " + join_ids(grounds) +
                                   "; occurs-under sources: " + join_ids(src) +
                                   "; occurs-under targets: " + join_ids(dst)};
}

RequirementResult check_r4(const RequirementContext& ctx) {
  using P = PersistenceClass;
  const auto occurrents = ctx.carriers(P::Occurrent, Capability::TemporalIdentity);
  const auto src = ctx.sources(RelationType::ActsOn);
  const auto dst = ctx.targets(RelationType::ActsOn);
  const bool acts = std::any_of(occurrents.begin(), occurrents.end(),
                                [&](const RegimeId& id) { return src.contains(id); });
  const bool targets_ok = !dst.empty() && all_of(dst, [&](const RegimeId& id) {
    return ctx.has(id, P::Endurant, Capability::ActedUpon) &&
           !ctx.has(id, P::Endurant, Capability::ObligationBearing);
  });
  return {acts && targets_ok, "temporally individuated occurrents (occurredAt and provenance mandatory): " +
                                  join_ids(occurrents) + "; acts-on sources: " + join_ids(src) +
                                  "; acts-on targets: " + join_ids(dst)};
}

RequirementResult check_r5(const RequirementContext& ctx) {
  using P = PersistenceClass;
  const auto contexts = ctx.carriers(P::Endurant, Capability::ScopeContext);
  const auto scoped = ctx.targets(RelationType::AppliesIn);
  std::set<RegimeId> nesting;
  for (const auto& id : contexts) {
    if (ctx.admits(RelationType::NestedIn, id, id) && scoped.contains(id)) nesting.insert(id);
  }
  return {!nesting.empty(), "scope-context endurants: " + join_ids(contexts) +
                                "; applies-in targets: " + join_ids(scoped) +
                                "; self-nesting contexts: " + join_ids(nesting)};
}

RequirementResult check_r6(const RequirementContext& ctx) {
  using P = PersistenceClass;
  const auto records = ctx.carriers(P::Record, Capability::DescriptiveRecord);
  const auto measured = ctx.targets(RelationType::Measures);
  const bool no_occurrent_targets =
      all_of(measured, [&](const RegimeId& id) { return !ctx.persistence_is(id, P::Occurrent); });
  std::set<RegimeId> ok;
  for (const auto& id : records) {
    bool outgoing_ok = true;
    for (const auto& sig : ctx.schema.signatures()) {
      if (sig.src.contains(id) && sig.rel_type != RelationType::Measures &&
          sig.rel_type != RelationType::AnchoredAt) {
        outgoing_ok = false;
      }
    }
    if (outgoing_ok && ctx.sources(RelationType::Measures).contains(id)) ok.insert(id);
  }
  return {!ok.empty() && !measured.empty() && no_occurrent_targets,
          "descriptive records: " + join_ids(records) + "; measuring records limited to measures/anchored-at: " +
              join_ids(ok) + "; measures targets: " + join_ids(measured) +
              (no_occurrent_targets ? " (no occurrents)" : " (includes an occurrent)")};
}

}  // namespace

RequirementReport check_requirements(const SubstrateSchema& schema) {
  RequirementContext ctx{schema};
  RequirementReport report{schema_digest(schema), claim_for(schema), {}};
  report.results[Requirement::R1] = check_r1(ctx);
  report.results[Requirement::R2] = check_r2(ctx);
  report.results[Requirement::R3] = check_r3(ctx);
  report.results[Requirement::R4] = check_r4(ctx);
  report.results[Requirement::R5] = check_r5(ctx);
  report.results[Requirement::R6] = check_r6(ctx);
  return report;
}

std::string TightnessReport::verdict() const {
  return tight() ? "tight at " + std::to_string(regime_count) : "not tight";
}

TightnessReport tightness_report(const SubstrateSchema& schema) {
  TightnessReport report{schema_digest(schema),
                         claim_for(schema),
                         schema.regimes().size(),
                         verify_all_pairs(schema),
                         verify_partitions(schema),
                         check_requirements(schema),
                         {}};
  for (const auto& spec : schema.regimes()) {
    if (spec.capabilities.size() > 1) report.capacity_collapses.push_back({spec.id, spec.capabilities});
  }
  return report;
}

}  // namespace nsub
