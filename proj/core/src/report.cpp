#include "nsub/report.hpp"

#include <algorithm>
#include <sstream>

namespace nsub {

using nlohmann::json;

std::string_view to_string(Claim claim) {
  return claim == Claim::ReferenceConstruction ? "reference-construction" : "none";
}

namespace {

// Documents how each failure mode is decided, so a certificate can be
// audited without the source.
const json& premises() {
  static const json p = {
      {"IDENTITY_INSTABILITY", "fires iff the merged regimes have different persistence classes"},
      {"CATEGORY_ERROR",
       "fires iff rewriting every signature endpoint to the merged regime admits a (relation, source, "
       "target) triple over the original regimes that the original schema rejects"},
      {"HIDDEN_REGIME",
       "fires iff CATEGORY_ERROR fires or the merged regimes carry different capability sets; blocking the "
       "extra edges or recovering the capabilities would need an entity-level discriminator, which "
       "attribute-blind admissibility forbids"},
  };
  return p;
}

json ids_json(const std::vector<RegimeId>& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

json caps_json(const std::set<Capability>& caps) {
  std::vector<std::string> names;
  for (auto c : caps) names.emplace_back(to_string(c));
  std::sort(names.begin(), names.end());
  return names;
}

json modes_json(const std::set<FailureMode>& modes) {
  json out = json::array();
  for (auto m : modes) out.push_back(std::string(to_string(m)));
  return out;
}

json triple_json(const RegimeTriple& t) {
  return {{"relType", std::string(to_string(t.rel_type))}, {"src", t.src.str()}, {"dst", t.dst.str()}};
}

std::string triple_text(const RegimeTriple& t) {
  return std::string(to_string(t.rel_type)) + " " + t.src.str() + "→" + t.dst.str();
}

std::string block_text(const RegimeBlock& block) {
  std::string out;
  for (const auto& id : block) {
    if (!out.empty()) out += "+";
    out += id.str();
  }
  return out;
}

std::string modes_text(const std::set<FailureMode>& modes) {
  std::string out;
  for (auto m : modes) {
    if (!out.empty()) out += ", ";
    out += to_string(m);
  }
  return out;
}

json analysis_json(const BlockAnalysis& a) {
  json witnesses = json::object();
  if (a.modes.contains(FailureMode::IdentityInstability)) {
    json p = json::object();
    for (const auto& [id, cls] : a.persistence) p[id.str()] = std::string(to_string(cls));
    witnesses["IDENTITY_INSTABILITY"] = {{"persistence", p}};
  }
  json triples = json::array();
  for (const auto& t : a.newly_admissible) triples.push_back(triple_json(t));
  if (a.modes.contains(FailureMode::CategoryError)) {
    witnesses["CATEGORY_ERROR"] = {{"witness", triple_json(a.newly_admissible.front())},
                                   {"newlyAdmissible", triples}};
  }
  if (a.modes.contains(FailureMode::HiddenRegime)) {
    json caps = json::object();
    for (const auto& [id, c] : a.capabilities) caps[id.str()] = caps_json(c);
    witnesses["HIDDEN_REGIME"] = {{"capabilities", caps},
                                  {"capabilityDifference", caps_json(a.capability_difference)},
                                  {"blockedEdges", triples}};
  }
  return {{"block", ids_json(a.block)}, {"failureModes", modes_json(a.modes)}, {"witnesses", witnesses}};
}

}  // namespace

json to_json(const CollapseCertificate& cert, const std::string& schema_digest) {
  json blocks = json::array();
  for (const auto& b : cert.merged_blocks) blocks.push_back(ids_json(b));
  json analyses = json::array();
  for (const auto& a : cert.analyses) analyses.push_back(analysis_json(a));
  return {{"kind", "collapse-certificate"},
          {"schemaDigest", schema_digest},
          {"mergedBlocks", blocks},
          {"failures", analyses},
          {"verdict", cert.admissible() ? "admissible" : "inadmissible"},
          {"premises", premises()}};
}

json to_json(const PairsReport& report) {
  json certs = json::array();
  for (const auto& c : report.certificates) certs.push_back(to_json(c, report.schema_digest));
  return {{"kind", "pairs"},
          {"schemaDigest", report.schema_digest},
          {"claim", std::string(to_string(report.claim))},
          {"certificates", certs},
          {"summary",
           {{"certificates", report.certificates.size()},
            {"inadmissible", report.inadmissible},
            {"allInadmissible", report.all_inadmissible()}}}};
}

json to_json(const PartitionsReport& report) {
  json parts = json::array();
  for (const auto& p : report.partitions) {
    json blocks = json::array();
    for (const auto& b : p.blocks) blocks.push_back(ids_json(b));
    json merged = json::array();
    for (const auto& [block, modes] : p.merged) {
      merged.push_back({{"block", ids_json(block)}, {"failureModes", modes_json(modes)}});
    }
    parts.push_back({{"blocks", blocks},
                     {"merged", merged},
                     {"verdict", p.admissible ? "admissible" : "inadmissible"}});
  }
  return {{"kind", "partitions"},
          {"schemaDigest", report.schema_digest},
          {"claim", std::string(to_string(report.claim))},
          {"regimeCount", report.regime_count},
          {"partitions", parts},
          {"summary",
           {{"partitions", report.partitions.size()},
            {"inadmissible", report.inadmissible},
            {"allInadmissible", report.all_inadmissible()}}}};
}

json to_json(const RequirementReport& report) {
  json results = json::object();
  for (const auto& [r, res] : report.results) {
    results[std::string(to_string(r))] = {{"pass", res.pass}, {"evidence", res.evidence}};
  }
  return {{"kind", "requirements"},
          {"schemaDigest", report.schema_digest},
          {"claim", std::string(to_string(report.claim))},
          {"requirements", results},
          {"overall", report.overall()}};
}

json to_json(const TightnessReport& report) {
  json collapses = json::array();
  for (const auto& c : report.capacity_collapses) {
    collapses.push_back({{"regime", c.regime.str()}, {"capabilities", caps_json(c.capabilities)}});
  }
  return {{"kind", "tightness"},
          {"schemaDigest", report.schema_digest},
          {"claim", std::string(to_string(report.claim))},
          {"regimeCount", report.regime_count},
          {"necessity",
           {{"pairs", to_json(report.pairs)},
            {"partitions", to_json(report.partitions)},
            {"capacityCollapses", collapses},
            {"minimal", report.minimal()},
            {"pass", report.necessity()}}},
          {"sufficiency", {{"requirements", to_json(report.requirements)}, {"pass", report.sufficiency()}}},
          {"verdict", report.verdict()}};
}

namespace {

std::string claim_line(Claim claim, const std::string& digest) {
  std::string out = "schema " + digest + "\n";
  out += claim == Claim::ReferenceConstruction
             ? "claim: reference six-regime construction\n"
             : "claim: none (custom schema; results say nothing about the reference construction)\n";
  return out;
}

std::string pairs_body(const PairsReport& report) {
  std::ostringstream out;
  for (const auto& cert : report.certificates) {
    const auto& a = cert.analyses.front();
    out << block_text(a.block) << ": " << (cert.admissible() ? "admissible" : "inadmissible");
    if (a.failed()) out << " [" << modes_text(a.modes) << "]";
    if (!a.newly_admissible.empty()) out << " witness " << triple_text(a.newly_admissible.front());
    if (a.modes.contains(FailureMode::IdentityInstability)) {
      out << " persistence";
      for (const auto& [id, cls] : a.persistence) out << " " << id.str() << "=" << to_string(cls);
    }
    out << "\n";
  }
  out << report.inadmissible << "/" << report.certificates.size() << " collapses inadmissible\n";
  return out.str();
}

std::string partitions_body(const PartitionsReport& report) {
  std::ostringstream out;
  for (const auto& p : report.partitions) {
    if (!p.admissible) continue;
    out << "admissible partition:";
    for (const auto& b : p.blocks) out << " {" << block_text(b) << "}";
    out << "\n";
  }
  out << report.inadmissible << "/" << report.partitions.size() << " partitions inadmissible ("
      << report.partitions.size() << " partitions of " << report.regime_count
      << " regimes into fewer blocks enumerated)\n";
  return out.str();
}

std::string requirements_body(const RequirementReport& report) {
  std::ostringstream out;
  for (const auto& [r, res] : report.results) {
    out << to_string(r) << " " << (res.pass ? "pass" : "FAIL") << ": " << res.evidence << "\n";
  }
  if (report.overall()) {
    out << "R1–R6 pass\n";
  } else {
    out << "requirements failing:";
    for (auto r : report.failing()) out << " " << to_string(r);
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::string render_text(const PairsReport& report) {
  return claim_line(report.claim, report.schema_digest) + pairs_body(report);
}

std::string render_text(const PartitionsReport& report) {
  return claim_line(report.claim, report.schema_digest) + partitions_body(report);
}

std::string render_text(const RequirementReport& report) {
  return claim_line(report.claim, report.schema_digest) + requirements_body(report);
}

std::string render_text(const TightnessReport& report) {
  std::ostringstream out;
  out << claim_line(report.claim, report.schema_digest);
  out << "== necessity ==\n" << pairs_body(report.pairs) << partitions_body(report.partitions);
  if (report.capacity_collapses.empty()) {
    out << "no regime carries more than one capability\n";
  }
  for (const auto& c : report.capacity_collapses) {
    out << "capacity collapse: " << c.regime.str() << " carries";
    for (auto cap : c.capabilities) out << " " << to_string(cap);
    out << "\n";
  }
  out << "minimal: " << (report.minimal() ? "yes" : "no") << "\n";
  out << "necessity: " << (report.necessity() ? "pass" : "FAIL") << "\n";
  out << "== sufficiency ==\n" << requirements_body(report.requirements);
  out << "sufficiency: " << (report.sufficiency() ? "pass" : "FAIL") << "\n";
  out << report.verdict() << "\n";
  return out.str();
}

}  // namespace nsub
