// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "nsub/codec.hpp"
#include "nsub/errors.hpp"
#include "nsub/interchange.hpp"
#include "nsub/schema_mutations.hpp"
#include "nsub/verifier.hpp"
#include "support/generators.hpp"
#include "support/tempdir.hpp"

using namespace nsub;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct CliResult {
  int code;
  std::string out;
};

CliResult cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

// Re-checks one certificate's witnesses from its JSON form and the schema alone.
bool witness_rechecks(const SubstrateSchema& schema, const json& failure) {
  std::vector<RegimeId> block;
  for (const auto& id : failure["block"]) block.emplace_back(id.get<std::string>());
  auto in_block = [&](const RegimeId& r) { return std::find(block.begin(), block.end(), r) != block.end(); };
  const auto& w = failure["witnesses"];
  if (failure["failureModes"].empty()) return false;
  for (const auto& mode : failure["failureModes"]) {
    const auto m = mode.get<std::string>();
    if (!w.contains(m)) return false;
    if (m == "IDENTITY_INSTABILITY") {
      std::set<std::string> classes;
      for (const auto& [id, cls] : w[m]["persistence"].items()) {
        if (std::string(to_string(schema.find_regime(RegimeId(id))->persistence)) != cls) return false;
        classes.insert(cls.get<std::string>());
      }
      if (classes.size() < 2) return false;
    } else if (m == "CATEGORY_ERROR") {
      const auto& t = w[m]["witness"];
      const auto rel = *parse_relation_type(t["relType"].get<std::string>());
      const RegimeId src(t["src"].get<std::string>()), dst(t["dst"].get<std::string>());
      if (check_admissible(schema, rel, src, dst)) return false;
      bool reached = false;
      for (const auto& s2 : schema.regime_ids()) {
        for (const auto& d2 : schema.regime_ids()) {
          const bool s_eq = s2 == src || (in_block(s2) && in_block(src));
          const bool d_eq = d2 == dst || (in_block(d2) && in_block(dst));
          if (s_eq && d_eq && check_admissible(schema, rel, s2, d2)) reached = true;
        }
      }
      if (!reached) return false;
    } else if (m == "HIDDEN_REGIME") {
      std::set<json> caps;
      for (const auto& [id, c] : w[m]["capabilities"].items()) caps.insert(c);
      if (caps.size() < 2 && !w.contains("CATEGORY_ERROR")) return false;
    } else {
      return false;
    }
  }
  return true;
}

Outcome criterion_1() {
  Outcome o;
  const auto start = Clock::now();
  const auto pairs = cli_run({"verify", "--mode", "pairs", "--format", "json"});
  const auto parts = cli_run({"verify", "--mode", "partitions", "--format", "json"});
  const double elapsed = seconds_since(start);
  o.require(pairs.code == 0 && parts.code == 0, "verify exited non-zero");
  const auto pj = json::parse(pairs.out);
  const auto qj = json::parse(parts.out);
  o.require(pj["certificates"].size() == 15, "expected 15 certificates");
  std::size_t rechecked = 0;
  for (const auto& cert : pj["certificates"]) {
    o.require(cert["verdict"] == "inadmissible", "admissible pair certificate");
    for (const auto& f : cert["failures"]) rechecked += witness_rechecks(default_schema(), f);
  }
  o.require(rechecked == 15, "witness re-check failed");
  o.require(qj["partitions"].size() == 202, "expected 202 partitions");
  std::size_t inadmissible = 0;
  for (const auto& p : qj["partitions"]) inadmissible += p["verdict"] == "inadmissible";
  o.require(inadmissible == 202, "admissible partition found");
  o.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " >= 1s");
  if (o.pass) {
    o.detail = "15 certificates, witnesses re-checked; 202/202 partitions inadmissible; " + fmt(elapsed);
  }
  return o;
}

Outcome criterion_2(const testing::TempDir& dir) {
  Outcome o;
  const auto base = cli_run({"verify", "--mode", "requirements"});
  o.require(base.code == 0 && base.out.find("R1–R6 pass") != std::string::npos, "default schema fails R1–R6");
  std::vector<std::pair<std::string, SubstrateSchema>> mutants;
  for (const auto& r : default_schema().regime_ids()) {
    mutants.emplace_back("without " + r.str(), without_regime(default_schema(), r));
  }
  mutants.emplace_back("measures widened to K4",
                       widen_signature(default_schema(), RelationType::Measures, SignatureSide::Target, regimes::K4));
  std::size_t flipped = 0;
  for (const auto& [label, schema] : mutants) {
    const auto path = dir.file("mutant.json");
    testing::spit(path, canonical_json(schema));
    const auto r = cli_run({"verify", "--mode", "requirements", "--schema", path});
    const bool fails = r.code == 1 && r.out.find("requirements failing") != std::string::npos;
    o.require(fails, "mutation did not flip a requirement: " + label);
    flipped += fails;
  }
  if (o.pass) o.detail = "R1–R6 pass; " + std::to_string(flipped) + "/7 mutations flip a requirement";
  return o;
}

Outcome criterion_3(const testing::TempDir& dir) {
  Outcome o;
  const auto start = Clock::now();
  const auto tight = cli_run({"verify", "--mode", "tightness"});
  o.require(tight.code == 0 && tight.out.find("tight at 6") != std::string::npos, "default not tight at 6");

  const auto seven = dir.file("seven.json");
  testing::spit(seven, canonical_json(with_clone(default_schema(), regimes::K2, RegimeId("K7"))));
  const auto sj = json::parse(cli_run({"verify", "--mode", "tightness", "--format", "json", "--schema", seven}).out);
  o.require(sj["necessity"]["minimal"] == false, "7-regime clone passes minimality");

  const auto ids = default_schema().regime_ids();
  std::size_t merged = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const auto five = dir.file("five.json");
      testing::spit(five, canonical_json(merge_regimes(default_schema(), {ids[i], ids[j]})));
      const auto r = cli_run({"verify", "--mode", "tightness", "--format", "json", "--schema", five});
      const auto doc = json::parse(r.out);
      const bool fails = r.code == 1 && doc["necessity"]["pass"] == false;
      o.require(fails, ids[i].str() + "+" + ids[j].str() + " passes necessity");
      merged += fails;
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " >= 5s");
  if (o.pass) {
    o.detail = "tight at 6; clone fails minimality; " + std::to_string(merged) + "/15 merged schemas fail necessity; " +
               fmt(elapsed);
  }
  return o;
}

Outcome criterion_4() {
  Outcome o;
  // Declared table, transcribed independently of the library.
  const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> table = {
      {"enacts", {{"K1"}, {"K3"}}},       {"issues", {{"K1"}, {"K3"}}},
      {"party-to", {{"K1"}, {"K3"}}},     {"occurs-under", {{"K4"}, {"K3"}}},
      {"involves", {{"K4"}, {"K1"}}},     {"acts-on", {{"K4"}, {"K2"}}},
      {"applies-in", {{"K3"}, {"K5"}}},   {"nested-in", {{"K5"}, {"K5"}}},
      {"anchored-at", {{"K6"}, {"K4"}}},  {"measures", {{"K6"}, {"K1", "K2", "K5"}}},
  };
  const auto matrix = admissibility_matrix(default_schema());
  std::size_t cells = 0, admissible = 0, mismatches = 0;
  for (auto rel : kAllRelationTypes) {
    const auto& [srcs, dsts] = table.at(std::string(to_string(rel)));
    for (const auto& s : matrix.regimes()) {
      for (const auto& d : matrix.regimes()) {
        const bool expected = srcs.contains(s.str()) && dsts.contains(d.str());
        ++cells;
        admissible += matrix.at(rel, s, d);
        mismatches += matrix.at(rel, s, d) != expected;
        mismatches += check_admissible(default_schema(), rel, s, d).admissible != expected;
      }
    }
  }
  o.require(cells == 360, "expected 360 cells");
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatching cells");
  o.require(admissible == 12, std::to_string(admissible) + " admissible cells");
  if (o.pass) o.detail = "360 cells, 12 admissible, 0 mismatches";
  return o;
}

std::string projection_bytes(const LayeredStore& store) {
  const auto records = substrate_projection(store);
  std::string out;
  for (const auto& e : records.entities) out += codec::encode(e).dump() + "\n";
  for (const auto& e : records.edges) out += codec::encode(e).dump() + "\n";
  return out;
}

Outcome criterion_5() {
  Outcome o;
  testing::Rng rng(5005);
  const auto start = Clock::now();
  constexpr std::size_t kTrials = 1000;
  std::size_t with_conflicts = 0;
  for (std::size_t trial = 0; trial < kTrials && o.pass; ++trial) {
    const auto base = testing::random_substrate(rng, 30);
    const auto before = projection_bytes(base);
    std::vector<ExtensionLayer> layers;
    const std::size_t k = 1 + testing::pick(rng, 10);
    for (std::size_t i = 0; i < k; ++i) layers.push_back(testing::random_layer(base, rng, "L" + std::to_string(i)));
    std::shuffle(layers.begin(), layers.end(), rng);
    auto a = base;
    for (const auto& l : layers) a.attach(l);
    std::shuffle(layers.begin(), layers.end(), rng);
    auto b = base;
    for (const auto& l : layers) b.attach(l);
    o.require(projection_bytes(a) == before, "projection changed by layers (trial " + std::to_string(trial) + ")");
    o.require(projection_bytes(b) == projection_bytes(a), "projection depends on order");
    o.require(check_conservative(base, a).conservative, "check_conservative disagrees");
    with_conflicts += !detect_conflicts(a).empty();
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " >= 30s");
  if (o.pass) {
    o.detail = std::to_string(kTrials) + " trials, 0 failures (" + std::to_string(with_conflicts) +
               " with conflicting layers); " + fmt(elapsed);
  }
  return o;
}

Outcome criterion_6() {
  Outcome o;
  testing::Rng rng(6006);
  const auto& schema = default_schema();
  std::size_t events = 0, rejected_edges = 0;
  for (int run = 0; run < 4 && o.pass; ++run) {
    LayeredStore store;
    std::vector<std::pair<std::string, RegimeId>> seen;  // id, regime in creation order
    std::size_t edges_seen = 0;
    for (int step = 0; step < 2600; ++step, ++events) {
      const auto op = testing::pick(rng, 5);
      try {
        if (op == 0) {
          testing::add_random_entity(store, rng, testing::pick(rng, 2000));  // may hit DuplicateId
        } else if (op == 1) {
          testing::add_random_edge(store, rng);
        } else if (!seen.empty()) {
          // Arbitrary relation between arbitrary entities; must be refused iff inadmissible.
          const auto& s = seen[testing::pick(rng, seen.size())];
          const auto& d = seen[testing::pick(rng, seen.size())];
          const auto rel = kAllRelationTypes[testing::pick(rng, kAllRelationTypes.size())];
          const bool ok = check_admissible(schema, rel, s.second, d.second).admissible;
          try {
            store.add_relation(rel, s.first, d.first);
            o.require(ok, "inadmissible edge accepted");
          } catch (const Error& e) {
            o.require(!ok && e.code() == ErrorCode::RegimeViolation, "admissible edge refused");
            ++rejected_edges;
          }
        }
      } catch (const Error& e) {
        o.require(e.code() == ErrorCode::DuplicateId, std::string("unexpected error ") + e.what());
      }
      const auto& base = store.base();
      // New records only extend the log.
      o.require(base.entity_count() >= seen.size() && base.edge_count() >= edges_seen, "record deleted");
      if (base.entity_count() > seen.size()) {
        const auto e = base.records().entities.back();
        seen.emplace_back(e.id().str(), e.regime());
      }
      edges_seen = base.edge_count();
      if (step % 250 == 249 || step == 2599) {
        const auto rec = base.records();
        o.require(rec.entities.size() == seen.size(), "entity count drifted");
        for (std::size_t i = 0; i < rec.entities.size(); ++i) {
          o.require(rec.entities[i].id().str() == seen[i].first, "entity id changed");
          o.require(rec.entities[i].regime() == seen[i].second, "entity regime changed");
        }
        for (const auto& edge : rec.edges) {
          const auto s = base.get_entity(edge.src().str());
          const auto d = base.get_entity(edge.dst().str());
          o.require(s && d && check_admissible(schema, edge.rel_type(), s->regime(), d->regime()),
                    "stored edge violates the signature table");
        }
      }
    }
  }
  o.require(events >= 10000, "fewer than 10^4 events");
  if (o.pass) {
    o.detail = std::to_string(events) + " events, " + std::to_string(rejected_edges) +
               " inadmissible edges refused, 0 failures";
  }
  return o;
}

Outcome criterion_7() {
  Outcome o;
  testing::Rng rng(7007);
  constexpr int kStores = 120;
  for (int trial = 0; trial < kStores && o.pass; ++trial) {
    auto store = testing::random_substrate(rng, 40);
    const std::size_t k = testing::pick(rng, 4);
    for (std::size_t i = 0; i < k; ++i) store.attach(testing::random_layer(store, rng, "L" + std::to_string(i)));
    const auto log = export_log(store);
    const auto back = import_log(log);
    o.require(export_log(back) == log, ".nslog round trip differs (store " + std::to_string(trial) + ")");
    const auto clif = clif_substrate_section(export_clif(store));
    o.require(clif_substrate_section(export_clif(back)) == clif, ".clif substrate section differs");
  }
  const auto empty = export_clif(SubstrateStore{});
  std::size_t disjoint = 0, signatures = 0;
  std::istringstream in(empty);
  for (std::string line; std::getline(in, line);) {
    disjoint += line.rfind("(forall (x) (not (and", 0) == 0;
    signatures += line.rfind("(forall (x y) (if", 0) == 0;
  }
  o.require(disjoint == 15, std::to_string(disjoint) + " disjointness axioms");
  o.require(signatures == 10, std::to_string(signatures) + " signature axioms");
  if (o.pass) {
    o.detail = std::to_string(kStores) + " stores byte-identical (.nslog, .clif); empty store: 15 disjointness + 10 signature axioms";
  }
  return o;
}

}  // namespace

int main() {
  testing::TempDir dir;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"necessity: pairs and partitions", criterion_1},
      {"sufficiency: requirements and mutations", [&] { return criterion_2(dir); }},
      {"tightness", [&] { return criterion_3(dir); }},
      {"signature matrix", criterion_4},
      {"conservativity", criterion_5},
      {"stability of identity", criterion_6},
      {"round trip", criterion_7},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << o.detail
              << "\n";
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
