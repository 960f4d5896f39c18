#include <algorithm>
#include <sstream>

#include "nsub/codec.hpp"
#include "nsub/interchange.hpp"

namespace nsub {

namespace {

// Bare CLIF names may not contain whitespace, parentheses, quotes or ';'.
std::string name(std::string_view text) {
  const bool bare = !text.empty() && text.find_first_of(" \t\r\n\v\f()\"';\\") == std::string_view::npos;
  if (bare) return std::string(text);
  std::string out = "'";
  for (char c : text) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string clif_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string literal(const AttributeValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return clif_string(v);
        } else if constexpr (std::is_same_v<T, Timestamp>) {
          return clif_string(v.str());
        } else {
          return nlohmann::json(v).dump();
        }
      },
      value);
}

std::string membership(const std::set<RegimeId>& ids, const char* var) {
  if (ids.size() == 1) return "(" + name(ids.begin()->str()) + " " + var + ")";
  std::string out = "(or";
  for (const auto& id : ids) out += " (" + name(id.str()) + " " + var + ")";
  return out + ")";
}

void write_axioms(std::ostream& out, const SubstrateSchema& schema) {
  const auto ids = schema.regime_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      out << "(forall (x) (not (and (" << name(ids[i].str()) << " x) (" << name(ids[j].str()) << " x))))\n";
    }
  }
  // One axiom per relation type; several signatures become a disjunction.
  std::vector<RelationType> rels;
  for (const auto& sig : schema.signatures()) {
    if (std::find(rels.begin(), rels.end(), sig.rel_type) == rels.end()) rels.push_back(sig.rel_type);
  }
  for (auto rel : rels) {
    const auto sigs = schema.signatures_for(rel);
    out << "(forall (x y) (if (" << to_string(rel) << " x y) ";
    if (sigs.size() > 1) out << "(or";
    for (const auto* sig : sigs) {
      if (sigs.size() > 1) out << " ";
      out << "(and " << membership(sig->src, "x") << " " << membership(sig->dst, "y") << ")";
    }
    if (sigs.size() > 1) out << ")";
    out << "))\n";
  }
}

void write_entity(std::ostream& out, const Entity& e) {
  const std::string id = name(e.id().str());
  out << "(" << name(e.regime().str()) << " " << id << ")\n";
  for (const auto& [key, value] : e.attributes()) {
    out << "(attr " << id << " " << clif_string(key) << " " << literal(value) << ")\n";
  }
  if (e.occurred_at()) out << "(occurred-at " << id << " " << clif_string(e.occurred_at()->str()) << ")\n";
  if (e.asserted_at()) out << "(asserted-at " << id << " " << clif_string(e.asserted_at()->str()) << ")\n";
  if (e.provenance()) out << "(provenance " << id << " " << clif_string(*e.provenance()) << ")\n";
}

void write_edge(std::ostream& out, const RelationEdge& edge) {
  out << "(" << to_string(edge.rel_type()) << " " << name(edge.src().str()) << " " << name(edge.dst().str())
      << ")\n";
}

void write_substrate(std::ostream& out, const SubstrateRecords& records) {
  // Entities and edges share one sequence counter; merge by createdAt.
  std::size_t i = 0, j = 0;
  while (i < records.entities.size() || j < records.edges.size()) {
    const bool take_entity =
        j == records.edges.size() ||
        (i < records.entities.size() && records.entities[i].created_at() < records.edges[j].created_at());
    if (take_entity) {
      write_entity(out, records.entities[i++]);
    } else {
      write_edge(out, records.edges[j++]);
    }
  }
}

void write_layer(std::ostream& out, const ExtensionLayer& layer) {
  const std::string prefix = layer.name + "/";
  out << ";; layer: " << layer.name << "\n";
  for (const auto& a : layer.annotations) {
    out << "(" << name(prefix + "annotation") << " " << name(a.target) << " " << clif_string(a.key) << " "
        << literal(a.value) << ")\n";
  }
  for (const auto& e : layer.local_entities) {
    out << "(" << name(prefix + "local") << " " << name(e.id) << ")\n";
    if (!e.payload.is_null()) {
      out << "(" << name(prefix + "payload") << " " << name(e.id) << " " << clif_string(e.payload.dump()) << ")\n";
    }
  }
  for (const auto& l : layer.local_links) {
    out << "(" << name(prefix + "link") << " " << name(l.src) << " " << clif_string(l.label) << " " << name(l.dst)
        << ")\n";
  }
}

}  // namespace

std::string export_clif(const SubstrateStore& store) {
  std::ostringstream out;
  write_axioms(out, store.schema());
  write_substrate(out, store.records());
  return out.str();
}

std::string export_clif(const LayeredStore& store) {
  std::ostringstream out;
  write_axioms(out, store.schema());
  write_substrate(out, store.base().records());
  for (const auto& [_, layer] : store.layers()) write_layer(out, layer);
  return out.str();
}

std::string clif_substrate_section(std::string_view clif) {
  std::string out;
  bool in_layer = false;
  std::size_t pos = 0;
  while (pos < clif.size()) {
    std::size_t end = clif.find('\n', pos);
    if (end == std::string_view::npos) end = clif.size();
    const std::string_view line = clif.substr(pos, end - pos);
    if (line.rfind(";; layer:", 0) == 0) in_layer = true;
    if (!in_layer) {
      out += line;
      out += '\n';
    }
    pos = end + 1;
  }
  return out;
}

std::size_t clif_axiom_count(const SubstrateSchema& schema) {
  const std::size_t n = schema.regimes().size();
  std::set<RelationType> rels;
  for (const auto& sig : schema.signatures()) rels.insert(sig.rel_type);
  return n * (n - (n ? 1 : 0)) / 2 + rels.size();
}

}  // namespace nsub
