#include "nsub/interchange.hpp"

#include "nsub/codec.hpp"
#include "nsub/errors.hpp"

namespace nsub {

using nlohmann::json;

namespace {

std::string_view kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Entity: return "entity";
    case EventKind::Relation: return "relation";
    case EventKind::Layer: return "layer";
  }
  return "?";
}

std::string encode_event(const LayeredStore& store, const SubstrateRecords& records, std::size_t index) {
  const JournalEntry& entry = store.journal().at(index);
  json payload;
  switch (entry.kind) {
    case EventKind::Entity: payload = codec::encode(records.entities.at(entry.index)); break;
    case EventKind::Relation: payload = codec::encode(records.edges.at(entry.index)); break;
    case EventKind::Layer:
      payload = codec::encode(store.layers().at(store.attachment_order().at(entry.index)));
      break;
  }
  json line{{"seq", index}, {"kind", std::string(kind_name(entry.kind))}, {"payload", std::move(payload)}};
  return line.dump() + "\n";
}

}  // namespace

std::string event_line(const LayeredStore& store, std::size_t index) {
  return encode_event(store, store.base().records(), index);
}

std::string export_log(const LayeredStore& store) {
  const SubstrateRecords records = store.base().records();
  std::string out;
  for (std::size_t i = 0; i < store.journal().size(); ++i) out += encode_event(store, records, i);
  return out;
}

LayeredStore import_log(std::string_view bytes, const SubstrateSchema& schema) {
  LayeredStore store(schema);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    ++line_no;
    const std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) {
      throw ImportError(ErrorCode::MalformedLine, line_no, "missing trailing newline");
    }
    const std::string_view text = bytes.substr(pos, end - pos);
    pos = end + 1;
    auto malformed = [&](const std::string& why) -> ImportError {
      return ImportError(ErrorCode::MalformedLine, line_no, why);
    };
    if (text.empty()) throw malformed("empty line");
    if (text.back() == ' ' || text.back() == '\t' || text.back() == '\r') throw malformed("trailing whitespace");

    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw malformed(e.what());
    }
    if (!doc.is_object() || doc.size() != 3 || !doc.contains("seq") || !doc.contains("kind") ||
        !doc.contains("payload")) {
      throw malformed("expected an object with exactly seq, kind and payload");
    }
    if (!doc["seq"].is_number_unsigned()) throw malformed("seq must be a non-negative integer");
    const auto seq = doc["seq"].get<std::uint64_t>();
    const std::size_t expected = store.journal().size();
    if (seq != expected) {
      throw ImportError(ErrorCode::SequenceGap, line_no,
                        "seq " + std::to_string(seq) + " where " + std::to_string(expected) + " was expected");
    }
    const std::string kind = doc["kind"].is_string() ? doc["kind"].get<std::string>() : "";

    // Decode first so shape errors are MalformedLine, then replay so store
    // errors are ReplayViolation.
    try {
      if (kind == "entity") {
        auto f = codec::decode_entity(doc["payload"]);
        if (f.created_at != store.base().next_seq()) {
          throw malformed("createdAt " + std::to_string(f.created_at) + " does not match replay position " +
                          std::to_string(store.base().next_seq()));
        }
        try {
          store.create_entity(f.regime, std::move(f.id), std::move(f.attributes), std::move(f.anchor));
        } catch (const Error& e) {
          throw ImportError(ErrorCode::ReplayViolation, line_no, e.what(), e.code());
        }
      } else if (kind == "relation") {
        auto f = codec::decode_edge(doc["payload"]);
        if (f.created_at != store.base().next_seq() || f.id != edge_id_for(f.created_at)) {
          throw malformed("edge " + f.id + " does not match replay position " +
                          std::to_string(store.base().next_seq()));
        }
        try {
          store.add_relation(f.rel_type, f.src, f.dst);
        } catch (const Error& e) {
          throw ImportError(ErrorCode::ReplayViolation, line_no, e.what(), e.code());
        }
      } else if (kind == "layer") {
        auto layer = codec::decode_layer(doc["payload"]);
        try {
          store.attach(std::move(layer));
        } catch (const Error& e) {
          throw ImportError(ErrorCode::ReplayViolation, line_no, e.what(), e.code());
        }
      } else {
        throw malformed("unknown event kind " + doc["kind"].dump());
      }
    } catch (const ImportError&) {
      throw;
    } catch (const Error& e) {
      throw malformed(e.what());
    } catch (const json::exception& e) {
      throw malformed(e.what());
    }
  }
  return store;
}

}  // namespace nsub
