#include "cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "nsub/codec.hpp"
#include "nsub/errors.hpp"
#include "nsub/interchange.hpp"
#include "nsub/report.hpp"

namespace nsub::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Usage, I/O and parse failures; mapped to kEnvironment.
struct EnvironmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string errno_text() { return std::strerror(errno); }

/// Open store file holding an advisory lock for the life of the command.
class StoreFile {
 public:
  StoreFile(const std::string& path, bool exclusive) : path_(path) {
    fd_ = ::open(path.c_str(), exclusive ? (O_RDWR | O_APPEND) : O_RDONLY);
    if (fd_ < 0) throw EnvironmentError("cannot open store " + path + ": " + errno_text());
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      throw EnvironmentError("cannot lock store " + path + ": " + errno_text());
    }
  }
  StoreFile(const StoreFile&) = delete;
  StoreFile& operator=(const StoreFile&) = delete;
  ~StoreFile() {
    if (fd_ >= 0) ::close(fd_);  // releases the flock
  }

  std::string read_all() const {
    std::string data;
    char buf[1 << 16];
    off_t offset = 0;
    for (;;) {
      const ssize_t n = ::pread(fd_, buf, sizeof buf, offset);
      if (n < 0) throw EnvironmentError("cannot read store " + path_ + ": " + errno_text());
      if (n == 0) break;
      data.append(buf, static_cast<std::size_t>(n));
      offset += n;
    }
    return data;
  }

  void append(const std::string& bytes) const {
    std::size_t done = 0;
    while (done < bytes.size()) {
      const ssize_t n = ::write(fd_, bytes.data() + done, bytes.size() - done);
      if (n < 0) throw EnvironmentError("cannot write store " + path_ + ": " + errno_text());
      done += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) throw EnvironmentError("cannot sync store " + path_ + ": " + errno_text());
  }

 private:
  std::string path_;
  int fd_ = -1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EnvironmentError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Creates `path` exclusively; fails when it exists or its directory does not.
void create_new_file(const std::string& path, const std::string& contents) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
  if (fd < 0) throw EnvironmentError("cannot create " + path + ": " + errno_text());
  std::size_t done = 0;
  while (done < contents.size()) {
    const ssize_t n = ::write(fd, contents.data() + done, contents.size() - done);
    if (n < 0) {
      const std::string why = errno_text();
      ::close(fd);
      throw EnvironmentError("cannot write " + path + ": " + why);
    }
    done += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

void write_output(const std::optional<std::string>& path, const std::string& contents, std::ostream& out) {
  if (!path) {
    out << contents;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << contents) || !file.flush()) throw EnvironmentError("cannot write " + *path);
}

SubstrateSchema load_schema(const std::optional<std::string>& flag) {
  std::optional<std::string> path = flag;
  if (!path) {
    if (const char* env = std::getenv("NS_SCHEMA"); env && *env) path = env;
  }
  if (!path) return default_schema();
  json doc;
  try {
    doc = json::parse(read_file(*path));
  } catch (const json::exception& e) {
    throw EnvironmentError("schema " + *path + " is not JSON: " + e.what());
  }
  try {
    return schema_from_json(doc);
  } catch (const Error& e) {
    throw EnvironmentError("schema " + *path + ": " + e.what());
  }
}

LayeredStore load_store(const StoreFile& file, const std::string& path, const SubstrateSchema& schema) {
  try {
    return import_log(file.read_all(), schema);
  } catch (const ImportError& e) {
    throw EnvironmentError("store " + path + " is unreadable: " + e.what());
  }
}

/// "true"/"false" → boolean, integer and decimal literals → numbers, an
/// RFC 3339 UTC instant → timestamp, a double-quoted text → that text,
/// anything else → string.
AttributeValue parse_scalar(const std::string& text) {
  static const std::regex integer(R"(-?(0|[1-9][0-9]*))");
  static const std::regex decimal(R"(-?(0|[1-9][0-9]*)(\.[0-9]+)([eE][+-]?[0-9]+)?|-?(0|[1-9][0-9]*)[eE][+-]?[0-9]+)");
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') return text.substr(1, text.size() - 2);
  if (std::regex_match(text, integer)) {
    try {
      return static_cast<std::int64_t>(std::stoll(text));
    } catch (const std::out_of_range&) {
      throw EnvironmentError("integer out of range: " + text);
    }
  }
  if (std::regex_match(text, decimal)) return std::stod(text);
  try {
    return Timestamp::parse(text);
  } catch (const Error&) {
    return text;
  }
}

Attributes parse_attributes(const std::vector<std::string>& pairs) {
  Attributes out;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw EnvironmentError("--attr expects key=value, got '" + p + "'");
    out[p.substr(0, eq)] = parse_scalar(p.substr(eq + 1));
  }
  return out;
}

Timestamp parse_timestamp_flag(const std::string& flag, const std::string& text) {
  try {
    return Timestamp::parse(text);
  } catch (const Error& e) {
    throw EnvironmentError(flag + ": " + e.detail());
  }
}

std::string value_text(const AttributeValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return json(*s).dump();
  return codec::encode(v).dump();
}

struct Options {
  std::optional<std::string> schema;
  std::string store;
  // add
  std::string regime, id, type, src, dst;
  std::vector<std::string> attrs;
  std::optional<std::string> occurred_at, asserted_at, provenance;
  // layer / import
  std::string attach, from;
  // verify / reports
  std::string mode;
  std::string format = "text";
  std::string export_format;
  std::optional<std::string> out;
};

int cmd_init(const Options& o, std::ostream& out) {
  const fs::path path(o.store);
  std::error_code ec;
  if (fs::exists(path, ec)) throw EnvironmentError("store " + o.store + " already exists");
  create_new_file(o.store, "");
  out << "initialized " << o.store << "\n";
  return kOk;
}

int cmd_add_entity(const Options& o, std::ostream& out, std::ostream& err) {
  const SubstrateSchema schema = load_schema(o.schema);
  StoreFile file(o.store, true);
  LayeredStore store = load_store(file, o.store, schema);
  TemporalAnchor anchor;
  if (o.occurred_at) anchor.occurred_at = parse_timestamp_flag("--occurred-at", *o.occurred_at);
  if (o.asserted_at) anchor.asserted_at = parse_timestamp_flag("--asserted-at", *o.asserted_at);
  anchor.provenance = o.provenance;
  const Attributes attrs = parse_attributes(o.attrs);
  try {
    const RegimeId regime(o.regime);
    store.create_entity(regime, o.id, attrs, anchor);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedValue) throw EnvironmentError(e.what());
    err << e.what() << "\n";
    return kViolation;
  }
  file.append(event_line(store, store.journal().size() - 1));
  out << "added entity " << o.id << " (" << o.regime << ")\n";
  return kOk;
}

int cmd_add_relation(const Options& o, std::ostream& out, std::ostream& err) {
  const SubstrateSchema schema = load_schema(o.schema);
  StoreFile file(o.store, true);
  LayeredStore store = load_store(file, o.store, schema);
  const auto rel = parse_relation_type(o.type);
  if (!rel) throw EnvironmentError("unknown relation type '" + o.type + "'");
  try {
    const RelationEdge edge = store.add_relation(*rel, o.src, o.dst);
    file.append(event_line(store, store.journal().size() - 1));
    out << "added relation " << edge.id() << " " << o.type << " " << o.src << " " << o.dst << "\n";
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kViolation;
  }
  return kOk;
}

int cmd_layer(const Options& o, std::ostream& out, std::ostream& err) {
  const SubstrateSchema schema = load_schema(o.schema);
  StoreFile file(o.store, true);
  LayeredStore store = load_store(file, o.store, schema);
  ExtensionLayer layer;
  try {
    layer = codec::decode_layer(json::parse(read_file(o.attach)));
  } catch (const json::exception& e) {
    throw EnvironmentError("layer file " + o.attach + " is not JSON: " + e.what());
  } catch (const Error& e) {
    throw EnvironmentError("layer file " + o.attach + ": " + e.what());
  }
  const std::string name = layer.name;
  try {
    store.attach(std::move(layer));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kViolation;
  }
  file.append(event_line(store, store.journal().size() - 1));
  out << "attached layer " << name << "\n";
  return kOk;
}

int cmd_conflicts(const Options& o, std::ostream& out) {
  const SubstrateSchema schema = load_schema(o.schema);
  StoreFile file(o.store, false);
  const LayeredStore store = load_store(file, o.store, schema);
  const auto conflicts = detect_conflicts(store);
  if (o.format == "json") {
    json doc = json::array();
    for (const auto& c : conflicts) {
      json values = json::array();
      for (const auto& [layer, value] : c.assertions) {
        values.push_back({{"layer", layer}, {"value", codec::encode(value)}});
      }
      doc.push_back({{"target", c.target}, {"key", c.key}, {"assertions", values}});
    }
    out << doc.dump() << "\n";
    return kOk;
  }
  for (const auto& c : conflicts) {
    out << c.target << " " << c.key << ":";
    for (const auto& [layer, value] : c.assertions) out << " " << layer << "=" << value_text(value);
    out << "\n";
  }
  out << conflicts.size() << " conflict(s)\n";
  return kOk;
}

int cmd_project(const Options& o, std::ostream& out) {
  const SubstrateSchema schema = load_schema(o.schema);
  StoreFile file(o.store, false);
  const LayeredStore store = load_store(file, o.store, schema);
  const SubstrateRecords records = substrate_projection(store);
  std::size_t i = 0, j = 0;
  while (i < records.entities.size() || j < records.edges.size()) {
    const bool entity =
        j == records.edges.size() ||
        (i < records.entities.size() && records.entities[i].created_at() < records.edges[j].created_at());
    json line = entity ? json{{"kind", "entity"}, {"payload", codec::encode(records.entities[i++])}}
                       : json{{"kind", "relation"}, {"payload", codec::encode(records.edges[j++])}};
    out << line.dump() << "\n";
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const SubstrateSchema schema = load_schema(o.schema);
  const bool as_json = o.format == "json";
  auto emit = [&](const json& doc, const std::string& text) {
    if (as_json) {
      out << doc.dump() << "\n";
    } else {
      out << text;
    }
  };
  if (o.mode == "pairs") {
    const auto report = verify_all_pairs(schema);
    emit(to_json(report), render_text(report));
    return report.all_inadmissible() ? kOk : kViolation;
  }
  if (o.mode == "partitions") {
    const auto report = verify_partitions(schema);
    emit(to_json(report), render_text(report));
    return report.all_inadmissible() ? kOk : kViolation;
  }
  if (o.mode == "requirements") {
    const auto report = check_requirements(schema);
    emit(to_json(report), render_text(report));
    return report.overall() ? kOk : kViolation;
  }
  const auto report = tightness_report(schema);
  emit(to_json(report), render_text(report));
  return report.tight() && report.regime_count == 6 ? kOk : kViolation;
}

int cmd_export(const Options& o, std::ostream& out) {
  const SubstrateSchema schema = load_schema(o.schema);
  StoreFile file(o.store, false);
  const LayeredStore store = load_store(file, o.store, schema);
  write_output(o.out, o.export_format == "clif" ? export_clif(store) : export_log(store), out);
  return kOk;
}

int cmd_import(const Options& o, std::ostream& out, std::ostream& err) {
  const SubstrateSchema schema = load_schema(o.schema);
  std::error_code ec;
  if (fs::exists(o.store, ec)) throw EnvironmentError("store " + o.store + " already exists");
  std::optional<LayeredStore> store;
  try {
    store.emplace(import_log(read_file(o.from), schema));
  } catch (const ImportError& e) {
    if (e.code() != ErrorCode::ReplayViolation) throw EnvironmentError(e.what());
    err << e.what() << "\n";
    return kViolation;
  }
  create_new_file(o.store, export_log(*store));
  out << "imported " << store->journal().size() << " event(s) into " << o.store << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"nsub: neutral accountability substrate store and collapse verifier"};
  app.require_subcommand(1);
  Options o;

  auto schema_opt = [&](CLI::App* cmd) {
    cmd->add_option("--schema", o.schema, "Custom schema JSON (default: built-in; env NS_SCHEMA)");
  };

  auto* init = app.add_subcommand("init", "Create an empty store log");
  init->add_option("store", o.store, "Path to the .nslog file")->required();

  auto* add = app.add_subcommand("add", "Append an entity or a relation");
  add->require_subcommand(1);
  auto* add_entity = add->add_subcommand("entity", "Append an entity");
  add_entity->add_option("store", o.store)->required();
  add_entity->add_option("--regime", o.regime)->required();
  add_entity->add_option("--id", o.id)->required();
  add_entity->add_option("--attr", o.attrs, "key=value, repeatable");
  add_entity->add_option("--occurred-at", o.occurred_at);
  add_entity->add_option("--asserted-at", o.asserted_at);
  add_entity->add_option("--provenance", o.provenance);
  schema_opt(add_entity);
  auto* add_relation = add->add_subcommand("relation", "Append a relation edge");
  add_relation->add_option("store", o.store)->required();
  add_relation->add_option("--type", o.type)->required();
  add_relation->add_option("--src", o.src)->required();
  add_relation->add_option("--dst", o.dst)->required();
  schema_opt(add_relation);

  auto* layer = app.add_subcommand("layer", "Attach an extension layer");
  layer->add_option("store", o.store)->required();
  layer->add_option("--attach", o.attach, "Layer JSON file")->required();
  schema_opt(layer);

  auto* conflicts = app.add_subcommand("conflicts", "List disagreements between layers");
  conflicts->add_option("store", o.store)->required();
  conflicts->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));
  schema_opt(conflicts);

  auto* project = app.add_subcommand("project", "Print the substrate records as JSON Lines");
  project->add_option("store", o.store)->required();
  schema_opt(project);

  auto* verify = app.add_subcommand("verify", "Run the collapse verifier");
  verify->add_option("--mode", o.mode)
      ->required()
      ->check(CLI::IsMember({"pairs", "partitions", "requirements", "tightness"}));
  verify->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));
  schema_opt(verify);

  auto* exp = app.add_subcommand("export", "Write the store as .nslog or .clif");
  exp->add_option("store", o.store)->required();
  exp->add_option("--format", o.export_format)->required()->check(CLI::IsMember({"clif", "log"}));
  exp->add_option("--out", o.out, "Output file (default: stdout)");
  schema_opt(exp);

  auto* imp = app.add_subcommand("import", "Replay a log into a new store");
  imp->add_option("store", o.store, "New store path")->required();
  imp->add_option("--from", o.from, "Source .nslog")->required();
  schema_opt(imp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kEnvironment;
  }

  try {
    if (init->parsed()) return cmd_init(o, out);
    if (add_entity->parsed()) return cmd_add_entity(o, out, err);
    if (add_relation->parsed()) return cmd_add_relation(o, out, err);
    if (layer->parsed()) return cmd_layer(o, out, err);
    if (conflicts->parsed()) return cmd_conflicts(o, out);
    if (project->parsed()) return cmd_project(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (exp->parsed()) return cmd_export(o, out);
    if (imp->parsed()) return cmd_import(o, out, err);
  } catch (const EnvironmentError& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kEnvironment;
  }
  return kEnvironment;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"nsub"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nsub::cli
