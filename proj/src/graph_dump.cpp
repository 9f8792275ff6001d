#include "vesa/graph_dump.hpp"

#include <fstream>
#include <sstream>

namespace vesa {

std::string dump_to_string(const GraphStore& store) {
  std::string out;
  Attrs header = {{"format", kDumpFormat},
                  {"version", kDumpVersion},
                  {"counts", {{"nodes", store.node_count()}, {"edges", store.edge_count()}}}};
  out += header.dump();
  out += '\n';
  for (const auto& [id, node] : store.nodes()) {
    Attrs rec = {{"kind", "node"}, {"id", id.str()}, {"type", to_string(node.kind)}, {"attrs", node.attrs}};
    out += rec.dump();
    out += '\n';
  }
  for (const auto& [id, edge] : store.edges()) {
    Attrs rec = {{"kind", "edge"},
                 {"id", id},
                 {"type", to_string(edge.kind)},
                 {"from", edge.from.str()},
                 {"to", edge.to.str()},
                 {"attrs", edge.attrs}};
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void dump(const GraphStore& store, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << dump_to_string(store);
  if (!f.flush()) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

namespace {

[[noreturn]] void corrupt(size_t line, const std::string& why) {
  throw Error(ErrorCode::CorruptDump, "line " + std::to_string(line) + ": " + why);
}

const std::string& string_field(const Attrs& rec, const char* field, size_t line) {
  auto it = rec.find(field);
  if (it == rec.end() || !it->is_string()) corrupt(line, std::string("missing string field '") + field + "'");
  return it->get_ref<const std::string&>();
}

}  // namespace

GraphStore load_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;

  if (!std::getline(in, line)) corrupt(1, "missing header");
  ++line_no;
  Attrs header = Attrs::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object()) corrupt(line_no, "header is not a JSON object");
  if (header.value("format", "") != kDumpFormat) corrupt(line_no, "unexpected format");
  if (!header.contains("version") || header["version"] != kDumpVersion) corrupt(line_no, "unsupported version");
  auto counts = header.find("counts");
  if (counts == header.end() || !counts->is_object() || !(*counts)["nodes"].is_number_unsigned() ||
      !(*counts)["edges"].is_number_unsigned()) {
    corrupt(line_no, "malformed counts");
  }
  const size_t expect_nodes = (*counts)["nodes"];
  const size_t expect_edges = (*counts)["edges"];

  GraphStore store;
  std::string previous_node, previous_edge;
  bool seen_edge = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Attrs rec = Attrs::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) corrupt(line_no, "record is not a JSON object");
    const std::string& kind = string_field(rec, "kind", line_no);
    const std::string& id = string_field(rec, "id", line_no);
    const std::string& type = string_field(rec, "type", line_no);
    Attrs attrs = rec.value("attrs", Attrs::object());
    try {
      if (kind == "node") {
        if (seen_edge) corrupt(line_no, "node record after edge records");
        if (!previous_node.empty() && id <= previous_node) corrupt(line_no, "node records not sorted by id");
        previous_node = id;
        auto node_kind = node_kind_from_string(type);
        auto node_id = NodeId::try_parse(id);
        if (!node_kind || !node_id || node_id->kind() != *node_kind) corrupt(line_no, "bad node id/type");
        store.add_node(*node_kind, node_id->key(), std::move(attrs));
      } else if (kind == "edge") {
        seen_edge = true;
        if (!previous_edge.empty() && id <= previous_edge) corrupt(line_no, "edge records not sorted by id");
        previous_edge = id;
        auto edge_kind = edge_kind_from_string(type);
        auto from = NodeId::try_parse(string_field(rec, "from", line_no));
        auto to = NodeId::try_parse(string_field(rec, "to", line_no));
        if (!edge_kind || !from || !to) corrupt(line_no, "bad edge type or endpoint");
        if (id != make_edge_id(*edge_kind, *from, *to)) corrupt(line_no, "edge id does not match its triple");
        store.add_edge(*edge_kind, *from, *to, std::move(attrs));
      } else {
        corrupt(line_no, "unknown record kind '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CorruptDump) throw;
      corrupt(line_no, e.what());
    }
  }
  if (store.node_count() != expect_nodes || store.edge_count() != expect_edges) {
    corrupt(line_no, "record counts do not match header");
  }
  return store;
}

GraphStore load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return load_from_string(buf.str());
}

}  // namespace vesa
