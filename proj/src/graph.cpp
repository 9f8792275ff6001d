#include "vesa/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vesa {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::MissingEndpoint: return "MissingEndpoint";
    case ErrorCode::IllegalEndpointKind: return "IllegalEndpointKind";
    case ErrorCode::MissingNode: return "MissingNode";
    case ErrorCode::NodeInUse: return "NodeInUse";
    case ErrorCode::InvalidNodeId: return "InvalidNodeId";
    case ErrorCode::CorruptDump: return "CorruptDump";
    case ErrorCode::BuildPhaseError: return "BuildPhaseError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FieldError: return "FieldError";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::RemoteFormatError: return "RemoteFormatError";
    case ErrorCode::EmptyStore: return "EmptyStore";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownKeyword: return "UnknownKeyword";
    case ErrorCode::UnknownAuthor: return "UnknownAuthor";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Corpus: return "Corpus";
    case NodeKind::Dataset: return "Dataset";
    case NodeKind::STACCollection: return "STACCollection";
    case NodeKind::Author: return "Author";
    case NodeKind::Keyword: return "Keyword";
    case NodeKind::Publication: return "Publication";
  }
  return "";
}

std::string_view to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::BelongsToCorpus: return "belongsToCorpus";
    case EdgeKind::HasAuthor: return "hasAuthor";
    case EdgeKind::HasKeyword: return "hasKeyword";
    case EdgeKind::HasPublication: return "hasPublication";
    case EdgeKind::MentionsMission: return "mentionsMission";
  }
  return "";
}

std::optional<NodeKind> node_kind_from_string(std::string_view name) noexcept {
  for (NodeKind k : kAllNodeKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view name) noexcept {
  for (EdgeKind k : kAllEdgeKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

NodeId NodeId::make(NodeKind kind, std::string_view key) {
  if (key.empty() || key.find('/') != std::string_view::npos) {
    throw Error(ErrorCode::InvalidNodeId, "invalid key '" + std::string(key) + "'");
  }
  std::string value(to_string(kind));
  value += '/';
  value += key;
  return NodeId(std::move(value), kind);
}

std::optional<NodeId> NodeId::try_parse(std::string_view text) noexcept {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto kind = node_kind_from_string(text.substr(0, slash));
  auto key = text.substr(slash + 1);
  if (!kind || key.empty() || key.find('/') != std::string_view::npos) return std::nullopt;
  return NodeId(std::string(text), *kind);
}

NodeId NodeId::parse(std::string_view text) {
  auto id = try_parse(text);
  if (!id) throw Error(ErrorCode::InvalidNodeId, "malformed node id '" + std::string(text) + "'");
  return *id;
}

std::string_view NodeId::key() const noexcept {
  std::string_view v = value_;
  auto slash = v.find('/');
  return slash == std::string_view::npos ? std::string_view{} : v.substr(slash + 1);
}

std::string make_edge_id(EdgeKind kind, const NodeId& from, const NodeId& to) {
  std::string id(to_string(kind));
  id += ':';
  id += from.str();
  id += "->";
  id += to.str();
  return id;
}

bool edge_endpoints_allowed(EdgeKind kind, NodeKind from, NodeKind to) noexcept {
  switch (kind) {
    case EdgeKind::HasAuthor:
      return (is_dataset_kind(from) || from == NodeKind::Publication) && to == NodeKind::Author;
    case EdgeKind::HasKeyword:
      return (is_dataset_kind(from) || from == NodeKind::Publication) && to == NodeKind::Keyword;
    case EdgeKind::BelongsToCorpus:
      return is_dataset_kind(from) && to == NodeKind::Corpus;
    case EdgeKind::HasPublication:
      return from == NodeKind::Dataset && to == NodeKind::Publication;
    case EdgeKind::MentionsMission:
      return from == NodeKind::Publication && to == NodeKind::STACCollection;
  }
  return false;
}

namespace {

std::optional<std::string> require_string(const Attrs& attrs, const char* field) {
  auto it = attrs.find(field);
  if (it == attrs.end() || !it->is_string()) return std::string("'") + field + "' must be a string";
  return std::nullopt;
}

std::optional<std::string> optional_of(const Attrs& attrs, const char* field,
                                       bool (Attrs::*check)() const noexcept, const char* what) {
  auto it = attrs.find(field);
  if (it != attrs.end() && !((*it).*check)()) return std::string("'") + field + "' must be " + what;
  return std::nullopt;
}

bool string_list(const Attrs& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const Attrs& e) { return e.is_string(); });
}

std::optional<std::string> validate_dataset(const Attrs& a) {
  if (auto e = require_string(a, "title")) return e;
  if (auto e = require_string(a, "organization")) return e;
  for (const char* f : {"abstract", "doi", "source_key"}) {
    if (auto e = optional_of(a, f, &Attrs::is_string, "a string")) return e;
  }
  if (auto it = a.find("publication_date"); it != a.end()) {
    if (!it->is_string() || !parse_timestamp(it->get<std::string>())) {
      return "'publication_date' must be an RFC 3339 timestamp";
    }
  }
  if (auto it = a.find("temporal_coverage"); it != a.end()) {
    if (!it->is_object()) return "'temporal_coverage' must be an object";
    std::optional<Instant> bounds[2];
    const char* names[2] = {"start", "end"};
    for (int i = 0; i < 2; ++i) {
      auto b = it->find(names[i]);
      if (b == it->end()) continue;
      if (!b->is_string() || !(bounds[i] = parse_timestamp(b->get<std::string>()))) {
        return std::string("'temporal_coverage.") + names[i] + "' must be an RFC 3339 timestamp";
      }
    }
    if (bounds[0] && bounds[1] && *bounds[0] > *bounds[1]) return "temporal_coverage start after end";
  }
  if (auto it = a.find("location"); it != a.end()) {
    if (!it->is_object()) return "'location' must be an object";
    const char* bounds[] = {"west_bound_longitude", "east_bound_longitude", "north_bound_latitude",
                            "south_bound_latitude"};
    for (const char* f : bounds) {
      auto b = it->find(f);
      if (b == it->end() || !b->is_number()) return std::string("'location.") + f + "' must be a number";
    }
    for (const char* f : {"mean_latitude", "mean_longitude"}) {
      if (auto e = optional_of(*it, f, &Attrs::is_number, "a number")) return e;
    }
    double w = (*it)["west_bound_longitude"], e = (*it)["east_bound_longitude"];
    double n = (*it)["north_bound_latitude"], s = (*it)["south_bound_latitude"];
    if (std::abs(w) > 180 || std::abs(e) > 180) return "longitude out of range";
    if (std::abs(n) > 90 || std::abs(s) > 90) return "latitude out of range";
    if (s > n) return "south bound exceeds north bound";
  }
  if (auto it = a.find("authors"); it != a.end()) {
    if (!it->is_array()) return "'authors' must be a list";
    for (const auto& author : *it) {
      if (!author.is_object() || !author.contains("name") || !author["name"].is_string()) {
        return "'authors' entries must be objects with a string name";
      }
    }
  }
  for (const char* f : {"keywords", "missions"}) {
    if (auto it = a.find(f); it != a.end() && !string_list(*it)) {
      return std::string("'") + f + "' must be a list of strings";
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_node_attrs(NodeKind kind, const Attrs& attrs) {
  if (!attrs.is_object()) return "attributes must be a record";
  switch (kind) {
    case NodeKind::Dataset:
    case NodeKind::STACCollection:
      return validate_dataset(attrs);
    case NodeKind::Corpus:
      return require_string(attrs, "name");
    case NodeKind::Author:
      if (auto e = require_string(attrs, "name")) return e;
      return optional_of(attrs, "organization", &Attrs::is_string, "a string");
    case NodeKind::Keyword:
      return require_string(attrs, "term");
    case NodeKind::Publication:
      if (auto e = require_string(attrs, "title")) return e;
      for (const char* f : {"keywords", "mission_mentions", "related_dataset_keys"}) {
        if (auto it = attrs.find(f); it != attrs.end() && !string_list(*it)) {
          return std::string("'") + f + "' must be a list of strings";
        }
      }
      return optional_of(attrs, "doi", &Attrs::is_string, "a string");
  }
  return std::nullopt;
}

std::optional<std::pair<Instant, Instant>> temporal_bounds(const Attrs& attrs) {
  auto it = attrs.find("temporal_coverage");
  if (it == attrs.end() || !it->is_object()) return std::nullopt;
  std::optional<Instant> start, end;
  if (auto s = it->find("start"); s != it->end() && s->is_string()) start = parse_timestamp(s->get<std::string>());
  if (auto e = it->find("end"); e != it->end() && e->is_string()) end = parse_timestamp(e->get<std::string>());
  if (!start && !end) return std::nullopt;
  return std::pair{start.value_or(Instant::min()), end.value_or(Instant::max())};
}

namespace {

size_t slot(EdgeKind kind, Direction dir) {
  return static_cast<size_t>(kind) * 2 + (dir == Direction::In ? 1 : 0);
}

const std::set<NodeId>& empty_set() {
  static const std::set<NodeId> empty;
  return empty;
}

}  // namespace

void GraphStore::require_build_phase(const char* op) const {
  if (frozen_) throw Error(ErrorCode::BuildPhaseError, std::string(op) + " on a frozen store");
}

void GraphStore::index_node(Indexes& idx, const GraphNode& node) {
  idx.adjacency.try_emplace(node.id);
  if (node.kind == NodeKind::Keyword) {
    idx.keyword_terms.emplace(node.attrs.at("term").get<std::string>(), node.id);
  }
  if (is_dataset_kind(node.kind)) {
    if (auto b = temporal_bounds(node.attrs)) idx.temporal.insert({b->first, b->second, node.id});
  }
}

void GraphStore::index_edge(Indexes& idx, const GraphEdge& edge) {
  idx.adjacency[edge.from][slot(edge.kind, Direction::Out)].insert(edge.to);
  idx.adjacency[edge.to][slot(edge.kind, Direction::In)].insert(edge.from);
}

NodeId GraphStore::add_node(NodeKind kind, std::string_view key, Attrs attrs) {
  require_build_phase("add_node");
  NodeId id = NodeId::make(kind, key);
  if (nodes_.count(id)) throw Error(ErrorCode::DuplicateNode, id.str());
  if (auto problem = validate_node_attrs(kind, attrs)) {
    throw Error(ErrorCode::SchemaViolation, id.str() + ": " + *problem);
  }
  if (kind == NodeKind::Keyword && indexes_.keyword_terms.count(attrs["term"].get<std::string>())) {
    throw Error(ErrorCode::SchemaViolation, id.str() + ": term already has a keyword node");
  }
  auto [it, _] = nodes_.emplace(id, GraphNode{id, kind, std::move(attrs)});
  index_node(indexes_, it->second);
  return id;
}

std::string GraphStore::add_edge(EdgeKind kind, const NodeId& from, const NodeId& to, Attrs attrs) {
  require_build_phase("add_edge");
  if (!contains(from)) throw Error(ErrorCode::MissingEndpoint, from.str());
  if (!contains(to)) throw Error(ErrorCode::MissingEndpoint, to.str());
  if (!edge_endpoints_allowed(kind, from.kind(), to.kind())) {
    throw Error(ErrorCode::IllegalEndpointKind, std::string(to_string(kind)) + " from " +
                                                    std::string(to_string(from.kind())) + " to " +
                                                    std::string(to_string(to.kind())));
  }
  if (!attrs.is_object()) throw Error(ErrorCode::SchemaViolation, "edge attributes must be a record");
  std::string id = make_edge_id(kind, from, to);
  if (edges_.count(id)) return id;
  auto [it, _] = edges_.emplace(id, GraphEdge{id, kind, from, to, std::move(attrs)});
  index_edge(indexes_, it->second);
  return id;
}

void GraphStore::remove_edge(const std::string& edge_id) {
  require_build_phase("remove_edge");
  auto it = edges_.find(edge_id);
  if (it == edges_.end()) return;
  const GraphEdge& e = it->second;
  indexes_.adjacency[e.from][slot(e.kind, Direction::Out)].erase(e.to);
  indexes_.adjacency[e.to][slot(e.kind, Direction::In)].erase(e.from);
  edges_.erase(it);
}

void GraphStore::remove_node(const NodeId& id) {
  require_build_phase("remove_node");
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::MissingNode, id.str());
  const auto& per_node = indexes_.adjacency.at(id);
  for (const auto& s : per_node) {
    if (!s.empty()) throw Error(ErrorCode::NodeInUse, id.str() + " has incident edges");
  }
  indexes_.adjacency.erase(id);
  if (it->second.kind == NodeKind::Keyword) indexes_.keyword_terms.erase(it->second.attrs["term"].get<std::string>());
  if (auto b = temporal_bounds(it->second.attrs); b && is_dataset_kind(it->second.kind)) {
    indexes_.temporal.erase({b->first, b->second, id});
  }
  nodes_.erase(it);
}

const GraphNode* GraphStore::find_node(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const GraphNode& GraphStore::node(const NodeId& id) const {
  if (const auto* n = find_node(id)) return *n;
  throw Error(ErrorCode::MissingNode, id.str());
}

const GraphEdge* GraphStore::find_edge(EdgeKind kind, const NodeId& from, const NodeId& to) const {
  auto it = edges_.find(make_edge_id(kind, from, to));
  return it == edges_.end() ? nullptr : &it->second;
}

const std::set<NodeId>& GraphStore::adjacent(const NodeId& id, EdgeKind kind, Direction direction) const {
  auto it = indexes_.adjacency.find(id);
  if (it == indexes_.adjacency.end()) {
    if (!contains(id)) throw Error(ErrorCode::MissingNode, id.str());
    return empty_set();
  }
  return it->second[slot(kind, direction)];
}

std::vector<NodeId> GraphStore::neighbors(const NodeId& id, EdgeKind kind, Direction direction) const {
  const auto& s = adjacent(id, kind, direction);
  return {s.begin(), s.end()};
}

std::vector<NodeId> GraphStore::nodes_of_kind(NodeKind kind) const {
  std::vector<NodeId> out;
  for (const auto& [id, node] : nodes_) {
    if (node.kind == kind) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> GraphStore::dataset_ids() const {
  std::vector<NodeId> out;
  for (const auto& [id, node] : nodes_) {
    if (is_dataset_kind(node.kind)) out.push_back(id);
  }
  return out;
}

std::optional<NodeId> GraphStore::keyword_node(std::string_view term) const {
  auto it = indexes_.keyword_terms.find(term);
  if (it == indexes_.keyword_terms.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> GraphStore::datasets_overlapping(Instant from, Instant to) const {
  std::vector<NodeId> out;
  for (const auto& entry : indexes_.temporal) {
    if (entry.start > to) break;  // sorted by start
    if (entry.end >= from) out.push_back(entry.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphStore::Indexes GraphStore::rebuild_indexes() const {
  Indexes idx;
  for (const auto& [_, node] : nodes_) index_node(idx, node);
  for (const auto& [_, edge] : edges_) index_edge(idx, edge);
  return idx;
}

bool GraphStore::check_referential_integrity() const {
  for (const auto& [id, edge] : edges_) {
    const auto* from = find_node(edge.from);
    const auto* to = find_node(edge.to);
    if (!from || !to) return false;
    if (from->kind != edge.from.kind() || to->kind != edge.to.kind()) return false;
    if (!edge_endpoints_allowed(edge.kind, from->kind, to->kind)) return false;
    if (id != make_edge_id(edge.kind, edge.from, edge.to)) return false;
  }
  return true;
}

}  // namespace vesa
