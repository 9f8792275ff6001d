#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "vesa/error.hpp"
#include "vesa/time.hpp"

namespace vesa {

using Attrs = nlohmann::json;

enum class NodeKind { Corpus, Dataset, STACCollection, Author, Keyword, Publication };
enum class EdgeKind { BelongsToCorpus, HasAuthor, HasKeyword, HasPublication, MentionsMission };
enum class Direction { Out, In };

inline constexpr std::array<NodeKind, 6> kAllNodeKinds = {
    NodeKind::Corpus, NodeKind::Dataset,  NodeKind::STACCollection,
    NodeKind::Author, NodeKind::Keyword, NodeKind::Publication};
inline constexpr std::array<EdgeKind, 5> kAllEdgeKinds = {
    EdgeKind::BelongsToCorpus, EdgeKind::HasAuthor, EdgeKind::HasKeyword, EdgeKind::HasPublication,
    EdgeKind::MentionsMission};

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(EdgeKind kind) noexcept;
std::optional<NodeKind> node_kind_from_string(std::string_view name) noexcept;
std::optional<EdgeKind> edge_kind_from_string(std::string_view name) noexcept;

/// True for the two node kinds that represent searchable datasets.
inline bool is_dataset_kind(NodeKind kind) noexcept {
  return kind == NodeKind::Dataset || kind == NodeKind::STACCollection;
}

/// "<Collection>/<key>", e.g. "Dataset/495977132". The key is non-empty and
/// contains no '/'.
class NodeId {
 public:
  NodeId() = default;

  static NodeId make(NodeKind kind, std::string_view key);
  /// Throws Error{InvalidNodeId} on a malformed id.
  static NodeId parse(std::string_view text);
  static std::optional<NodeId> try_parse(std::string_view text) noexcept;

  const std::string& str() const noexcept { return value_; }
  NodeKind kind() const noexcept { return kind_; }
  std::string_view key() const noexcept;

  friend bool operator==(const NodeId& a, const NodeId& b) noexcept { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) noexcept {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  NodeId(std::string value, NodeKind kind) : value_(std::move(value)), kind_(kind) {}

  std::string value_;
  NodeKind kind_ = NodeKind::Dataset;
};

struct NodeIdHash {
  size_t operator()(const NodeId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};

struct GraphNode {
  NodeId id;
  NodeKind kind = NodeKind::Dataset;
  Attrs attrs = Attrs::object();

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string id;
  EdgeKind kind = EdgeKind::HasKeyword;
  NodeId from;
  NodeId to;
  Attrs attrs = Attrs::object();

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Canonical edge id for a (kind, from, to) triple.
std::string make_edge_id(EdgeKind kind, const NodeId& from, const NodeId& to);

/// True when `kind` may connect a node of kind `from` to one of kind `to`.
bool edge_endpoints_allowed(EdgeKind kind, NodeKind from, NodeKind to) noexcept;

/// Validates attrs against the per-kind schema; returns an error message or
/// nullopt. Unknown extra attributes are accepted.
std::optional<std::string> validate_node_attrs(NodeKind kind, const Attrs& attrs);

/// Coverage interval of a dataset node. An absent bound is open.
struct TemporalEntry {
  Instant start;
  Instant end;
  NodeId id;

  friend auto operator<=>(const TemporalEntry&, const TemporalEntry&) = default;
};

/// Reads the temporal_coverage attribute of a dataset node. Returns nullopt
/// when neither bound is present.
std::optional<std::pair<Instant, Instant>> temporal_bounds(const Attrs& attrs);

class GraphStore {
 public:
  /// Derived lookup structures, kept incrementally and rebuildable from the
  /// node and edge sets.
  struct Indexes {
    using PerNode = std::array<std::set<NodeId>, kAllEdgeKinds.size() * 2>;
    std::unordered_map<NodeId, PerNode, NodeIdHash> adjacency;
    std::map<std::string, NodeId, std::less<>> keyword_terms;
    std::set<TemporalEntry> temporal;

    friend bool operator==(const Indexes&, const Indexes&) = default;
  };

  NodeId add_node(NodeKind kind, std::string_view key, Attrs attrs);
  /// Re-adding an existing (kind, from, to) triple returns the existing id.
  std::string add_edge(EdgeKind kind, const NodeId& from, const NodeId& to, Attrs attrs = Attrs::object());
  /// Fails with NodeInUse while incident edges exist.
  void remove_node(const NodeId& id);
  void remove_edge(const std::string& edge_id);

  bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }
  const GraphNode* find_node(const NodeId& id) const;
  /// Throws MissingNode.
  const GraphNode& node(const NodeId& id) const;
  const GraphEdge* find_edge(EdgeKind kind, const NodeId& from, const NodeId& to) const;

  /// Endpoints of matching incident edges, sorted by NodeId. Throws MissingNode.
  std::vector<NodeId> neighbors(const NodeId& id, EdgeKind kind, Direction direction) const;
  /// Same as neighbors() without the copy; valid while the store is unchanged.
  const std::set<NodeId>& adjacent(const NodeId& id, EdgeKind kind, Direction direction) const;

  std::vector<NodeId> nodes_of_kind(NodeKind kind) const;
  /// Dataset and STACCollection ids, sorted.
  std::vector<NodeId> dataset_ids() const;
  std::optional<NodeId> keyword_node(std::string_view term) const;
  /// Dataset nodes whose coverage intersects the closed range [from, to].
  std::vector<NodeId> datasets_overlapping(Instant from, Instant to) const;

  const std::map<NodeId, GraphNode>& nodes() const noexcept { return nodes_; }
  const std::map<std::string, GraphEdge>& edges() const noexcept { return edges_; }
  size_t node_count() const noexcept { return nodes_.size(); }
  size_t edge_count() const noexcept { return edges_.size(); }

  /// Ends the build phase; all later mutations fail with BuildPhaseError.
  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  const Indexes& indexes() const noexcept { return indexes_; }
  Indexes rebuild_indexes() const;
  bool check_index_consistency() const { return rebuild_indexes() == indexes_; }
  /// Full scan: every edge endpoint resolves and has a legal kind.
  bool check_referential_integrity() const;

  /// Element-wise equality of nodes and edges (attrs included).
  friend bool operator==(const GraphStore& a, const GraphStore& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  void require_build_phase(const char* op) const;
  static void index_node(Indexes& idx, const GraphNode& node);
  static void index_edge(Indexes& idx, const GraphEdge& edge);

  std::map<NodeId, GraphNode> nodes_;
  std::map<std::string, GraphEdge> edges_;
  Indexes indexes_;
  bool frozen_ = false;
};

}  // namespace vesa
