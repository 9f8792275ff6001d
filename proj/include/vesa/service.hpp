#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vesa/graph.hpp"
#include "vesa/query.hpp"

namespace httplib {
class Server;
}

namespace vesa {

struct ServiceConfig {
  int port = 8080;
  std::filesystem::path graph;
  size_t cloud_k = 100;
  std::optional<std::filesystem::path> tokenizer;
  std::vector<std::string> cors_origins;
  std::optional<std::filesystem::path> sources;
  bool bbox_intersection = false;

  /// Relative paths resolve against `base_dir`. Throws Error{ConfigError}.
  static ServiceConfig from_json(const Attrs& config, const std::filesystem::path& base_dir = {});
  static ServiceConfig load(const std::filesystem::path& path);
  /// VESA_PORT, when set, replaces the configured port.
  void apply_environment();
  /// Port range, cloud size, and existence of every referenced path.
  /// A missing graph dump raises IoError; everything else ConfigError.
  void validate() const;
  QueryOptions query_options() const;
};

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::multimap<std::string, std::string> params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Immutable per-graph state: the query engine plus response bodies that
/// depend only on the graph.
class Snapshot {
 public:
  Snapshot(std::shared_ptr<const GraphStore> store, const QueryOptions& options);

  const QueryEngine& engine() const noexcept { return engine_; }
  const std::string& main_all_body() const noexcept { return main_all_; }
  const std::string& map_body() const noexcept { return map_; }
  const std::string& keyword_overview_body() const noexcept { return keyword_overview_; }
  /// Serialized /main/all record of a dataset.
  const std::string& record(const NodeId& id) const { return records_.at(id); }
  /// POST /filter body; equal to dumping {"filter": .., "payloads": ..}
  /// built with the wire helpers, but assembled from per-dataset fragments.
  std::string filter_body(const FilterResult& result, const VisualizationPayloads& payloads) const;

 private:
  struct Fragments {
    std::string id;     // quoted dataset id
    std::string row;    // list row
    std::string point;  // map point, empty when unlocated
  };

  QueryEngine engine_;
  std::unordered_map<NodeId, std::string, NodeIdHash> records_;
  std::unordered_map<NodeId, Fragments, NodeIdHash> fragments_;
  std::string main_all_;
  std::string map_;
  std::string keyword_overview_;
};

/// Stateless JSON API over a frozen graph: /main/all, /keyword, /time,
/// /abstract, /map and POST /filter. Routes answer 503 until a graph is
/// installed; installing a new graph swaps it atomically between requests.
class SearchService {
 public:
  explicit SearchService(ServiceConfig config);
  ~SearchService();

  void install(std::shared_ptr<const GraphStore> frozen_store);
  /// Loads and freezes a dump, then installs it.
  void load_graph(const std::filesystem::path& path);
  bool ready() const;

  ApiResponse handle(const ApiRequest& request) const;

  /// Binds and serves until stop(). Returns false if the port cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  std::shared_ptr<const Snapshot> snapshot() const;
  void register_routes();
  std::string allowed_origin(const std::string& origin) const;

  ServiceConfig config_;
  QueryOptions query_options_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace vesa
