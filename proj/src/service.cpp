#include "vesa/service.hpp"

#include <httplib.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "vesa/graph_dump.hpp"
#include "vesa/text.hpp"
#include "vesa/wire.hpp"

namespace vesa {

ServiceConfig ServiceConfig::from_json(const Attrs& config, const std::filesystem::path& base_dir) {
  if (!config.is_object()) throw Error(ErrorCode::ConfigError, "service config must be a JSON object");
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  ServiceConfig c;
  try {
    auto port = config.value("port", int64_t{8080});
    if (port < 1 || port > 65535) throw Error(ErrorCode::ConfigError, "port must be in [1, 65535]");
    c.port = static_cast<int>(port);
    if (config.contains("graph")) c.graph = resolve(config["graph"].get<std::string>());
    auto k = config.value("cloud_k", int64_t{100});
    if (k < 1) throw Error(ErrorCode::ConfigError, "cloud_k must be >= 1");
    c.cloud_k = static_cast<size_t>(k);
    if (config.contains("tokenizer")) c.tokenizer = resolve(config["tokenizer"].get<std::string>());
    if (config.contains("sources")) c.sources = resolve(config["sources"].get<std::string>());
    c.cors_origins = config.value("cors_origins", std::vector<std::string>{});
    c.bbox_intersection = config.value("bbox_intersection", false);
  } catch (const Attrs::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("service config: ") + e.what());
  }
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read service config " + path.string());
  Attrs config = Attrs::parse(f, nullptr, false);
  if (config.is_discarded()) throw Error(ErrorCode::ConfigError, "service config is not valid JSON: " + path.string());
  return from_json(config, path.parent_path());
}

void ServiceConfig::apply_environment() {
  const char* env = std::getenv("VESA_PORT");
  if (!env || !*env) return;
  char* end = nullptr;
  long port = std::strtol(env, &end, 10);
  if (*end != '\0' || port < 1 || port > 65535) {
    throw Error(ErrorCode::ConfigError, std::string("VESA_PORT is not a valid port: ") + env);
  }
  this->port = static_cast<int>(port);
}

void ServiceConfig::validate() const {
  if (port < 1 || port > 65535) throw Error(ErrorCode::ConfigError, "port must be in [1, 65535]");
  if (cloud_k < 1) throw Error(ErrorCode::ConfigError, "cloud_k must be >= 1");
  std::error_code ec;
  if (graph.empty() || !std::filesystem::is_regular_file(graph, ec)) {
    throw Error(ErrorCode::IoError, "graph dump not found: " + graph.string());
  }
  if (tokenizer && !std::filesystem::exists(*tokenizer, ec)) {
    throw Error(ErrorCode::ConfigError, "tokenizer config not found: " + tokenizer->string());
  }
  if (sources && !std::filesystem::exists(*sources, ec)) {
    throw Error(ErrorCode::ConfigError, "sources config not found: " + sources->string());
  }
}

QueryOptions ServiceConfig::query_options() const {
  QueryOptions q;
  q.cloud_k = cloud_k;
  q.bbox_intersection = bbox_intersection;
  if (tokenizer) q.tokenizer = TokenizerConfig::load(*tokenizer);
  return q;
}

namespace {

std::string wrap_result(const std::vector<const std::string*>& records) {
  size_t size = 16;
  for (const auto* r : records) size += r->size() + 1;
  std::string body;
  body.reserve(size);
  body += "{\"result\":[";
  for (size_t i = 0; i < records.size(); ++i) {
    if (i) body += ',';
    body += *records[i];
  }
  body += "]}";
  return body;
}

ApiResponse json_response(int status, const Attrs& body) { return {status, body.dump()}; }

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
  return json_response(status, {{"error", code}, {"message", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKeyword:
    case ErrorCode::UnknownAuthor:
    case ErrorCode::UnknownDataset:
    case ErrorCode::MissingNode:
      return 404;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidNodeId:
    case ErrorCode::ParseError:
      return 400;
    default:
      return 500;
  }
}

std::optional<std::string> param(const ApiRequest& req, const std::string& name) {
  auto it = req.params.find(name);
  if (it == req.params.end()) return std::nullopt;
  return it->second;
}

}  // namespace

Snapshot::Snapshot(std::shared_ptr<const GraphStore> store, const QueryOptions& options)
    : engine_(std::move(store), options) {
  const GraphStore& g = engine_.store();
  std::vector<const std::string*> all;
  for (const auto& id : g.dataset_ids()) {
    auto [it, _] = records_.emplace(id, wire::dataset_record(g.node(id)).dump());
    all.push_back(&it->second);
  }
  main_all_ = wrap_result(all);

  FilterResult everything = engine_.evaluate(SelectionState{});
  auto points = engine_.map_points(everything);
  map_ = Attrs{{"result", wire::to_json(points)}}.dump();

  for (const auto& id : everything.dataset_ids) fragments_[id].id = Attrs(id.str()).dump();
  for (const auto& p : points) fragments_.at(p.dataset_id).point = wire::to_json(p).dump();
  ListPayload list = engine_.dataset_list(everything);
  for (const auto& row : list.rows) {
    ListPayload single;
    single.rows.push_back(row);
    fragments_.at(row.dataset_id).row = wire::to_json(single)["rows"][0].dump();
  }

  Attrs entries = Attrs::array();
  if (!engine_.scores().empty()) {
    for (const auto& s : select_cloud_keywords(engine_.scores(), engine_.options().cloud_k)) {
      entries.push_back(wire::keyword_entry(s));
    }
  }
  keyword_overview_ = Attrs{{"result", entries}}.dump();
}

std::string Snapshot::filter_body(const FilterResult& result, const VisualizationPayloads& p) const {
  std::string out;
  out.reserve(256 + result.dataset_ids.size() * 160 + p.chord.authors.size() * p.chord.authors.size() * 2);
  auto join = [&out](const auto& items, auto&& write) {
    out += '[';
    bool first = true;
    for (const auto& item : items) {
      if (!first) out += ',';
      first = false;
      write(item);
    }
    out += ']';
  };
  auto number = [&out](size_t n) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n);
    out.append(buf, end);
  };

  out += "{\"filter\":{\"dataset_ids\":";
  join(result.dataset_ids, [&](const NodeId& id) { out += fragments_.at(id).id; });
  out += ",\"per_source\":";
  out += Attrs(result.per_source).dump();
  out += ",\"total\":";
  number(result.total);

  out += "},\"payloads\":{\"chord\":{\"authors\":[";
  for (size_t i = 0; i < p.chord.authors.size(); ++i) {
    if (i) out += ',';
    out += "{\"id\":";
    out += Attrs(p.chord.authors[i].str()).dump();
    out += ",\"name\":";
    out += Attrs(p.chord.names[i]).dump();
    out += '}';
  }
  out += "],\"matrix\":";
  join(p.chord.matrix, [&](const std::vector<size_t>& row) { join(row, number); });
  out += "},\"cloud\":";
  out += wire::to_json(p.cloud).dump();
  out += ",\"histogram\":";
  out += wire::to_json(p.histogram).dump();
  out += ",\"list_rows\":{";
  if (p.list.abstract_id) {
    out += "\"abstract\":";
    out += Attrs{{"id", p.list.abstract_id->str()}, {"abstract", *p.list.abstract}}.dump();
    out += ',';
  }
  out += "\"rows\":";
  join(p.list.rows, [&](const ListRow& row) { out += fragments_.at(row.dataset_id).row; });
  out += ",\"total\":";
  number(p.list.total);
  out += "},\"map_points\":";
  join(p.map_points, [&](const MapPoint& point) { out += fragments_.at(point.dataset_id).point; });
  out += "}}";
  return out;
}

SearchService::SearchService(ServiceConfig config)
    : config_(std::move(config)), query_options_(config_.query_options()) {}

SearchService::~SearchService() { stop(); }

void SearchService::install(std::shared_ptr<const GraphStore> frozen_store) {
  auto next = std::make_shared<const Snapshot>(std::move(frozen_store), query_options_);
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(next);
}

void SearchService::load_graph(const std::filesystem::path& path) {
  auto store = std::make_shared<GraphStore>(load(path));
  store->freeze();
  install(std::move(store));
}

bool SearchService::ready() const { return snapshot() != nullptr; }

std::shared_ptr<const Snapshot> SearchService::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

ApiResponse SearchService::handle(const ApiRequest& req) const {
  static const std::map<std::string, std::string> kRoutes = {
      {"/main/all", "GET"}, {"/keyword", "GET"}, {"/time", "GET"},
      {"/abstract", "GET"}, {"/map", "GET"},     {"/filter", "POST"}};
  auto route = kRoutes.find(req.path);
  if (route == kRoutes.end()) return error_response(404, "NotFound", "no route " + req.path);
  if (route->second != req.method) return error_response(405, "MethodNotAllowed", req.method + " " + req.path);

  auto snap = snapshot();
  if (!snap) return error_response(503, "Unavailable", "graph not loaded");
  const QueryEngine& engine = snap->engine();
  const GraphStore& store = engine.store();

  try {
    if (req.path == "/main/all") return {200, snap->main_all_body()};
    if (req.path == "/map") return {200, snap->map_body()};

    if (req.path == "/keyword") {
      auto term_param = param(req, "term");
      if (!term_param) return {200, snap->keyword_overview_body()};
      std::string term = normalize_term(*term_param);
      if (term.empty()) return error_response(400, "InvalidArgument", "term must not be empty");
      auto keyword = store.keyword_node(term);
      if (!keyword) return error_response(404, "UnknownKeyword", "unknown keyword '" + *term_param + "'");
      Attrs body;
      auto score = engine.scores().find(term);
      body["keyword"] = term;
      body["score"] = score == engine.scores().end() ? 0.0 : score->second.score;
      body["document_frequency"] = score == engine.scores().end() ? 0 : score->second.document_frequency;
      body["dataset_ids"] = Attrs::array();
      for (const auto& holder : store.adjacent(*keyword, EdgeKind::HasKeyword, Direction::In)) {
        if (is_dataset_kind(holder.kind())) body["dataset_ids"].push_back(holder.str());
      }
      body["related"] = Attrs::array();
      for (const auto& r : related_keywords(store, term)) body["related"].push_back(wire::related_entry(r));
      return json_response(200, body);
    }

    if (req.path == "/time") {
      auto start_text = param(req, "start");
      auto end_text = param(req, "end");
      if (!start_text || !end_text) return error_response(400, "InvalidArgument", "start and end are required");
      auto start = parse_timestamp(*start_text);
      auto end = parse_timestamp(*end_text);
      if (!start) return error_response(400, "InvalidArgument", "start is not RFC 3339: " + *start_text);
      if (!end) return error_response(400, "InvalidArgument", "end is not RFC 3339: " + *end_text);
      if (*start > *end) return error_response(400, "InvalidArgument", "start is after end");
      std::vector<const std::string*> records;
      for (const auto& id : store.datasets_overlapping(*start, *end)) records.push_back(&snap->record(id));
      return {200, wrap_result(records)};
    }

    if (req.path == "/abstract") {
      auto id_text = param(req, "id");
      if (!id_text) return error_response(400, "InvalidArgument", "id is required");
      auto id = NodeId::try_parse(*id_text);
      const GraphNode* node = id ? store.find_node(*id) : nullptr;
      if (!node || !is_dataset_kind(node->kind)) {
        return error_response(404, "UnknownDataset", "unknown dataset '" + *id_text + "'");
      }
      return json_response(200, {{"id", id->str()}, {"abstract", node->attrs.value("abstract", "")}});
    }

    // POST /filter
    Attrs body = req.body.empty() ? Attrs::object() : Attrs::parse(req.body, nullptr, false);
    if (body.is_discarded()) return error_response(400, "InvalidArgument", "body is not valid JSON");
    SelectionState selection = SelectionState::from_json(body);
    ViewOptions view = ViewOptions::from_json(body);
    FilterResult result = engine.evaluate(selection);
    VisualizationPayloads payloads = engine.payloads(result, selection, view);
    return {200, snap->filter_body(result, payloads)};
  } catch (const Error& e) {
    return error_response(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

std::string SearchService::allowed_origin(const std::string& origin) const {
  for (const auto& allowed : config_.cors_origins) {
    if (allowed == "*") return "*";
    if (!origin.empty() && allowed == origin) return origin;
  }
  return {};
}

void SearchService::register_routes() {
  server_ = std::make_unique<httplib::Server>();
  server_->set_tcp_nodelay(true);
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api;
    api.method = req.method;
    api.path = req.path;
    for (const auto& [k, v] : req.params) api.params.emplace(k, v);
    api.body = req.body;
    ApiResponse out = handle(api);
    res.status = out.status;
    if (auto origin = allowed_origin(req.get_header_value("Origin")); !origin.empty()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
    res.set_content(out.body, out.content_type);
  };
  for (const char* path : {"/main/all", "/keyword", "/time", "/abstract", "/map", "/filter"}) {
    server_->Get(path, forward);
    server_->Post(path, forward);
  }
  server_->Options(".*", [this](const httplib::Request& req, httplib::Response& res) {
    if (auto origin = allowed_origin(req.get_header_value("Origin")); !origin.empty()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }
    res.status = 204;
  });
}

bool SearchService::listen(const std::string& host, int port) {
  register_routes();
  return server_->listen(host, port);
}

int SearchService::bind_any_port(const std::string& host) {
  register_routes();
  return server_->bind_to_any_port(host);
}

bool SearchService::listen_after_bind() { return server_->listen_after_bind(); }

void SearchService::stop() {
  if (server_) server_->stop();
}

void SearchService::wait_until_ready() const {
  while (!server_ || !server_->is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
}

}  // namespace vesa
