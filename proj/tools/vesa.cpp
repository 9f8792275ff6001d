// vesa: build, harvest and serve the dataset discovery graph.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
// 3 too many rejected records, 4 I/O error.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "vesa/build.hpp"
#include "vesa/graph_dump.hpp"
#include "vesa/harvest.hpp"
#include "vesa/service.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitIo = 4;

int exit_code_for(vesa::ErrorCode code) {
  switch (code) {
    case vesa::ErrorCode::ConfigError:
    case vesa::ErrorCode::InvalidArgument:
      return kExitConfig;
    case vesa::ErrorCode::ParseError:
    case vesa::ErrorCode::FieldError:
      return kExitParse;
    case vesa::ErrorCode::IoError:
    case vesa::ErrorCode::CorruptDump:
    case vesa::ErrorCode::NetworkError:
    case vesa::ErrorCode::RemoteFormatError:
      return kExitIo;
    default:
      return kExitFailure;
  }
}

vesa::SearchService* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int run_build(const std::string& sources_path, const std::string& fixtures, const std::string& out,
              const std::string& tokenizer_path, double max_reject_fraction) {
  vesa::BuildOptions options;
  options.max_reject_fraction = max_reject_fraction;
  if (!tokenizer_path.empty()) options.tokenizer = vesa::TokenizerConfig::load(tokenizer_path);
  auto sources = vesa::load_sources(sources_path);
  auto result = vesa::build_graph(sources, fixtures, options);
  vesa::dump(result.store, out);
  std::cout << result.report.to_json().dump(2) << '\n';
  std::cerr << "wrote " << result.store.node_count() << " nodes, " << result.store.edge_count() << " edges to "
            << out << '\n';
  return 0;
}

int run_harvest(const std::string& sources_path, const std::string& cache, bool offline, size_t page_size,
                size_t parallelism) {
  auto sources = vesa::load_sources(sources_path);
  for (const auto& source : sources) {
    std::string endpoint = source.endpoint;
    if (endpoint.empty() && source.kind == vesa::SourceKind::Stac) endpoint = vesa::kDefaultStacEndpoint;
    if (endpoint.empty() && !offline) {
      std::cerr << source.name << ": no endpoint configured, skipped\n";
      continue;
    }
    vesa::HarvestOptions options;
    options.cache_dir = std::filesystem::path(cache) / source.name;
    options.offline = offline;
    options.page_size = page_size;
    options.parallelism = parallelism;
    auto docs = vesa::harvest_remote(endpoint, source.kind, source.limit, options);
    std::cout << source.name << ": " << docs.size() << " documents in " << options.cache_dir->string() << '\n';
  }
  return 0;
}

int run_serve(const std::string& graph, const std::string& config_path, const std::string& host) {
  vesa::ServiceConfig config;
  if (!config_path.empty()) config = vesa::ServiceConfig::load(config_path);
  if (!graph.empty()) config.graph = graph;
  config.apply_environment();
  config.validate();

  vesa::SearchService service(config);
  service.load_graph(config.graph);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "serving " << config.graph.string() << " on " << host << ":" << config.port << '\n';
  if (!service.listen(host, config.port)) {
    std::cerr << "error: cannot listen on " << host << ":" << config.port << '\n';
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph backed dataset discovery engine"};
  app.require_subcommand(1);

  std::string sources, fixtures, out, tokenizer, cache, graph, config, host = "0.0.0.0";
  double max_reject_fraction = 0.25;
  bool offline = false;
  size_t page_size = 100, parallelism = 4;

  auto* build = app.add_subcommand("build", "Parse fixtures into a graph dump");
  build->add_option("--sources", sources, "Sources config (JSON)")->required();
  build->add_option("--fixtures", fixtures, "Directory with one sub-directory per source")->required();
  build->add_option("--out", out, "Graph dump to write")->required();
  build->add_option("--tokenizer", tokenizer, "Tokenizer config (JSON)");
  build->add_option("--max-reject-fraction", max_reject_fraction, "Allowed fraction of rejected records")
      ->check(CLI::Range(0.0, 1.0));

  auto* harvest = app.add_subcommand("harvest", "Fetch remote metadata into a cache directory");
  harvest->add_option("--sources", sources, "Sources config (JSON)")->required();
  harvest->add_option("--cache", cache, "Cache directory")->required();
  harvest->add_flag("--offline", offline, "Read the cache instead of the network");
  harvest->add_option("--page-size", page_size, "Documents per request")->check(CLI::PositiveNumber);
  harvest->add_option("--parallelism", parallelism, "Concurrent page fetches")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "Serve the search API");
  serve->add_option("--graph", graph, "Graph dump");
  serve->add_option("--config", config, "Service config (JSON)");
  serve->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*build) return run_build(sources, fixtures, out, tokenizer, max_reject_fraction);
    if (*harvest) return run_harvest(sources, cache, offline, page_size, parallelism);
    if (*serve) return run_serve(graph, config, host);
  } catch (const vesa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
