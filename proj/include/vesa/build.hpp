#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vesa/graph.hpp"
#include "vesa/ingestion.hpp"
#include "vesa/semantics.hpp"

namespace vesa {

struct BuildOptions {
  TokenizerConfig tokenizer = TokenizerConfig::defaults();
  /// Build fails with ParseError when more than this fraction of records is rejected.
  double max_reject_fraction = 0.25;
};

struct BuildReport {
  IngestReport ingest;
  size_t records_seen = 0;
  size_t mediated_keyword_edges = 0;
  size_t mission_edges = 0;
  ExtractionReport extracted;
  std::vector<SharedKeyword> shared_keywords;

  size_t nodes_added() const { return ingest.nodes_added() + extracted.keywords_added; }
  size_t edges_added() const {
    return ingest.edges_added + mediated_keyword_edges + mission_edges + extracted.edges_added;
  }
  Attrs to_json() const;
};

struct BuildResult {
  GraphStore store;  // frozen
  BuildReport report;
};

using SourceDocuments = std::pair<SourceConfig, std::vector<std::pair<std::string, Attrs>>>;

/// ingest every dataset source (in order), then publications, then
/// mediate_stac_keywords -> compute_tfidf -> attach_extracted_keywords -> freeze.
BuildResult build_graph(const std::vector<SourceDocuments>& sources, const BuildOptions& options = {});

/// Reads `<fixtures>/<source name>/*.json` for each configured source.
BuildResult build_graph(const std::vector<SourceConfig>& sources, const std::filesystem::path& fixtures,
                        const BuildOptions& options = {});

}  // namespace vesa
