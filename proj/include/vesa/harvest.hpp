#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vesa/graph.hpp"
#include "vesa/ingestion.hpp"

namespace vesa {

inline constexpr const char* kDefaultStacEndpoint = "https://geoservice.dlr.de/eoc/ogc/stac/v1/collections/";

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};  // doubled after each failure
};

struct HarvestOptions {
  /// Directory receiving one JSON file per fetched document.
  std::optional<std::filesystem::path> cache_dir;
  /// Serve documents from cache_dir without touching the network.
  bool offline = false;
  size_t page_size = 100;
  /// Pages fetched concurrently for offset-paged sources.
  size_t parallelism = 4;
  RetryPolicy retry;
  std::chrono::seconds timeout{30};
};

/// Fetches at most `limit` raw documents. STAC endpoints are paged by
/// following `links[rel=next]`; PANGAEA-style and publication endpoints by
/// `from`/`size` offsets, accepting {"hits":{"hits":[{"_source":..}]}},
/// {"result":[..]} or a bare array. Throws Error{NetworkError} once the
/// retry policy is exhausted and Error{RemoteFormatError} for unexpected
/// bodies.
std::vector<Attrs> harvest_remote(const std::string& endpoint, SourceKind kind, size_t limit,
                                  const HarvestOptions& options = {});

/// Replaces the *.json files of `dir` with the given documents, named by
/// position ("000000.json", ...).
void write_cache(const std::filesystem::path& dir, const std::vector<Attrs>& documents);
std::vector<Attrs> read_cache(const std::filesystem::path& dir);

}  // namespace vesa
