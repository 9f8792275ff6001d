#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vesa/graph.hpp"
#include "vesa/time.hpp"

namespace vesa {

inline constexpr const char* kPangaeaOrganization = "PANGAEA";
inline constexpr const char* kStacOrganization = "DLR_EO";

/// A parsed instant plus the source spelling, so responses can echo the
/// timestamp exactly as it was harvested.
struct Timestamp {
  Instant instant;
  std::string text;

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

struct TemporalCoverage {
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;

  friend bool operator==(const TemporalCoverage&, const TemporalCoverage&) = default;
};

struct SpatialExtent {
  double west_bound_longitude = 0;
  double east_bound_longitude = 0;
  double north_bound_latitude = 0;
  double south_bound_latitude = 0;
  std::optional<double> mean_latitude;
  std::optional<double> mean_longitude;

  /// Source mean when provided, else the bounding-box midpoint.
  double display_latitude() const;
  /// Source mean when provided, else the shortest-arc midpoint of the
  /// longitude bounds (west > east means the box crosses the antimeridian).
  double display_longitude() const;

  friend bool operator==(const SpatialExtent&, const SpatialExtent&) = default;
};

struct AuthorRef {
  std::string name;
  std::string organization;

  friend bool operator==(const AuthorRef&, const AuthorRef&) = default;
};

struct NormalizedDataset {
  NodeKind kind = NodeKind::Dataset;  // Dataset or STACCollection
  std::string source_key;
  std::string organization;
  std::string title;
  std::string abstract;
  std::string doi;
  std::optional<Timestamp> publication_date;
  std::optional<TemporalCoverage> temporal_coverage;
  std::optional<SpatialExtent> location;
  std::vector<AuthorRef> authors;
  std::vector<std::string> keywords;  // normalized curated terms
  std::vector<std::string> missions;  // normalized mission identifiers (STAC only)
  Attrs extra = Attrs::object();      // unrecognised source fields, verbatim

  friend bool operator==(const NormalizedDataset&, const NormalizedDataset&) = default;
};

struct PublicationRecord {
  std::string source_key;
  std::string title;
  std::string doi;
  std::vector<AuthorRef> authors;
  std::vector<std::string> keywords;
  std::vector<std::string> mission_mentions;
  std::vector<std::string> related_dataset_keys;

  friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

struct Rejection {
  std::string source_key;
  std::string reason;
};

struct IngestReport {
  size_t corpora_added = 0;
  size_t datasets_added = 0;
  size_t collections_added = 0;
  size_t publications_added = 0;
  size_t authors_added = 0;
  size_t keywords_added = 0;
  size_t edges_added = 0;
  size_t records_rejected = 0;
  std::vector<Rejection> rejections;

  size_t nodes_added() const {
    return corpora_added + datasets_added + collections_added + publications_added + authors_added +
           keywords_added;
  }
  IngestReport& operator+=(const IngestReport& other);
};

/// Parser outcomes for one source, rejected records included.
struct IngestBatch {
  std::vector<NormalizedDataset> datasets;
  std::vector<PublicationRecord> publications;
  std::vector<Rejection> rejections;
};

// Parsers throw Error{ParseError} for documents of the wrong shape and
// Error{FieldError} for values that violate an invariant (start > end,
// latitude out of range, ...).
NormalizedDataset parse_pangaea_record(const Attrs& raw);
NormalizedDataset parse_stac_collection(const Attrs& raw, const std::string& organization = kStacOrganization);
PublicationRecord parse_publication_record(const Attrs& raw);

/// Node attributes for a dataset; dataset_from_node is the inverse.
Attrs dataset_attrs(const NormalizedDataset& dataset);
NormalizedDataset dataset_from_node(const GraphNode& node);

/// Adds one Corpus node named `corpus_name` (skipped when empty, which is
/// only allowed for publication-only batches), a node per record, and the
/// Author/Keyword nodes and edges they imply. Records whose source key is
/// already present are skipped, so re-ingesting a batch is a no-op.
/// Throws BuildPhaseError on a frozen store.
IngestReport ingest(GraphStore& store, const IngestBatch& batch, const std::string& corpus_name);

enum class SourceKind { Pangaea, Stac, Publication };

std::string_view to_string(SourceKind kind) noexcept;

struct SourceConfig {
  std::string name;
  SourceKind kind = SourceKind::Pangaea;
  std::string endpoint;
  std::string organization;
  size_t limit = 100;
};

/// Reads a JSON array of {name, kind, endpoint, organization, limit}.
/// Throws Error{ConfigError} or Error{IoError}.
std::vector<SourceConfig> load_sources(const std::filesystem::path& path);
std::vector<SourceConfig> parse_sources(const Attrs& config);

/// Parses raw documents of one source; failures become rejections.
IngestBatch parse_documents(const SourceConfig& source, const std::vector<std::pair<std::string, Attrs>>& docs);

/// Reads every *.json file (sorted by name) of `dir`. Unparsable files are
/// returned as discarded values and rejected by parse_documents.
std::vector<std::pair<std::string, Attrs>> read_document_dir(const std::filesystem::path& dir);

}  // namespace vesa
