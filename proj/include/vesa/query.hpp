#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vesa/graph.hpp"
#include "vesa/semantics.hpp"
#include "vesa/time.hpp"

namespace vesa {

struct TimeRange {
  Instant start;
  Instant end;

  friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

/// Degrees. west > east denotes a box crossing the antimeridian.
struct SpatialBox {
  double west = -180;
  double south = -90;
  double east = 180;
  double north = 90;

  friend bool operator==(const SpatialBox&, const SpatialBox&) = default;
};

/// A cross-filter: keywords are conjunctive, authors and sources are
/// disjunctive within their lists, and all dimensions combine by AND. The
/// empty selection is the overview of the whole collection.
struct SelectionState {
  std::vector<std::string> keywords;
  std::optional<TimeRange> time_range;
  std::optional<SpatialBox> spatial_box;
  std::vector<NodeId> authors;
  std::vector<std::string> sources;

  bool empty() const {
    return keywords.empty() && !time_range && !spatial_box && authors.empty() && sources.empty();
  }
  /// Throws Error{InvalidArgument} for reversed time ranges or invalid
  /// latitude/longitude bounds.
  void validate() const;

  /// Parses the POST /filter body shape; throws Error{InvalidArgument}.
  static SelectionState from_json(const Attrs& body);
  Attrs to_json() const;

  friend bool operator==(const SelectionState&, const SelectionState&) = default;
};

struct FilterResult {
  std::vector<NodeId> dataset_ids;  // sorted
  size_t total = 0;
  std::map<std::string, size_t> per_source;  // corpus name -> count

  friend bool operator==(const FilterResult&, const FilterResult&) = default;
};

enum class Dimension { Keywords, Time, Space, Authors, Sources };
inline constexpr std::array<Dimension, 5> kDefaultDimensionOrder = {
    Dimension::Keywords, Dimension::Authors, Dimension::Sources, Dimension::Time, Dimension::Space};

enum class HistogramBin { Day, Month, Year };
std::optional<HistogramBin> histogram_bin_from_string(std::string_view name) noexcept;
std::string_view to_string(HistogramBin bin) noexcept;

struct HistogramBucket {
  Instant bin_start;
  Instant bin_end;  // exclusive
  size_t count = 0;

  friend bool operator==(const HistogramBucket&, const HistogramBucket&) = default;
};

struct Histogram {
  HistogramBin bin = HistogramBin::Year;
  std::vector<HistogramBucket> buckets;
  size_t undated = 0;  // filtered datasets without temporal coverage

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct MapPoint {
  NodeId dataset_id;
  double lat = 0;
  double lon = 0;
  std::string source;

  friend bool operator==(const MapPoint&, const MapPoint&) = default;
};

struct ChordPayload {
  std::vector<NodeId> authors;        // sorted by display name, then id
  std::vector<std::string> names;     // display names, parallel to authors
  std::vector<std::vector<size_t>> matrix;

  friend bool operator==(const ChordPayload&, const ChordPayload&) = default;
};

struct CloudEntry {
  std::string term;
  size_t weight = 0;
  bool related = false;  // shown because it co-occurs with the selected keywords

  friend bool operator==(const CloudEntry&, const CloudEntry&) = default;
};

struct ListRow {
  NodeId dataset_id;
  std::string title;
  std::vector<std::string> authors;
  std::string doi;
  std::string source;

  friend bool operator==(const ListRow&, const ListRow&) = default;
};

struct ListPayload {
  std::vector<ListRow> rows;
  size_t total = 0;
  std::optional<NodeId> abstract_id;
  std::optional<std::string> abstract;
};

struct VisualizationPayloads {
  std::vector<CloudEntry> cloud;
  std::vector<MapPoint> map_points;
  Histogram histogram;
  ChordPayload chord;
  ListPayload list;
};

struct QueryOptions {
  size_t cloud_k = 100;
  /// Spatial filter against the dataset bounding box instead of its display point.
  bool bbox_intersection = false;
  TokenizerConfig tokenizer = TokenizerConfig::defaults();
};

/// Extra knobs carried by a POST /filter body next to the selection.
struct ViewOptions {
  HistogramBin bin = HistogramBin::Year;
  std::optional<NodeId> abstract_for;
  size_t list_offset = 0;
  std::optional<size_t> list_limit;

  static ViewOptions from_json(const Attrs& body);
};

/// Read-only query surface over a frozen store. All methods are const and
/// safe to call concurrently.
class QueryEngine {
 public:
  /// Throws Error{BuildPhaseError} unless the store is frozen.
  QueryEngine(std::shared_ptr<const GraphStore> store, QueryOptions options = {});

  const GraphStore& store() const noexcept { return *store_; }
  const QueryOptions& options() const noexcept { return options_; }
  /// TF-IDF table; empty when the store holds no datasets.
  const ScoreTable& scores() const noexcept { return scores_; }
  size_t dataset_count() const noexcept { return datasets_.size(); }

  /// Throws UnknownKeyword / UnknownAuthor / InvalidArgument.
  FilterResult evaluate(const SelectionState& selection) const;
  /// Applies the dimensions in the given order (a permutation of all five).
  FilterResult evaluate(const SelectionState& selection, std::span<const Dimension, 5> order) const;

  /// Global axis over all dated datasets of the store; counts over `result`.
  Histogram temporal_histogram(const FilterResult& result, HistogramBin bin) const;
  std::vector<MapPoint> map_points(const FilterResult& result) const;
  ChordPayload coauthor_matrix(const FilterResult& result) const;
  std::vector<CloudEntry> keyword_cloud(const FilterResult& result, const SelectionState& selection,
                                        size_t k) const;
  /// Throws UnknownDataset when `abstract_for` is not a dataset.
  ListPayload dataset_list(const FilterResult& result, std::optional<NodeId> abstract_for = std::nullopt,
                           size_t offset = 0, std::optional<size_t> limit = std::nullopt) const;

  VisualizationPayloads payloads(const FilterResult& result, const SelectionState& selection,
                                 const ViewOptions& view = {}) const;

 private:
  struct DatasetEntry {
    NodeId id;
    std::string corpus;
    std::string organization;
    std::string title;
    std::string doi;
    std::vector<std::string> author_names;
    std::vector<uint32_t> authors;   // indexes into authors_
    std::vector<uint32_t> keywords;  // indexes into keyword_terms_
    std::optional<std::pair<Instant, Instant>> coverage;
    bool located = false;
    double lat = 0;
    double lon = 0;
    SpatialBox bbox;
  };

  using Candidates = std::vector<uint32_t>;

  void apply(Dimension dim, const SelectionState& selection, const std::vector<uint32_t>& keyword_ids,
             const std::vector<uint32_t>& author_ids, Candidates& candidates) const;
  bool matches_space(const DatasetEntry& d, const SpatialBox& box) const;
  std::vector<std::vector<uint32_t>> cloud_members(const std::vector<KeywordScore>& cloud) const;
  std::vector<uint32_t> indexes_of(const FilterResult& result) const;

  std::shared_ptr<const GraphStore> store_;
  QueryOptions options_;
  ScoreTable scores_;
  std::vector<KeywordScore> global_cloud_;  // top cloud_k of scores_
  std::vector<std::vector<uint32_t>> global_cloud_members_;  // dataset indexes per global_cloud_ entry

  std::vector<DatasetEntry> datasets_;  // sorted by id
  std::unordered_map<NodeId, uint32_t, NodeIdHash> dataset_index_;
  std::vector<uint32_t> by_title_;      // dataset indexes sorted by title, then id

  std::vector<NodeId> authors_;
  std::vector<std::string> author_names_;
  std::unordered_map<NodeId, uint32_t, NodeIdHash> author_index_;
  std::vector<std::vector<uint32_t>> author_postings_;

  std::vector<std::string> keyword_terms_;
  std::unordered_map<std::string, uint32_t> keyword_index_;
  std::vector<std::vector<uint32_t>> keyword_postings_;

  std::optional<std::pair<Instant, Instant>> time_axis_;
};

}  // namespace vesa
