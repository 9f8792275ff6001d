#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vesa/graph.hpp"

namespace vesa {

/// The shipped 50-word English stopword list.
const std::vector<std::string>& default_stopwords();

struct TokenizerConfig {
  std::set<std::string, std::less<>> stopwords;
  size_t min_token_length = 3;  // in code points
  bool lowercase = true;

  static TokenizerConfig defaults();
  /// {stopwords?: [..], min_token_length?: n, lowercase?: bool}; missing
  /// fields keep their defaults. Stopwords are normalized like tokens.
  static TokenizerConfig from_json(const Attrs& config);
  static TokenizerConfig load(const std::filesystem::path& path);
};

/// Splits free text on runs of non-alphanumeric characters (UTF-8 sequences
/// count as alphanumeric), lowercases when configured, and drops stopwords
/// and short tokens.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config);

/// Curated keywords are not split: each is normalized whole.
std::vector<std::string> tokenize_curated(std::span<const std::string> keywords, const TokenizerConfig& config);

/// Token stream of one dataset node: title and abstract tokens followed by
/// its curated keywords.
std::vector<std::string> document_terms(const GraphNode& dataset, const TokenizerConfig& config);

struct KeywordScore {
  std::string term;
  double score = 0;                // max over documents of tf * ln(N / df)
  size_t document_frequency = 0;   // == dataset_ids.size()
  std::vector<NodeId> dataset_ids; // sorted

  friend bool operator==(const KeywordScore&, const KeywordScore&) = default;
};

using ScoreTable = std::map<std::string, KeywordScore, std::less<>>;

/// TF-IDF over the dataset nodes (Dataset and STACCollection) of the store.
/// Throws Error{EmptyStore} when there are none.
ScoreTable compute_tfidf(const GraphStore& store, const TokenizerConfig& config);

/// Top-k by score; ties by higher document frequency, then term.
/// Throws Error{InvalidArgument} for k == 0.
std::vector<KeywordScore> select_cloud_keywords(const ScoreTable& scores, size_t k);

struct SharedKeyword {
  std::string term;
  std::vector<std::string> corpora;  // sorted corpus names, size >= 2
};

/// Keyword nodes reached by hasKeyword edges from datasets of at least two
/// distinct corpora, sorted by term.
std::vector<SharedKeyword> link_common_keywords(const GraphStore& store);

/// For every STACCollection without direct keywords, links it to the
/// keywords of each publication that mentions one of its missions
/// (provenance "mediated") and adds the mentionsMission edge. Returns the
/// number of mediated hasKeyword edges added.
size_t mediate_stac_keywords(GraphStore& store);

/// Publications that justify a mediated edge collection -> keyword: they
/// mention the collection's mission and carry the keyword.
std::vector<NodeId> mediation_witnesses(const GraphStore& store, const NodeId& collection, const NodeId& keyword);

struct RelatedKeyword {
  std::string term;
  size_t co_count = 0;

  friend bool operator==(const RelatedKeyword&, const RelatedKeyword&) = default;
};

/// Keywords sharing a dataset with `term`, ranked by co-occurrence count
/// then term. Throws Error{UnknownKeyword}.
std::vector<RelatedKeyword> related_keywords(const GraphStore& store, std::string_view term);

struct ExtractionReport {
  size_t keywords_added = 0;
  size_t edges_added = 0;
};

/// Materializes every scored term as a Keyword node and links the datasets
/// containing it (provenance "extracted"), so terms found in titles and
/// abstracts are filterable like curated ones. Existing edges are kept.
ExtractionReport attach_extracted_keywords(GraphStore& store, const ScoreTable& scores);

}  // namespace vesa
