#include "vesa/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "vesa/text.hpp"

namespace vesa {

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      "a",    "also", "an",    "and",   "are",  "as",    "at",   "be",   "been",  "but",
      "by",   "can",  "could", "for",   "from", "had",   "has",  "have", "if",    "in",
      "into", "is",   "it",    "its",   "may",  "more",  "not",  "of",   "on",    "or",
      "our",  "over", "such",  "than",  "that", "the",   "their", "then", "there", "these",
      "they", "this", "to",    "was",   "we",   "were",  "which", "will", "with",  "within"};
  return words;
}

TokenizerConfig TokenizerConfig::defaults() {
  TokenizerConfig c;
  c.stopwords.insert(default_stopwords().begin(), default_stopwords().end());
  return c;
}

TokenizerConfig TokenizerConfig::from_json(const Attrs& config) {
  if (!config.is_object()) throw Error(ErrorCode::ConfigError, "tokenizer config must be an object");
  TokenizerConfig c = defaults();
  try {
    c.lowercase = config.value("lowercase", c.lowercase);
    auto min_len = config.value("min_token_length", int64_t{3});
    if (min_len < 1) throw Error(ErrorCode::ConfigError, "min_token_length must be >= 1");
    c.min_token_length = static_cast<size_t>(min_len);
    if (config.contains("stopwords")) {
      c.stopwords.clear();
      for (const auto& w : config["stopwords"]) {
        std::string word = collapse_whitespace(w.get<std::string>());
        if (c.lowercase) word = ascii_lower(word);
        if (!word.empty()) c.stopwords.insert(word);
      }
    }
  } catch (const Attrs::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("tokenizer config: ") + e.what());
  }
  return c;
}

TokenizerConfig TokenizerConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read tokenizer config " + path.string());
  Attrs config = Attrs::parse(f, nullptr, false);
  if (config.is_discarded()) throw Error(ErrorCode::ConfigError, "tokenizer config is not valid JSON");
  return from_json(config);
}

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

size_t code_points(std::string_view s) {
  return static_cast<size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    std::string token(text.substr(start, i - start));
    if (config.lowercase) token = ascii_lower(token);
    if (code_points(token) < config.min_token_length || config.stopwords.count(token)) continue;
    out.push_back(std::move(token));
  }
  return out;
}

std::vector<std::string> tokenize_curated(std::span<const std::string> keywords, const TokenizerConfig& config) {
  std::vector<std::string> out;
  for (const auto& k : keywords) {
    std::string term = collapse_whitespace(k);
    if (config.lowercase) term = ascii_lower(term);
    if (!term.empty()) out.push_back(std::move(term));
  }
  return out;
}

std::vector<std::string> document_terms(const GraphNode& dataset, const TokenizerConfig& config) {
  const Attrs& a = dataset.attrs;
  auto terms = tokenize(a.value("title", ""), config);
  auto abstract_terms = tokenize(a.value("abstract", ""), config);
  terms.insert(terms.end(), abstract_terms.begin(), abstract_terms.end());
  if (auto it = a.find("keywords"); it != a.end() && it->is_array()) {
    auto curated = tokenize_curated(it->get<std::vector<std::string>>(), config);
    terms.insert(terms.end(), curated.begin(), curated.end());
  }
  return terms;
}

ScoreTable compute_tfidf(const GraphStore& store, const TokenizerConfig& config) {
  std::vector<NodeId> docs = store.dataset_ids();
  if (docs.empty()) throw Error(ErrorCode::EmptyStore, "no dataset documents to score");
  const double n_docs = static_cast<double>(docs.size());

  // Per term: the datasets containing it (in id order) and its max raw count.
  struct Accumulator {
    std::vector<NodeId> ids;
    size_t max_tf = 0;
  };
  std::unordered_map<std::string, Accumulator> acc;
  for (const auto& id : docs) {
    std::unordered_map<std::string, size_t> tf;
    for (auto& term : document_terms(store.node(id), config)) ++tf[std::move(term)];
    for (auto& [term, count] : tf) {
      auto& a = acc[term];
      a.ids.push_back(id);
      a.max_tf = std::max(a.max_tf, count);
    }
  }

  ScoreTable table;
  for (auto& [term, a] : acc) {
    KeywordScore s;
    s.term = term;
    s.document_frequency = a.ids.size();
    // tf * idf with idf constant per term, so the max over documents is
    // reached at the largest raw count.
    s.score = static_cast<double>(a.max_tf) * std::log(n_docs / static_cast<double>(s.document_frequency));
    s.dataset_ids = std::move(a.ids);
    table.emplace(term, std::move(s));
  }
  return table;
}

std::vector<KeywordScore> select_cloud_keywords(const ScoreTable& scores, size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "cloud size k must be >= 1");
  std::vector<const KeywordScore*> ranked;
  ranked.reserve(scores.size());
  for (const auto& [_, s] : scores) ranked.push_back(&s);
  auto better = [](const KeywordScore* a, const KeywordScore* b) {
    if (a->score != b->score) return a->score > b->score;
    if (a->document_frequency != b->document_frequency) return a->document_frequency > b->document_frequency;
    return a->term < b->term;
  };
  size_t take = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end(), better);
  std::vector<KeywordScore> out;
  out.reserve(take);
  for (size_t i = 0; i < take; ++i) out.push_back(*ranked[i]);
  return out;
}

std::vector<SharedKeyword> link_common_keywords(const GraphStore& store) {
  std::vector<SharedKeyword> out;
  for (const auto& [term, keyword] : store.indexes().keyword_terms) {
    std::set<std::string> corpora;
    for (const auto& holder : store.adjacent(keyword, EdgeKind::HasKeyword, Direction::In)) {
      if (!is_dataset_kind(holder.kind())) continue;
      for (const auto& corpus : store.adjacent(holder, EdgeKind::BelongsToCorpus, Direction::Out)) {
        corpora.insert(std::string(corpus.key()));
      }
    }
    if (corpora.size() >= 2) out.push_back({term, {corpora.begin(), corpora.end()}});
  }
  return out;
}

namespace {

bool has_direct_keywords(const GraphStore& store, const NodeId& id) {
  for (const auto& k : store.adjacent(id, EdgeKind::HasKeyword, Direction::Out)) {
    const auto* e = store.find_edge(EdgeKind::HasKeyword, id, k);
    if (e && e->attrs.value("provenance", "") == "direct") return true;
  }
  return false;
}

std::vector<std::string> lowered_list(const Attrs& attrs, const char* field) {
  std::vector<std::string> out;
  if (auto it = attrs.find(field); it != attrs.end() && it->is_array()) {
    for (const auto& v : *it) {
      if (v.is_string()) out.push_back(normalize_term(v.get<std::string>()));
    }
  }
  return out;
}

}  // namespace

size_t mediate_stac_keywords(GraphStore& store) {
  if (store.frozen()) throw Error(ErrorCode::BuildPhaseError, "mediate_stac_keywords on a frozen store");

  std::map<std::string, std::vector<NodeId>> publications_by_mission;
  for (const auto& pub : store.nodes_of_kind(NodeKind::Publication)) {
    for (auto& mission : lowered_list(store.node(pub).attrs, "mission_mentions")) {
      publications_by_mission[mission].push_back(pub);
    }
  }

  size_t added = 0;
  for (const auto& collection : store.nodes_of_kind(NodeKind::STACCollection)) {
    if (has_direct_keywords(store, collection)) continue;
    std::set<NodeId> witnesses;
    for (const auto& mission : lowered_list(store.node(collection).attrs, "missions")) {
      auto it = publications_by_mission.find(mission);
      if (it != publications_by_mission.end()) witnesses.insert(it->second.begin(), it->second.end());
    }
    for (const auto& pub : witnesses) {
      store.add_edge(EdgeKind::MentionsMission, pub, collection, {{"provenance", "mediated"}});
      for (const auto& keyword : store.neighbors(pub, EdgeKind::HasKeyword, Direction::Out)) {
        if (store.find_edge(EdgeKind::HasKeyword, collection, keyword)) continue;
        store.add_edge(EdgeKind::HasKeyword, collection, keyword, {{"provenance", "mediated"}, {"via", pub.str()}});
        ++added;
      }
    }
  }
  return added;
}

std::vector<NodeId> mediation_witnesses(const GraphStore& store, const NodeId& collection, const NodeId& keyword) {
  std::vector<NodeId> out;
  for (const auto& pub : store.adjacent(collection, EdgeKind::MentionsMission, Direction::In)) {
    if (store.find_edge(EdgeKind::HasKeyword, pub, keyword)) out.push_back(pub);
  }
  return out;
}

std::vector<RelatedKeyword> related_keywords(const GraphStore& store, std::string_view term) {
  std::string normalized = normalize_term(term);
  auto keyword = store.keyword_node(normalized);
  if (!keyword) throw Error(ErrorCode::UnknownKeyword, std::string(term));

  std::map<NodeId, size_t> counts;
  for (const auto& holder : store.adjacent(*keyword, EdgeKind::HasKeyword, Direction::In)) {
    if (!is_dataset_kind(holder.kind())) continue;
    for (const auto& other : store.adjacent(holder, EdgeKind::HasKeyword, Direction::Out)) {
      if (other != *keyword) ++counts[other];
    }
  }
  std::vector<RelatedKeyword> out;
  out.reserve(counts.size());
  for (const auto& [id, count] : counts) {
    out.push_back({store.node(id).attrs["term"].get<std::string>(), count});
  }
  std::sort(out.begin(), out.end(), [](const RelatedKeyword& a, const RelatedKeyword& b) {
    return a.co_count != b.co_count ? a.co_count > b.co_count : a.term < b.term;
  });
  return out;
}

ExtractionReport attach_extracted_keywords(GraphStore& store, const ScoreTable& scores) {
  if (store.frozen()) throw Error(ErrorCode::BuildPhaseError, "attach_extracted_keywords on a frozen store");
  ExtractionReport report;
  const Attrs extracted = {{"provenance", "extracted"}};
  for (const auto& [term, score] : scores) {
    NodeId keyword;
    if (auto existing = store.keyword_node(term)) {
      keyword = *existing;
    } else {
      keyword = store.add_node(NodeKind::Keyword, keyword_key(term), {{"term", term}});
      ++report.keywords_added;
    }
    for (const auto& dataset : score.dataset_ids) {
      if (store.find_edge(EdgeKind::HasKeyword, dataset, keyword)) continue;
      store.add_edge(EdgeKind::HasKeyword, dataset, keyword, extracted);
      ++report.edges_added;
    }
  }
  return report;
}

}  // namespace vesa
