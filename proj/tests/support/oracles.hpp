#pragma once

// Brute-force reference implementations. They read the node and edge sets
// directly and share no code with the query or scoring paths they check.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vesa/graph.hpp"
#include "vesa/query.hpp"

namespace vesa::testing {

struct OracleScore {
  double score = 0;
  size_t df = 0;
};

/// tf-idf over pre-tokenized documents: score(t) = max_d count(t, d) * ln(N / df(t)).
std::map<std::string, OracleScore> oracle_tfidf(const std::vector<std::vector<std::string>>& documents);

/// Linear scan over every dataset node of the store.
std::vector<NodeId> oracle_filter(const GraphStore& store, const SelectionState& selection);

/// Number of datasets tagged with both `term` and each other keyword.
std::map<std::string, size_t> oracle_cooccurrence(const GraphStore& store, const std::string& term);

/// Pairwise shared-dataset counts between authors of `datasets`, keyed by author id.
std::map<std::pair<NodeId, NodeId>, size_t> oracle_coauthorship(const GraphStore& store,
                                                                const std::vector<NodeId>& datasets);

/// Datasets reachable from `dataset` via dataset -hasKeyword-> keyword <-hasKeyword- dataset.
std::set<NodeId> oracle_keyword_reach(const GraphStore& store, const NodeId& dataset);

}  // namespace vesa::testing
