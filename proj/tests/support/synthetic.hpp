#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "vesa/build.hpp"
#include "vesa/query.hpp"

namespace vesa::testing {

// Corpus names used by the generator.
inline constexpr const char* kSyntheticPangaea = "synthetic_pangaea";
inline constexpr const char* kSyntheticStac = "synthetic_stac";

struct SyntheticOptions {
  size_t datasets = 1000;     // PANGAEA-shaped records
  size_t collections = 0;     // STAC-shaped records
  size_t vocabulary = 80;     // distinct curated keywords
  size_t authors = 60;
  size_t abstract_words = 12;
  uint64_t seed = 1;
};

/// `n` distinct lowercase pseudo-words of 4..10 letters that are not stopwords.
std::vector<std::string> pseudo_words(size_t n, std::mt19937_64& rng);

/// Raw source documents; a fraction of records is undated, unlocated, crosses
/// the antimeridian, or carries an explicit mean position.
std::vector<SourceDocuments> synthetic_sources(const SyntheticOptions& options);

std::shared_ptr<const GraphStore> synthetic_store(const SyntheticOptions& options);

/// Random selection over the store's vocabulary, authors and corpora. Empty
/// dimensions are common so that results stay non-trivial.
SelectionState random_selection(const GraphStore& store, std::mt19937_64& rng);

/// Replaces, removes or descends into one random member of `doc`; leaves end
/// up as junk values of the wrong type or out of range.
void mutate_document(Attrs& doc, std::mt19937_64& rng);

}  // namespace vesa::testing
