#pragma once

#include <filesystem>
#include <memory>

#include "vesa/build.hpp"

namespace vesa::testing {

inline const std::filesystem::path kDataDir = VESA_DATA_DIR;
inline const std::filesystem::path kFixtureDir = VESA_TEST_FIXTURES;

/// Builds the graph of a directory holding sources.json and fixtures/<source>/.
inline std::shared_ptr<const GraphStore> build_fixture_set(const std::filesystem::path& dir) {
  return std::make_shared<const GraphStore>(
      build_graph(load_sources(dir / "sources.json"), dir / "fixtures").store);
}

/// A single PANGAEA record with a known /main/all body.
inline std::shared_ptr<const GraphStore> foraminifera_store() { return build_fixture_set(kDataDir / "golden/foraminifera"); }

/// The shipped demo corpus: PANGAEA records, DLR STAC collections and publications.
inline std::shared_ptr<const GraphStore> demo_store() { return build_fixture_set(kDataDir / "demo"); }

}  // namespace vesa::testing
