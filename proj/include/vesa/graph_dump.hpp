#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "vesa/graph.hpp"

namespace vesa {

inline constexpr const char* kDumpFormat = "vesa-graph";
inline constexpr int kDumpVersion = 1;

// JSON Lines: a header record {format, version, counts:{nodes, edges}}, then
// one {"kind":"node",...} record per node and one {"kind":"edge",...} record
// per edge, each group sorted by id. Keys inside records are sorted, so equal
// stores produce byte-identical output.
std::string dump_to_string(const GraphStore& store);
void dump(const GraphStore& store, const std::filesystem::path& path);

/// Validates the header, every record, and every edge endpoint. Throws
/// Error{CorruptDump}. The returned store is in the build phase.
GraphStore load_from_string(const std::string& text);
GraphStore load(const std::filesystem::path& path);

}  // namespace vesa
