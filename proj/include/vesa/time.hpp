#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace vesa {

/// UTC instant with microsecond resolution.
using Instant = std::chrono::sys_time<std::chrono::microseconds>;

/// Parses an RFC 3339 timestamp ("1999-07-31T23:00:00Z",
/// "1999-08-01T23:00:00.000Z", "2023-11-13T06:33:47+00:00"). A bare
/// calendar date is accepted as midnight UTC. Fractional digits beyond
/// microseconds are truncated. Returns nullopt on any syntax or range error.
std::optional<Instant> parse_timestamp(std::string_view text);

/// Canonical UTC rendering: "YYYY-MM-DDTHH:MM:SS[.ffffff]Z"; the fraction is
/// written only when non-zero.
std::string format_timestamp(Instant t);

}  // namespace vesa
