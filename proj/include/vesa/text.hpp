#pragma once

#include <string>
#include <string_view>

namespace vesa {

/// ASCII lowercase; bytes >= 0x80 (UTF-8 sequences) pass through unchanged.
std::string ascii_lower(std::string_view s);

/// Trims and collapses internal whitespace runs to one space.
std::string collapse_whitespace(std::string_view s);

/// Identity form of a curated keyword: trimmed, whitespace collapsed, lowercase.
std::string normalize_term(std::string_view s);

/// Node key for a keyword term: the term with '%' and '/' percent-encoded.
std::string keyword_key(std::string_view term);

/// Node key for an author: normalized name, lowercase, whitespace and '/'
/// replaced by '-'. "Franziska Tell" -> "franziska-tell".
std::string author_key(std::string_view name);

}  // namespace vesa
