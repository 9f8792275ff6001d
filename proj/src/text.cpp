#include "vesa/text.hpp"

namespace vesa {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

std::string normalize_term(std::string_view s) { return ascii_lower(collapse_whitespace(s)); }

std::string keyword_key(std::string_view term) {
  std::string out;
  out.reserve(term.size());
  for (char c : term) {
    if (c == '%') {
      out += "%25";
    } else if (c == '/') {
      out += "%2F";
    } else {
      out += c;
    }
  }
  return out;
}

std::string author_key(std::string_view name) {
  std::string out = normalize_term(name);
  for (char& c : out) {
    if (c == ' ' || c == '/') c = '-';
  }
  return out;
}

}  // namespace vesa
