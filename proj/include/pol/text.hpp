#pragma once

#include <string>
#include <string_view>

namespace pol {

inline bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Collapse every whitespace run to a single space and trim the ends.
/// Operates on bytes only, so UTF-8 payloads pass through untouched.
std::string normalize_ws(std::string_view text);

/// Case-insensitive substring search over ASCII letters.
bool contains_icase(std::string_view haystack, std::string_view needle);

/// 64-bit FNV-1a. Used for content-addressed cache keys, not for security.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 1469598103934665603ull);

std::string hex64(std::uint64_t value);

}  // namespace pol
