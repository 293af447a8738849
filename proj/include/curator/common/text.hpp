/**
 * @file text.hpp
 * @brief Small string helpers (ASCII case folding, splitting, number formatting)
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curator::text {

/// ASCII-only lowercase; bytes >= 0x80 pass through unchanged.
[[nodiscard]] auto to_lower(std::string_view s) -> std::string;

[[nodiscard]] auto iequals(std::string_view a, std::string_view b) -> bool;

[[nodiscard]] auto starts_with_icase(std::string_view s, std::string_view prefix) -> bool;

[[nodiscard]] auto trim(std::string_view s) -> std::string_view;

[[nodiscard]] auto split(std::string_view s, char delim) -> std::vector<std::string>;

[[nodiscard]] auto join(const std::vector<std::string>& parts, std::string_view delim) -> std::string;

/// Parses the whole (trimmed) string as a finite double.
[[nodiscard]] auto parse_double(std::string_view s) -> std::optional<double>;

[[nodiscard]] auto parse_int(std::string_view s) -> std::optional<std::int64_t>;

/// Shortest representation that round-trips; integral values print without a fraction.
[[nodiscard]] auto format_number(double v) -> std::string;

/// FNV-1a 64-bit.
[[nodiscard]] auto fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) -> std::uint64_t;

[[nodiscard]] auto hex64(std::uint64_t v) -> std::string;

/// Latin-1 bytes to UTF-8.
[[nodiscard]] auto latin1_to_utf8(std::string_view s) -> std::string;

/// UTF-8 to Latin-1; code points above U+00FF become '?'.
[[nodiscard]] auto utf8_to_latin1(std::string_view s) -> std::string;

}  // namespace curator::text
