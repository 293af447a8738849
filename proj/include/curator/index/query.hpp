/**
 * @file query.hpp
 * @brief Search-box query language: AST, parser, printer, wildcard matching
 *
 * Grammar:
 *
 *     expr    := or
 *     or      := and ("OR" and)*
 *     and     := unary (("AND")? unary)*
 *     unary   := "NOT" unary | primary
 *     primary := "(" expr ")" | field ":" (pattern | range | quoted) | quoted | pattern
 *     range   := "[" lit "TO" lit "]" | "{" lit "TO" lit "}"
 *
 * Operators are uppercase only. A backslash escapes the next character.
 * `*` in a range bound leaves that side open.
 */
#pragma once

#include "curator/common/error.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curator::index {

enum class NodeKind : std::uint8_t { match_all, and_, or_, not_, term, phrase, field_match, range };

struct QueryNode;
using QueryAst = std::shared_ptr<const QueryNode>;

struct QueryNode {
    NodeKind kind = NodeKind::match_all;
    std::vector<QueryAst> children;  ///< and_/or_ (>= 2), not_ (exactly 1)
    std::string field;               ///< field_match, range
    std::string text;                ///< term/field_match pattern, phrase text
    bool quoted = false;             ///< field_match with a quoted (literal) value
    std::optional<std::string> lo;   ///< range bounds, nullopt = open
    std::optional<std::string> hi;
    bool lo_inclusive = true;
    bool hi_inclusive = true;
};

[[nodiscard]] auto operator==(const QueryNode& a, const QueryNode& b) -> bool;
[[nodiscard]] auto ast_equal(const QueryAst& a, const QueryAst& b) -> bool;

[[nodiscard]] auto make_match_all() -> QueryAst;
/// Flattens nested nodes of the same kind; a single child is returned as-is.
[[nodiscard]] auto make_and(std::vector<QueryAst> children) -> QueryAst;
[[nodiscard]] auto make_or(std::vector<QueryAst> children) -> QueryAst;
[[nodiscard]] auto make_not(QueryAst child) -> QueryAst;
[[nodiscard]] auto make_term(std::string text) -> QueryAst;
[[nodiscard]] auto make_phrase(std::string text) -> QueryAst;
[[nodiscard]] auto make_field_match(std::string field, std::string pattern, bool quoted = false) -> QueryAst;
[[nodiscard]] auto make_range(std::string field, std::optional<std::string> lo, std::optional<std::string> hi,
                              bool lo_inclusive = true, bool hi_inclusive = true) -> QueryAst;

class QueryParseError : public Error {
public:
    QueryParseError(std::size_t position, std::vector<std::string> expected, const std::string& found);
    [[nodiscard]] auto position() const -> std::size_t { return position_; }
    [[nodiscard]] auto expected() const -> const std::vector<std::string>& { return expected_; }

private:
    std::size_t position_;
    std::vector<std::string> expected_;
};

/// @throws QueryParseError (code parse_error)
[[nodiscard]] auto parse_query(std::string_view q) -> QueryAst;

/// Canonical text; parse_query(print_query(a)) equals a for every parsed a.
[[nodiscard]] auto print_query(const QueryAst& ast) -> std::string;

/// Anchored match with `*` (any run) and `?` (one byte), ASCII case-insensitive.
[[nodiscard]] auto wildcard_match(std::string_view pattern, std::string_view value) -> bool;
[[nodiscard]] auto has_wildcards(std::string_view pattern) -> bool;
/// Literal part before the first wildcard, lowercased.
[[nodiscard]] auto literal_prefix(std::string_view pattern) -> std::string;

}  // namespace curator::index
