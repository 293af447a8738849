/**
 * @file search_oracle.hpp
 * @brief Synthetic series corpora, random queries and brute-force evaluation
 *
 * The oracle walks every document for every query and never touches index
 * internals. Its tokenizer and wildcard matcher are written separately from
 * the production ones.
 */
#pragma once

#include "curator/index/document.hpp"
#include "curator/index/index.hpp"
#include "curator/index/query.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace curator::fixture {

/// `n` synthetic documents with keyword, text, name, date, number and curation fields.
[[nodiscard]] auto random_corpus(std::mt19937_64& rng, std::size_t n) -> std::vector<index::SeriesDocument>;

/// Random AST of terms, phrases, wildcards, field filters, ranges and nested boolean operators.
[[nodiscard]] auto random_query(std::mt19937_64& rng, int depth = 3) -> index::QueryAst;

/// Plain recursive `*`/`?` matcher, ASCII case-insensitive.
[[nodiscard]] auto naive_wildcard(const std::string& pattern, const std::string& value) -> bool;

[[nodiscard]] auto oracle_matches(const index::SeriesDocument& doc, const index::QueryAst& ast) -> bool;

/// uids matching `ast`, ordered as documented for `sort`.
[[nodiscard]] auto oracle_search(const std::vector<index::SeriesDocument>& docs, const index::QueryAst& ast,
                                 const std::optional<std::string>& sort = std::nullopt) -> std::vector<std::string>;

/// Exact-value buckets (count desc, value asc) plus missing count. Numbers are formatted, never binned.
[[nodiscard]] auto oracle_facet(const std::vector<index::SeriesDocument>& docs, const index::QueryAst& ast,
                                const std::string& field) -> index::FieldFacet;

[[nodiscard]] auto oracle_autocomplete(const std::vector<index::SeriesDocument>& docs, const std::string& field,
                                       const std::string& prefix, std::size_t limit)
    -> std::vector<index::Suggestion>;

/// Field names the corpus uses, for picking random facets.
[[nodiscard]] auto corpus_facet_fields() -> const std::vector<std::string>&;

}  // namespace curator::fixture
