/**
 * @file index.hpp
 * @brief In-memory inverted index over SeriesDocuments with an NDJSON journal
 *
 * Matching rules:
 *  - Term: equals (or wildcard-matches) a token of any text/name field or a
 *    whole value of any keyword/name field, case-insensitively.
 *  - Phrase: consecutive tokens inside one text/name value, or equality with a
 *    whole keyword/name value.
 *  - FieldMatch: anchored wildcard over the field's values. Text and name
 *    fields also match single tokens; numbers compare numerically when the
 *    pattern is a plain number; dates accept `YYYYMMDD` or `YYYY-MM-DD`.
 *  - Range: numeric order for numbers, ISO order for dates, case-folded byte
 *    order otherwise.
 *
 * Virtual fields: tags, anatomical_structures, body_part (keyword) and
 * instance_count (number). Field names resolve case-insensitively.
 */
#pragma once

#include "curator/index/document.hpp"
#include "curator/index/query.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace curator::fileio {
class AppendLog;
}

namespace curator::index {

struct SearchHit {
    std::string series_uid;
    double score = 1.0;
};

struct SearchResults {
    std::uint64_t total = 0;
    std::vector<SearchHit> hits;
    std::uint64_t from = 0;
    std::uint64_t size = 0;
    std::vector<std::string> warnings;
};

struct FacetBucket {
    std::string value;
    std::uint64_t count = 0;

    auto operator==(const FacetBucket&) const -> bool = default;
};

struct FieldFacet {
    std::string field;
    std::vector<FacetBucket> buckets;  ///< count desc, then value asc (numeric for numbers)
    std::uint64_t missing_count = 0;
    bool binned = false;  ///< number field with more than 50 distinct values
};

struct FacetDistribution {
    std::uint64_t total = 0;  ///< size of the result set
    std::vector<FieldFacet> fields;
    std::vector<std::string> warnings;
};

struct Suggestion {
    std::string value;
    std::uint64_t doc_count = 0;

    auto operator==(const Suggestion&) const -> bool = default;
};

struct FieldInfo {
    std::string name;
    FieldType type = FieldType::keyword;
    std::uint64_t doc_count = 0;
};

enum class UpsertOutcome : std::uint8_t { created, updated };

struct ReplayReport {
    std::uint64_t lines = 0;
    std::uint64_t documents = 0;
    std::uint64_t truncated_bytes = 0;  ///< partial or corrupt tail removed
};

inline constexpr std::size_t kMaxPageSize = 1000;
inline constexpr std::size_t kExactFacetLimit = 50;
inline constexpr std::size_t kFacetBins = 10;

/// Fields every document exposes besides its DICOM keywords.
[[nodiscard]] auto virtual_fields(const SeriesDocument& doc) -> std::vector<std::pair<std::string, Field>>;

class MetadataIndex {
public:
    /// In-memory only.
    MetadataIndex();
    /// Replays `journal` (created when absent). A corrupt tail is truncated.
    explicit MetadataIndex(const std::filesystem::path& journal);
    ~MetadataIndex();
    MetadataIndex(const MetadataIndex&) = delete;
    auto operator=(const MetadataIndex&) -> MetadataIndex& = delete;

    auto upsert(SeriesDocument doc) -> UpsertOutcome;
    /// @throws Error unknown_series
    auto set_tags(const std::string& series_uid, std::vector<std::string> tags) -> std::vector<std::string>;
    /// @throws Error unknown_series
    auto set_anatomical_structures(const std::string& series_uid, std::vector<std::string> structures)
        -> std::vector<std::string>;

    [[nodiscard]] auto get(const std::string& series_uid) const -> std::optional<SeriesDocument>;
    [[nodiscard]] auto contains(const std::string& series_uid) const -> bool;
    [[nodiscard]] auto size() const -> std::size_t;
    [[nodiscard]] auto series_uids() const -> std::vector<std::string>;
    [[nodiscard]] auto fields() const -> std::vector<FieldInfo>;

    /// `sort`: field name, `-` prefix for descending. @throws Error bad_request when size > 1000
    [[nodiscard]] auto search(const QueryAst& ast, std::size_t from, std::size_t size,
                              const std::optional<std::string>& sort = std::nullopt) const -> SearchResults;
    /// All matching uids, unpaged, in result order.
    [[nodiscard]] auto match_all_uids(const QueryAst& ast) const -> std::vector<std::string>;
    [[nodiscard]] auto aggregate(const QueryAst& ast, const std::vector<std::string>& fields) const
        -> FacetDistribution;
    [[nodiscard]] auto autocomplete(const std::string& field, const std::string& prefix, std::size_t limit) const
        -> std::vector<Suggestion>;

    [[nodiscard]] auto replay_report() const -> const ReplayReport& { return replay_; }
    /// fdatasync the journal.
    void flush();
    /// Rewrites the journal with one line per live document.
    void compact();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    mutable std::shared_mutex mutex_;
    ReplayReport replay_;
};

/// Bytes of the `value,count` CSV for one field. @throws Error field_not_in_distribution
[[nodiscard]] auto export_csv(const FacetDistribution& dist, const std::string& field) -> std::string;

}  // namespace curator::index
