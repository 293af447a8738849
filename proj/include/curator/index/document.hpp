/**
 * @file document.hpp
 * @brief Series-level searchable documents derived from DICOM headers
 */
#pragma once

#include "curator/dicom/dataset.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curator::index {

enum class FieldType : std::uint8_t {
    keyword,  ///< exact values, case-insensitive comparison
    text,     ///< free text, tokenized
    name,     ///< person names: keyword and free text at once
    date,     ///< ISO-8601 `YYYY-MM-DD`
    number,
};

[[nodiscard]] auto to_string(FieldType t) -> std::string_view;
[[nodiscard]] auto field_type_from_string(std::string_view s) -> std::optional<FieldType>;

struct Field {
    FieldType type = FieldType::keyword;
    std::vector<std::string> values;  ///< keyword/text/name/date values, original case
    std::vector<double> numbers;      ///< number values

    auto operator==(const Field&) const -> bool = default;
    [[nodiscard]] auto empty() const -> bool { return values.empty() && numbers.empty(); }
};

struct SeriesDocument {
    std::string series_uid;
    std::string study_uid;
    std::string patient_id;
    std::string modality;
    std::map<std::string, Field> fields;  ///< dictionary keyword -> value(s)
    std::uint64_t instance_count = 0;
    bool has_pixel_data = false;
    std::vector<std::string> tags;                   ///< curation tags, mirrored from the dataset store
    std::vector<std::string> anatomical_structures;  ///< from annotators
    std::optional<std::string> body_part;
    std::int64_t ingest_time = 0;  ///< ms since epoch
    std::vector<std::string> sop_instance_uids;  ///< sorted, unique
    std::vector<std::string> warnings;
    std::vector<std::string> field_conflicts;

    auto operator==(const SeriesDocument&) const -> bool = default;
};

/// Names reserved for curation fields; colliding DICOM keywords get `_dicom` appended.
[[nodiscard]] auto reserved_field_names() -> const std::vector<std::string>&;

/// DA `YYYYMMDD` (or already ISO) to `YYYY-MM-DD`, validating the calendar date.
[[nodiscard]] auto normalize_date(std::string_view da) -> std::optional<std::string>;

/// Lowercase tokens split on every non-alphanumeric ASCII byte. Bytes >= 0x80 are kept inside tokens.
[[nodiscard]] auto tokenize(std::string_view text) -> std::vector<std::string>;

/**
 * @brief Header of one instance as a series document with instance_count 1.
 * @throws Error missing_series_uid
 */
[[nodiscard]] auto to_document(const dicom::DicomObject& obj, std::int64_t ingest_time = 0) -> SeriesDocument;

/**
 * @brief Folds another instance of the same series into `doc`.
 *
 * Scalars keep the first-seen value, multi-valued keyword lists are unioned,
 * disagreements land in `field_conflicts`. An instance whose SOPInstanceUID is
 * already counted does not change instance_count.
 *
 * @throws Error series_uid_mismatch
 */
[[nodiscard]] auto merge_instance(SeriesDocument doc, const dicom::DicomObject& obj) -> SeriesDocument;

/// Attributes that vary per instance by nature; they never produce conflicts.
[[nodiscard]] auto is_instance_level(std::string_view keyword) -> bool;

}  // namespace curator::index
