/**
 * @file annotator.hpp
 * @brief Header-based body part annotation, SEG label ingestion and the external annotator protocol
 *
 * External protocol: the invocation template is split on whitespace into argv
 * (no shell), `{input_dir}` and `{output_dir}` are substituted, and the child
 * gets CURATOR_SERIES_UID and CURATOR_OUTPUT_DIR in its environment. On exit 0
 * the output directory is scanned for `result.json` and `*.dcm` SEG files.
 */
#pragma once

#include "curator/dicom/segmentation.hpp"
#include "curator/index/document.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curator::annotator {

enum class AnnotatorKind : std::uint8_t { segmentation, classification };

struct AnnotatorManifest {
    std::string name;
    std::string version;
    std::vector<std::string> labels;
    AnnotatorKind kind = AnnotatorKind::segmentation;
    std::string invocation;
    std::map<std::string, std::vector<std::string>> label_groups;  ///< optional grouping, e.g. organs/bones
    std::filesystem::path base_dir;  ///< relative program paths resolve here

    [[nodiscard]] auto source() const -> std::string { return name + "/" + version; }
    /// Case-insensitive label membership.
    [[nodiscard]] auto has_label(std::string_view label) const -> bool;
};

struct AnnotationResult {
    std::string series_uid;
    std::string source;
    std::vector<std::string> structures;  ///< lowercase
    std::optional<std::string> body_part;
    std::vector<std::filesystem::path> produced_seg_files;

    auto operator==(const AnnotationResult&) const -> bool = default;
};

/// @throws Error invalid_manifest
void validate_manifest(const AnnotatorManifest& manifest);

/// Parses and validates manifest JSON. @throws Error invalid_manifest
[[nodiscard]] auto parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir = {})
    -> AnnotatorManifest;

/// @throws Error invalid_manifest, path_not_found
[[nodiscard]] auto load_manifest(const std::filesystem::path& path) -> AnnotatorManifest;

/// Every `*.manifest.json` under `dir`, keyed by name. Invalid files are skipped and listed in `rejected`.
[[nodiscard]] auto load_manifests(const std::filesystem::path& dir, std::vector<std::string>* rejected = nullptr)
    -> std::map<std::string, AnnotatorManifest>;

/// Normalized BodyPartExamined spellings (uppercase, no separators) to body_part values.
[[nodiscard]] auto body_part_synonyms() -> const std::map<std::string, std::string>&;

/// Maps a raw BodyPartExamined value through the synonym table.
[[nodiscard]] auto normalize_body_part(std::string_view raw) -> std::optional<std::string>;

inline constexpr std::string_view kHeaderAnnotatorSource = "header-annotator/1";

/// body_part from the document's BodyPartExamined field.
[[nodiscard]] auto annotate_from_headers(const index::SeriesDocument& doc) -> AnnotationResult;

/// True when the SEG references the document's series or one of its instances.
[[nodiscard]] auto seg_references(const dicom::SegmentationMasks& seg, const index::SeriesDocument& doc) -> bool;

/**
 * @brief Lowercased segment labels unioned into doc.anatomical_structures.
 * @throws Error unreferenced_segmentation
 */
[[nodiscard]] auto ingest_seg_labels(const dicom::SegmentationMasks& seg, index::SeriesDocument doc)
    -> index::SeriesDocument;

/// Existing order kept, new lowercase values appended, empties dropped.
[[nodiscard]] auto union_structures(std::vector<std::string> current, const std::vector<std::string>& add)
    -> std::vector<std::string>;

struct RunOptions {
    std::chrono::milliseconds timeout{600'000};
    /// Receives `input/` (links to the series files) and `output/`. Kept after the run.
    std::filesystem::path work_dir;
};

/// argv after placeholder substitution.
[[nodiscard]] auto build_argv(const AnnotatorManifest& manifest, const std::filesystem::path& input_dir,
                              const std::filesystem::path& output_dir) -> std::vector<std::string>;

/**
 * @brief Runs an external annotator over the files of one series.
 * @throws Error annotator_failed (message carries stderr), protocol_violation, timeout, path_not_found
 */
[[nodiscard]] auto run_external(const AnnotatorManifest& manifest, const std::vector<std::filesystem::path>& series_files,
                                const std::string& series_uid, const RunOptions& options) -> AnnotationResult;

}  // namespace curator::annotator
