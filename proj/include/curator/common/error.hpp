/**
 * @file error.hpp
 * @brief Error codes shared by every curator module
 *
 * Every failure surfaced by the library carries an ErrorCode from one closed
 * set. The code has a stable machine string (used in API responses and CLI
 * diagnostics) and a deterministic HTTP status.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curator {

enum class ErrorCode : std::uint8_t {
    // dicom
    malformed_preamble,
    truncated_element,
    malformed_element,
    unsupported_transfer_syntax,
    no_pixel_data,
    frame_out_of_range,
    unsupported_pixel_format,
    not_a_segmentation,
    unsupported_segmentation_type,
    missing_frame_mapping,
    not_an_rtstruct,
    malformed_contour_data,
    not_nifti,
    unsupported_datatype,
    unsupported_dims,
    // index
    missing_series_uid,
    series_uid_mismatch,
    parse_error,
    unknown_field,
    field_not_in_distribution,
    unknown_series,
    invalid_document,
    // thumbnails
    no_renderable_instance,
    dimension_mismatch,
    unsupported_orientation,
    invalid_config,
    // datasets and tags
    duplicate_name,
    invalid_name,
    invalid_tag,
    unknown_dataset,
    overlapping_add_remove,
    storage_error,
    // annotators
    annotator_failed,
    protocol_violation,
    timeout,
    invalid_manifest,
    unreferenced_segmentation,
    unknown_annotator,
    // service
    path_not_found,
    bad_request,
    unknown_job,
    not_found,
    data_dir_locked,
    internal,
};

/// All codes, in declaration order.
[[nodiscard]] auto all_error_codes() -> std::span<const ErrorCode>;

[[nodiscard]] auto to_string(ErrorCode code) -> std::string_view;

[[nodiscard]] auto error_code_from_string(std::string_view text) -> std::optional<ErrorCode>;

/// HTTP status for an error code (422 parse, 404 unknown, 409 duplicate, 400 invalid, 500 internal).
[[nodiscard]] auto http_status(ErrorCode code) -> int;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] auto code() const noexcept -> ErrorCode { return code_; }

private:
    ErrorCode code_;
};

}  // namespace curator
