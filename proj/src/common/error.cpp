/**
 * @file error.cpp
 * @brief Error code names and HTTP status mapping
 */

#include "curator/common/error.hpp"

#include <array>

namespace curator {

namespace {

struct CodeInfo {
    ErrorCode code;
    std::string_view name;
    int status;
};

constexpr std::array kCodes = {
    CodeInfo{ErrorCode::malformed_preamble, "malformed_preamble", 422},
    CodeInfo{ErrorCode::truncated_element, "truncated_element", 422},
    CodeInfo{ErrorCode::malformed_element, "malformed_element", 422},
    CodeInfo{ErrorCode::unsupported_transfer_syntax, "unsupported_transfer_syntax", 422},
    CodeInfo{ErrorCode::no_pixel_data, "no_pixel_data", 422},
    CodeInfo{ErrorCode::frame_out_of_range, "frame_out_of_range", 400},
    CodeInfo{ErrorCode::unsupported_pixel_format, "unsupported_pixel_format", 422},
    CodeInfo{ErrorCode::not_a_segmentation, "not_a_segmentation", 422},
    CodeInfo{ErrorCode::unsupported_segmentation_type, "unsupported_segmentation_type", 422},
    CodeInfo{ErrorCode::missing_frame_mapping, "missing_frame_mapping", 422},
    CodeInfo{ErrorCode::not_an_rtstruct, "not_an_rtstruct", 422},
    CodeInfo{ErrorCode::malformed_contour_data, "malformed_contour_data", 422},
    CodeInfo{ErrorCode::not_nifti, "not_nifti", 422},
    CodeInfo{ErrorCode::unsupported_datatype, "unsupported_datatype", 422},
    CodeInfo{ErrorCode::unsupported_dims, "unsupported_dims", 422},
    CodeInfo{ErrorCode::missing_series_uid, "missing_series_uid", 422},
    CodeInfo{ErrorCode::series_uid_mismatch, "series_uid_mismatch", 400},
    CodeInfo{ErrorCode::parse_error, "parse_error", 422},
    CodeInfo{ErrorCode::unknown_field, "unknown_field", 404},
    CodeInfo{ErrorCode::field_not_in_distribution, "field_not_in_distribution", 400},
    CodeInfo{ErrorCode::unknown_series, "unknown_series", 404},
    CodeInfo{ErrorCode::invalid_document, "invalid_document", 400},
    CodeInfo{ErrorCode::no_renderable_instance, "no_renderable_instance", 422},
    CodeInfo{ErrorCode::dimension_mismatch, "dimension_mismatch", 400},
    CodeInfo{ErrorCode::unsupported_orientation, "unsupported_orientation", 422},
    CodeInfo{ErrorCode::invalid_config, "invalid_config", 400},
    CodeInfo{ErrorCode::duplicate_name, "duplicate_name", 409},
    CodeInfo{ErrorCode::invalid_name, "invalid_name", 400},
    CodeInfo{ErrorCode::invalid_tag, "invalid_tag", 400},
    CodeInfo{ErrorCode::unknown_dataset, "unknown_dataset", 404},
    CodeInfo{ErrorCode::overlapping_add_remove, "overlapping_add_remove", 400},
    CodeInfo{ErrorCode::storage_error, "storage_error", 500},
    CodeInfo{ErrorCode::annotator_failed, "annotator_failed", 502},
    CodeInfo{ErrorCode::protocol_violation, "protocol_violation", 502},
    CodeInfo{ErrorCode::timeout, "timeout", 504},
    CodeInfo{ErrorCode::invalid_manifest, "invalid_manifest", 400},
    CodeInfo{ErrorCode::unreferenced_segmentation, "unreferenced_segmentation", 400},
    CodeInfo{ErrorCode::unknown_annotator, "unknown_annotator", 404},
    CodeInfo{ErrorCode::path_not_found, "path_not_found", 404},
    CodeInfo{ErrorCode::bad_request, "bad_request", 400},
    CodeInfo{ErrorCode::unknown_job, "unknown_job", 404},
    CodeInfo{ErrorCode::not_found, "not_found", 404},
    CodeInfo{ErrorCode::data_dir_locked, "data_dir_locked", 409},
    CodeInfo{ErrorCode::internal, "internal", 500},
};

constexpr auto make_code_list() {
    std::array<ErrorCode, kCodes.size()> out{};
    for (std::size_t i = 0; i < kCodes.size(); ++i) {
        out[i] = kCodes[i].code;
    }
    return out;
}

constexpr auto kCodeList = make_code_list();

auto info(ErrorCode code) -> const CodeInfo& {
    return kCodes[static_cast<std::size_t>(code)];
}

constexpr auto codes_in_declaration_order() -> bool {
    for (std::size_t i = 0; i < kCodes.size(); ++i) {
        if (static_cast<std::size_t>(kCodes[i].code) != i) {
            return false;
        }
    }
    return true;
}

static_assert(codes_in_declaration_order(), "kCodes rows must follow ErrorCode order");
static_assert(kCodes.size() == static_cast<std::size_t>(ErrorCode::internal) + 1,
              "every ErrorCode needs a CodeInfo row");

}  // namespace

auto all_error_codes() -> std::span<const ErrorCode> { return kCodeList; }

auto to_string(ErrorCode code) -> std::string_view { return info(code).name; }

auto error_code_from_string(std::string_view text) -> std::optional<ErrorCode> {
    for (const auto& row : kCodes) {
        if (row.name == text) {
            return row.code;
        }
    }
    return std::nullopt;
}

auto http_status(ErrorCode code) -> int { return info(code).status; }

}  // namespace curator
