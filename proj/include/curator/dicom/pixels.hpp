/**
 * @file pixels.hpp
 * @brief Native pixel data decoding with modality rescale
 */
#pragma once

#include "curator/dicom/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace curator::dicom {

/// One decoded frame in modality units (stored * slope + intercept).
struct PixelFrame {
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    std::vector<std::int32_t> values;

    auto operator==(const PixelFrame&) const -> bool = default;
};

/// Number of frames available in the pixel payload (0 when absent).
[[nodiscard]] auto frame_count(const DicomObject& obj) -> std::uint32_t;

/**
 * @brief Decode one grayscale frame.
 *
 * Supports bits_allocated 8 or 16 with one sample per pixel. Signed stored
 * values are sign-extended from BitsStored when PixelRepresentation is 1.
 * RescaleSlope defaults to 1 and RescaleIntercept to 0; results are rounded
 * to the nearest integer.
 *
 * @throws Error no_pixel_data, frame_out_of_range, unsupported_pixel_format
 */
[[nodiscard]] auto decode_pixels(const DicomObject& obj, std::uint32_t frame_index) -> PixelFrame;

/// Little-endian encoding of stored values for 8/16-bit payloads.
[[nodiscard]] auto encode_stored_values(std::span<const std::int32_t> stored, std::uint32_t bits_allocated)
    -> std::vector<std::uint8_t>;

}  // namespace curator::dicom
