/**
 * @file png.hpp
 * @brief 8-bit RGB PNG encode/decode with fixed encoder settings
 */
#pragma once

#include "curator/thumbnail/render.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace curator::thumbnail {

/// Non-interlaced, no filtering, zlib level 9, no ancillary chunks.
[[nodiscard]] auto encode_png(const RgbImage& image) -> std::vector<std::uint8_t>;

/// Any PNG libpng reads, converted to 8-bit RGB. @throws Error internal on malformed input
[[nodiscard]] auto decode_png(std::span<const std::uint8_t> bytes) -> RgbImage;

}  // namespace curator::thumbnail
