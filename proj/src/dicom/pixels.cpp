/**
 * @file pixels.cpp
 * @brief Native pixel data decoding
 */

#include "curator/dicom/pixels.hpp"

#include "curator/common/error.hpp"

#include <cmath>
#include <limits>

namespace curator::dicom {

auto frame_count(const DicomObject& obj) -> std::uint32_t {
    if (!obj.pixel_payload) return 0;
    return obj.pixel_descriptor().frames;
}

auto decode_pixels(const DicomObject& obj, std::uint32_t frame_index) -> PixelFrame {
    if (!obj.pixel_payload) {
        throw Error(ErrorCode::no_pixel_data, "object has no pixel data");
    }
    const auto desc = obj.pixel_descriptor();
    if (desc.samples_per_pixel != 1 || (desc.bits_allocated != 8 && desc.bits_allocated != 16)) {
        throw Error(ErrorCode::unsupported_pixel_format,
                    "unsupported pixel format: samples_per_pixel=" + std::to_string(desc.samples_per_pixel) +
                        " bits_allocated=" + std::to_string(desc.bits_allocated));
    }
    if (desc.rows == 0 || desc.columns == 0) {
        throw Error(ErrorCode::unsupported_pixel_format, "pixel data without rows/columns");
    }
    if (frame_index >= desc.frames) {
        throw Error(ErrorCode::frame_out_of_range, "frame " + std::to_string(frame_index) + " of " +
                                                       std::to_string(desc.frames));
    }
    const std::size_t count = static_cast<std::size_t>(desc.rows) * desc.columns;
    const std::size_t width = desc.bits_allocated / 8;
    const std::size_t offset = count * width * frame_index;
    const auto& raw = obj.pixel_payload->bytes;
    if (raw.size() < offset + count * width) {
        throw Error(ErrorCode::truncated_element, "pixel payload shorter than its descriptor");
    }

    auto bits_stored = static_cast<std::uint32_t>(obj.number(tags::bits_stored).value_or(desc.bits_allocated));
    if (bits_stored == 0 || bits_stored > desc.bits_allocated) bits_stored = desc.bits_allocated;
    const std::uint32_t mask = bits_stored >= 32 ? 0xFFFFFFFFU : ((1U << bits_stored) - 1U);
    const std::uint32_t sign_bit = 1U << (bits_stored - 1);

    const double slope = obj.number(tags::rescale_slope).value_or(1.0);
    const double intercept = obj.number(tags::rescale_intercept).value_or(0.0);
    const bool identity = slope == 1.0 && intercept == 0.0;

    PixelFrame frame;
    frame.rows = desc.rows;
    frame.columns = desc.columns;
    frame.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t p = offset + i * width;
        std::uint32_t u = width == 1 ? raw[p] : static_cast<std::uint32_t>(raw[p] | (raw[p + 1] << 8));
        u &= mask;
        std::int64_t stored = u;
        if (desc.is_signed && (u & sign_bit) != 0) {
            stored = static_cast<std::int64_t>(u) - (static_cast<std::int64_t>(1) << bits_stored);
        }
        if (identity) {
            frame.values[i] = static_cast<std::int32_t>(stored);
        } else {
            const double v = std::round(static_cast<double>(stored) * slope + intercept);
            constexpr double lo = std::numeric_limits<std::int32_t>::min();
            constexpr double hi = std::numeric_limits<std::int32_t>::max();
            frame.values[i] = static_cast<std::int32_t>(v < lo ? lo : (v > hi ? hi : v));
        }
    }
    return frame;
}

auto encode_stored_values(std::span<const std::int32_t> stored, std::uint32_t bits_allocated)
    -> std::vector<std::uint8_t> {
    std::vector<std::uint8_t> out;
    out.reserve(stored.size() * (bits_allocated / 8));
    for (const auto v : stored) {
        const auto u = static_cast<std::uint32_t>(v);
        out.push_back(static_cast<std::uint8_t>(u & 0xFF));
        if (bits_allocated == 16) out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
    }
    return out;
}

}  // namespace curator::dicom
