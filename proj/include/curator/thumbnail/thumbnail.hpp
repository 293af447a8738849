/**
 * @file thumbnail.hpp
 * @brief Series thumbnails: slice choice, overlays, placeholder cards and the disk cache
 */
#pragma once

#include "curator/thumbnail/render.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace curator::thumbnail {

struct SeriesInput {
    std::string modality;
    std::vector<const dicom::DicomObject*> instances;       ///< the series' own instances
    std::vector<const dicom::DicomObject*> segmentations;   ///< SEG objects referencing the series
    std::vector<const dicom::DicomObject*> structure_sets;  ///< RTSTRUCT objects referencing the series
};

struct SliceChoice {
    std::size_t instance = 0;  ///< index into the input list
    std::uint32_t frame = 0;

    auto operator==(const SliceChoice&) const -> bool = default;
};

/// Indices of instances with pixel data, by InstanceNumber (missing last) then SOPInstanceUID.
[[nodiscard]] auto order_instances(const std::vector<const dicom::DicomObject*>& instances)
    -> std::vector<std::size_t>;

/// Lower-median instance and its middle frame. @throws Error no_renderable_instance
[[nodiscard]] auto select_slice(const std::vector<const dicom::DicomObject*>& instances) -> SliceChoice;

/// Modalities rendered as a text card even when pixel data is present.
[[nodiscard]] auto is_non_image_modality(std::string_view modality) -> bool;

/**
 * @brief edge x edge RGB thumbnail. Never throws for content problems.
 *
 * With overlays, the slice with the largest total mask area is shown (median
 * slice when every mask is empty). Failures become an "ERR <modality>" card.
 */
[[nodiscard]] auto render_thumbnail(const SeriesInput& series, const ThumbnailConfig& cfg) -> RgbImage;

/// PNG bytes of render_thumbnail.
[[nodiscard]] auto make_thumbnail(const SeriesInput& series, const ThumbnailConfig& cfg) -> std::vector<std::uint8_t>;

/// Number of (instance, frame) pairs in display order.
[[nodiscard]] auto slice_count(const std::vector<const dicom::DicomObject*>& instances) -> std::size_t;

/**
 * @brief Native-size PNG of the `index`-th slice in display order with its default window.
 * @throws Error frame_out_of_range, decode errors
 */
[[nodiscard]] auto render_slice_png(const std::vector<const dicom::DicomObject*>& instances, std::size_t index)
    -> std::vector<std::uint8_t>;

/// `<dir>/<uid[0:2]>/<uid>_<config hash>.png`
class ThumbnailCache {
public:
    explicit ThumbnailCache(std::filesystem::path dir);

    [[nodiscard]] auto path_for(const std::string& series_uid, const ThumbnailConfig& cfg) const
        -> std::filesystem::path;
    [[nodiscard]] auto load(const std::string& series_uid, const ThumbnailConfig& cfg) const
        -> std::optional<std::vector<std::uint8_t>>;
    void store(const std::string& series_uid, const ThumbnailConfig& cfg, const std::vector<std::uint8_t>& png) const;
    /// Removes every cached variant of the series.
    void invalidate(const std::string& series_uid) const;

private:
    std::filesystem::path dir_;
};

}  // namespace curator::thumbnail
