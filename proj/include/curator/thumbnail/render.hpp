/**
 * @file render.hpp
 * @brief Pixel-level building blocks: windowing, overlays, contour fill, resize, text
 */
#pragma once

#include "curator/dicom/pixels.hpp"
#include "curator/dicom/segmentation.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curator::thumbnail {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    auto operator==(const Rgb&) const -> bool = default;
};

struct WindowSpec {
    double center = 0;
    double width = 2;  ///< > 1

    auto operator==(const WindowSpec&) const -> bool = default;
};

struct GrayImage {
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    std::vector<std::uint8_t> pixels;

    auto operator==(const GrayImage&) const -> bool = default;
};

struct RgbImage {
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    std::vector<std::uint8_t> rgb;  ///< rows*columns*3, row-major

    auto operator==(const RgbImage&) const -> bool = default;
    [[nodiscard]] auto at(std::uint32_t row, std::uint32_t col) const -> Rgb;
};

/// rows*columns bytes, 0 or 1.
struct Mask {
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    std::vector<std::uint8_t> bits;

    auto operator==(const Mask&) const -> bool = default;
    [[nodiscard]] auto area() const -> std::uint64_t;
};

struct OverlayLayer {
    std::uint32_t number = 1;  ///< segment or ROI number; palette index is number-1
    std::optional<Rgb> color;  ///< overrides the palette (RT ROI display color)
    Mask mask;
};

[[nodiscard]] auto default_palette() -> const std::vector<Rgb>&;

struct ThumbnailConfig {
    std::uint32_t edge = 128;     ///< 32..512
    double overlay_alpha = 0.5;   ///< 0..1
    std::vector<Rgb> palette = default_palette();
    Rgb background{0, 0, 0};

    /// @throws Error invalid_config
    void validate() const;
    /// Stable 16-hex-digit digest of every setting.
    [[nodiscard]] auto hash() const -> std::string;
};

/// DICOM linear VOI function for one value.
[[nodiscard]] auto window_value(double v, double center, double width) -> std::uint8_t;

[[nodiscard]] auto window_to_gray(const dicom::PixelFrame& frame, const WindowSpec& w, bool monochrome1) -> GrayImage;

/// First WindowCenter/WindowWidth pair with width > 1, else the frame's min/max.
[[nodiscard]] auto default_window(const dicom::DicomObject& obj, const dicom::PixelFrame& frame) -> WindowSpec;

[[nodiscard]] auto gray_to_rgb(const GrayImage& gray) -> RgbImage;

/**
 * @brief Blends layers over `base` in ascending layer number.
 * @throws Error dimension_mismatch
 */
[[nodiscard]] auto render_overlay(const GrayImage& base, std::vector<OverlayLayer> layers, const ThumbnailConfig& cfg)
    -> RgbImage;

/**
 * @brief Fills a polygon given in pixel coordinates (x = column, y = row).
 *
 * Vertices are rounded half-up to the pixel grid. A pixel centre is set when it
 * lies on an edge or inside by the even-odd rule. Parts outside the image are
 * clipped.
 */
[[nodiscard]] auto rasterize_polygon(const std::vector<std::array<double, 2>>& vertices, std::uint32_t rows,
                                     std::uint32_t columns) -> Mask;

struct SliceGeometry {
    double origin_x = 0;
    double origin_y = 0;
    double z = 0;
    double row_spacing = 1;     ///< PixelSpacing[0], along y
    double column_spacing = 1;  ///< PixelSpacing[1], along x
    double slice_spacing = 1;
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    std::array<double, 6> orientation{1, 0, 0, 0, 1, 0};
    std::string sop_instance_uid;
};

/// Geometry of an image instance; missing attributes fall back to identity / unit spacing.
[[nodiscard]] auto slice_geometry(const dicom::DicomObject& obj) -> SliceGeometry;

/**
 * @brief Per-ROI masks of the contours lying on this slice.
 *
 * A contour belongs to the slice when it references the slice's SOP instance
 * or, lacking a reference, when its z is within slice_spacing/2. ROIs with no
 * contour on the slice yield empty masks.
 *
 * @throws Error unsupported_orientation
 */
[[nodiscard]] auto rasterize_contours(const dicom::ContourSet& contours, const SliceGeometry& geometry)
    -> std::vector<OverlayLayer>;

/// Aspect-preserving nearest-neighbour fit into edge x edge, centred on `background`.
[[nodiscard]] auto fit_letterbox(const RgbImage& image, std::uint32_t edge, Rgb background) -> RgbImage;

/// Bundled 5x7 glyph rows (5 low bits per row, MSB = leftmost), '?' for unknown characters.
[[nodiscard]] auto glyph(char c) -> const std::array<std::uint8_t, 7>&;

/// Card of `background` with `text` centred in the 5x7 font, scaled to fit.
[[nodiscard]] auto placeholder_card(std::string_view text, std::uint32_t edge, Rgb background) -> RgbImage;

}  // namespace curator::thumbnail
