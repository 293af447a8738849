/**
 * @file render.cpp
 */

#include "curator/thumbnail/render.hpp"

#include "curator/common/error.hpp"
#include "curator/common/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace curator::thumbnail {

namespace {

auto floor_div(std::int64_t num, std::int64_t den) -> std::int64_t {
    auto q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

auto ceil_div(std::int64_t num, std::int64_t den) -> std::int64_t { return -floor_div(-num, den); }

auto round_half_up(double v) -> std::int64_t { return static_cast<std::int64_t>(std::floor(v + 0.5)); }

/// x of an edge at row y as num/den with den > 0.
struct Crossing {
    std::int64_t num;
    std::int64_t den;
};

auto less(const Crossing& a, const Crossing& b) -> bool {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

using Glyph = std::array<std::uint8_t, 7>;

const std::map<char, Glyph>& font() {
    static const std::map<char, Glyph> glyphs = {
        {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
        {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E}},
        {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
        {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
        {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
        {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
        {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
        {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
        {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
        {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
        {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
        {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
        {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
        {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
        {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
        {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
        {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
        {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
        {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}}, {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
        {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}}, {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
        {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}}, {'/', {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00}},
        {'?', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x00, 0x04}},
    };
    return glyphs;
}

constexpr Rgb kTextColor{200, 200, 200};

}  // namespace

auto RgbImage::at(std::uint32_t row, std::uint32_t col) const -> Rgb {
    const auto i = (static_cast<std::size_t>(row) * columns + col) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

auto Mask::area() const -> std::uint64_t {
    return static_cast<std::uint64_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

auto default_palette() -> const std::vector<Rgb>& {
    static const std::vector<Rgb> palette = {
        {230, 25, 75},  {60, 180, 75},   {0, 130, 200},  {245, 130, 48}, {145, 30, 180},
        {70, 240, 240}, {240, 50, 230},  {210, 245, 60}, {250, 190, 212}, {0, 128, 128},
    };
    return palette;
}

void ThumbnailConfig::validate() const {
    if (edge < 32 || edge > 512) throw Error(ErrorCode::invalid_config, "edge must be in [32, 512]");
    if (!(overlay_alpha >= 0.0 && overlay_alpha <= 1.0)) {
        throw Error(ErrorCode::invalid_config, "overlay_alpha must be in [0, 1]");
    }
    if (palette.empty()) throw Error(ErrorCode::invalid_config, "palette must not be empty");
}

auto ThumbnailConfig::hash() const -> std::string {
    std::string canon = "v1;edge=" + std::to_string(edge) + ";alpha=" + text::format_number(overlay_alpha) + ";bg=" +
                        std::to_string(background.r) + "," + std::to_string(background.g) + "," +
                        std::to_string(background.b) + ";palette=";
    for (const auto& c : palette) {
        canon += std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b) + ";";
    }
    return text::hex64(text::fnv1a64(canon));
}

auto window_value(double v, double center, double width) -> std::uint8_t {
    const double y = std::round(((v - (center - 0.5)) / (width - 1) + 0.5) * 255.0);
    return static_cast<std::uint8_t>(std::clamp(y, 0.0, 255.0));
}

auto window_to_gray(const dicom::PixelFrame& frame, const WindowSpec& w, bool monochrome1) -> GrayImage {
    GrayImage out{frame.rows, frame.columns, {}};
    out.pixels.reserve(frame.values.size());
    for (auto v : frame.values) {
        const auto g = window_value(v, w.center, w.width);
        out.pixels.push_back(monochrome1 ? static_cast<std::uint8_t>(255 - g) : g);
    }
    return out;
}

auto default_window(const dicom::DicomObject& obj, const dicom::PixelFrame& frame) -> WindowSpec {
    const auto c = obj.number(dicom::tags::window_center);
    const auto w = obj.number(dicom::tags::window_width);
    if (c && w && *w > 1) return {*c, *w};
    if (frame.values.empty()) return {0, 2};
    const auto [lo, hi] = std::minmax_element(frame.values.begin(), frame.values.end());
    const double mn = *lo;
    const double mx = *hi;
    return {(mn + mx) / 2, std::max(mx - mn, 2.0)};
}

auto gray_to_rgb(const GrayImage& gray) -> RgbImage {
    RgbImage out{gray.rows, gray.columns, {}};
    out.rgb.reserve(gray.pixels.size() * 3);
    for (auto g : gray.pixels) out.rgb.insert(out.rgb.end(), {g, g, g});
    return out;
}

auto render_overlay(const GrayImage& base, std::vector<OverlayLayer> layers, const ThumbnailConfig& cfg) -> RgbImage {
    auto out = gray_to_rgb(base);
    std::stable_sort(layers.begin(), layers.end(),
                     [](const OverlayLayer& a, const OverlayLayer& b) { return a.number < b.number; });
    const double a = cfg.overlay_alpha;
    auto blend = [a](std::uint8_t g, std::uint8_t c) {
        return static_cast<std::uint8_t>(std::lround((1.0 - a) * g + a * c));
    };
    for (const auto& layer : layers) {
        if (layer.mask.rows != base.rows || layer.mask.columns != base.columns) {
            throw Error(ErrorCode::dimension_mismatch,
                        "mask " + std::to_string(layer.mask.rows) + "x" + std::to_string(layer.mask.columns) +
                            " does not match image " + std::to_string(base.rows) + "x" + std::to_string(base.columns));
        }
        const auto color =
            layer.color ? *layer.color : cfg.palette[(std::max<std::uint32_t>(layer.number, 1) - 1) % cfg.palette.size()];
        for (std::size_t i = 0; i < layer.mask.bits.size(); ++i) {
            if (!layer.mask.bits[i]) continue;
            const auto g = base.pixels[i];
            out.rgb[i * 3] = blend(g, color.r);
            out.rgb[i * 3 + 1] = blend(g, color.g);
            out.rgb[i * 3 + 2] = blend(g, color.b);
        }
    }
    return out;
}

auto rasterize_polygon(const std::vector<std::array<double, 2>>& vertices, std::uint32_t rows, std::uint32_t columns)
    -> Mask {
    Mask mask{rows, columns, std::vector<std::uint8_t>(static_cast<std::size_t>(rows) * columns, 0)};
    if (vertices.empty()) return mask;
    std::vector<std::array<std::int64_t, 2>> v;
    v.reserve(vertices.size());
    for (const auto& p : vertices) v.push_back({round_half_up(p[0]), round_half_up(p[1])});
    const auto n = v.size();
    auto set = [&](std::int64_t row, std::int64_t col) {
        if (row >= 0 && col >= 0 && row < rows && col < columns) {
            mask.bits[static_cast<std::size_t>(row) * columns + static_cast<std::size_t>(col)] = 1;
        }
    };
    std::vector<Crossing> xs;
    for (std::int64_t r = 0; r < rows; ++r) {
        xs.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const auto [x0, y0] = v[i];
            const auto [x1, y1] = v[(i + 1) % n];
            if (y0 == y1) {
                if (y0 == r) {
                    for (auto c = std::max<std::int64_t>(std::min(x0, x1), 0);
                         c <= std::min<std::int64_t>(std::max(x0, x1), columns - 1); ++c) {
                        set(r, c);
                    }
                }
                continue;
            }
            const auto ylo = std::min(y0, y1);
            const auto yhi = std::max(y0, y1);
            if (r < ylo || r > yhi) continue;
            // x = x0 + (r - y0) * (x1 - x0) / (y1 - y0)
            std::int64_t num = x0 * (y1 - y0) + (r - y0) * (x1 - x0);
            std::int64_t den = y1 - y0;
            if (den < 0) {
                num = -num;
                den = -den;
            }
            if (num % den == 0) set(r, num / den);
            if (r < yhi) xs.push_back({num, den});
        }
        std::sort(xs.begin(), xs.end(), less);
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const auto from = std::max<std::int64_t>(floor_div(xs[k].num, xs[k].den) + 1, 0);
            const auto to = std::min<std::int64_t>(ceil_div(xs[k + 1].num, xs[k + 1].den) - 1, columns - 1);
            for (auto c = from; c <= to; ++c) set(r, c);
        }
    }
    return mask;
}

auto slice_geometry(const dicom::DicomObject& obj) -> SliceGeometry {
    SliceGeometry g;
    const auto pos = obj.numbers(dicom::tags::image_position_patient);
    if (pos.size() >= 3) {
        g.origin_x = pos[0];
        g.origin_y = pos[1];
        g.z = pos[2];
    }
    const auto spacing = obj.numbers(dicom::tags::pixel_spacing);
    if (spacing.size() >= 2 && spacing[0] > 0 && spacing[1] > 0) {
        g.row_spacing = spacing[0];
        g.column_spacing = spacing[1];
    }
    if (auto s = obj.number(dicom::tags::spacing_between_slices); s && *s > 0) {
        g.slice_spacing = *s;
    } else if (auto t = obj.number(dicom::tags::slice_thickness); t && *t > 0) {
        g.slice_spacing = *t;
    }
    const auto orient = obj.numbers(dicom::tags::image_orientation_patient);
    if (orient.size() == 6) std::copy(orient.begin(), orient.end(), g.orientation.begin());
    g.rows = static_cast<std::uint32_t>(obj.number(dicom::tags::rows).value_or(0));
    g.columns = static_cast<std::uint32_t>(obj.number(dicom::tags::columns).value_or(0));
    g.sop_instance_uid = obj.string(dicom::tags::sop_instance_uid).value_or("");
    return g;
}

auto rasterize_contours(const dicom::ContourSet& contours, const SliceGeometry& geometry) -> std::vector<OverlayLayer> {
    constexpr std::array<double, 6> identity{1, 0, 0, 0, 1, 0};
    for (std::size_t i = 0; i < 6; ++i) {
        if (std::abs(geometry.orientation[i] - identity[i]) > 1e-4) {
            throw Error(ErrorCode::unsupported_orientation, "only axial identity orientation is supported");
        }
    }
    std::vector<OverlayLayer> layers;
    for (const auto& roi : contours.rois) {
        OverlayLayer layer;
        layer.number = roi.roi_number;
        if (roi.color) layer.color = Rgb{(*roi.color)[0], (*roi.color)[1], (*roi.color)[2]};
        layer.mask = {geometry.rows, geometry.columns,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(geometry.rows) * geometry.columns, 0)};
        for (const auto& c : roi.contours) {
            if (c.points.size() < 3 || c.geometric_type == "POINT" || c.geometric_type == "OPEN_NONPLANAR") continue;
            const bool on_slice = c.referenced_sop_uid.empty()
                                      ? std::abs(c.points.front().z - geometry.z) <= geometry.slice_spacing / 2
                                      : c.referenced_sop_uid == geometry.sop_instance_uid;
            if (!on_slice) continue;
            std::vector<std::array<double, 2>> pts;
            pts.reserve(c.points.size());
            for (const auto& p : c.points) {
                pts.push_back({(p.x - geometry.origin_x) / geometry.column_spacing,
                               (p.y - geometry.origin_y) / geometry.row_spacing});
            }
            const auto m = rasterize_polygon(pts, geometry.rows, geometry.columns);
            for (std::size_t i = 0; i < m.bits.size(); ++i) layer.mask.bits[i] |= m.bits[i];
        }
        layers.push_back(std::move(layer));
    }
    return layers;
}

auto fit_letterbox(const RgbImage& image, std::uint32_t edge, Rgb background) -> RgbImage {
    RgbImage out{edge, edge, {}};
    out.rgb.resize(static_cast<std::size_t>(edge) * edge * 3);
    for (std::size_t i = 0; i < out.rgb.size(); i += 3) {
        out.rgb[i] = background.r;
        out.rgb[i + 1] = background.g;
        out.rgb[i + 2] = background.b;
    }
    if (image.rows == 0 || image.columns == 0) return out;
    const std::uint64_t r = image.rows;
    const std::uint64_t c = image.columns;
    std::uint64_t w = edge;
    std::uint64_t h = edge;
    if (c >= r) {
        h = std::max<std::uint64_t>(1, (2 * r * edge + c) / (2 * c));
    } else {
        w = std::max<std::uint64_t>(1, (2 * c * edge + r) / (2 * r));
    }
    const auto off_x = (edge - w) / 2;
    const auto off_y = (edge - h) / 2;
    for (std::uint64_t y = 0; y < h; ++y) {
        const auto sy = std::min(((2 * y + 1) * r) / (2 * h), r - 1);
        for (std::uint64_t x = 0; x < w; ++x) {
            const auto sx = std::min(((2 * x + 1) * c) / (2 * w), c - 1);
            const auto src = (sy * c + sx) * 3;
            const auto dst = ((off_y + y) * edge + off_x + x) * 3;
            std::copy_n(image.rgb.begin() + static_cast<std::ptrdiff_t>(src), 3,
                        out.rgb.begin() + static_cast<std::ptrdiff_t>(dst));
        }
    }
    return out;
}

auto glyph(char c) -> const Glyph& {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    const auto& f = font();
    auto it = f.find(c);
    return it == f.end() ? f.at('?') : it->second;
}

auto placeholder_card(std::string_view text, std::uint32_t edge, Rgb background) -> RgbImage {
    RgbImage card{edge, edge, {}};
    card.rgb.resize(static_cast<std::size_t>(edge) * edge * 3);
    for (std::size_t i = 0; i < card.rgb.size(); i += 3) {
        card.rgb[i] = background.r;
        card.rgb[i + 1] = background.g;
        card.rgb[i + 2] = background.b;
    }
    const std::uint32_t margin = 4;
    const auto max_chars = (edge - 2 * margin + 1) / 6;
    std::string shown(text.substr(0, std::min<std::size_t>(text.size(), max_chars)));
    if (shown.empty()) return card;
    const auto width = static_cast<std::uint32_t>(shown.size() * 6 - 1);
    const auto scale = std::max<std::uint32_t>(1, std::min((edge - 2 * margin) / width, edge / 28));
    const auto x0 = (edge - width * scale) / 2;
    const auto y0 = (edge - 7 * scale) / 2;
    for (std::size_t k = 0; k < shown.size(); ++k) {
        const auto& g = glyph(shown[k]);
        for (std::uint32_t row = 0; row < 7; ++row) {
            for (std::uint32_t col = 0; col < 5; ++col) {
                if (!((g[row] >> (4 - col)) & 1U)) continue;
                for (std::uint32_t dy = 0; dy < scale; ++dy) {
                    for (std::uint32_t dx = 0; dx < scale; ++dx) {
                        const auto x = x0 + (static_cast<std::uint32_t>(k) * 6 + col) * scale + dx;
                        const auto y = y0 + row * scale + dy;
                        const auto i = (static_cast<std::size_t>(y) * edge + x) * 3;
                        card.rgb[i] = kTextColor.r;
                        card.rgb[i + 1] = kTextColor.g;
                        card.rgb[i + 2] = kTextColor.b;
                    }
                }
            }
        }
    }
    return card;
}

}  // namespace curator::thumbnail
