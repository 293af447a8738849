/**
 * @file thumbnail.cpp
 */

#include "curator/thumbnail/thumbnail.hpp"

#include "curator/common/error.hpp"
#include "curator/common/fileio.hpp"
#include "curator/common/text.hpp"
#include "curator/thumbnail/png.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace curator::thumbnail {

namespace {

auto instance_number(const dicom::DicomObject& obj) -> double {
    return obj.number(dicom::tags::instance_number).value_or(std::numeric_limits<double>::infinity());
}

auto frames_of(const dicom::DicomObject& obj) -> std::uint32_t { return std::max<std::uint32_t>(1, dicom::frame_count(obj)); }

auto gray_of(const dicom::DicomObject& obj, std::uint32_t frame) -> GrayImage {
    const auto pixels = dicom::decode_pixels(obj, frame);
    const bool mono1 = text::trim(obj.string(dicom::tags::photometric_interpretation).value_or("")) == "MONOCHROME1";
    return window_to_gray(pixels, default_window(obj, pixels), mono1);
}

/// Overlay layers per display-order position, SEG and RTSTRUCT combined.
struct OverlayPlan {
    std::map<std::size_t, std::vector<OverlayLayer>> layers;  ///< keyed by instance index
};

auto empty_mask(std::uint32_t rows, std::uint32_t columns) -> Mask {
    return {rows, columns, std::vector<std::uint8_t>(static_cast<std::size_t>(rows) * columns, 0)};
}

auto plan_overlays(const SeriesInput& series, const std::vector<std::size_t>& order) -> OverlayPlan {
    OverlayPlan plan;
    std::map<std::string, std::size_t> by_sop;
    std::vector<SliceGeometry> geometry(series.instances.size());
    for (auto i : order) {
        geometry[i] = slice_geometry(*series.instances[i]);
        by_sop.emplace(geometry[i].sop_instance_uid, i);
    }
    auto by_z = [&](double z) -> std::optional<std::size_t> {
        for (auto i : order) {
            if (std::abs(geometry[i].z - z) <= geometry[i].slice_spacing / 2) return i;
        }
        return std::nullopt;
    };
    for (const auto* seg_obj : series.segmentations) {
        const auto seg = dicom::parse_seg(*seg_obj);
        for (const auto& segment : seg.segments) {
            std::map<std::size_t, Mask> per_instance;
            for (const auto& frame : segment.frames) {
                std::optional<std::size_t> target;
                if (auto it = by_sop.find(frame.referenced_sop_uid); it != by_sop.end()) {
                    target = it->second;
                } else if (frame.referenced_sop_uid.empty() && frame.position_z) {
                    target = by_z(*frame.position_z);
                }
                if (!target) continue;
                auto [it, fresh] = per_instance.try_emplace(*target, empty_mask(seg.rows, seg.columns));
                for (std::size_t k = 0; k < frame.mask.size() && k < it->second.bits.size(); ++k) {
                    it->second.bits[k] |= frame.mask[k];
                }
            }
            for (auto& [idx, mask] : per_instance) {
                plan.layers[idx].push_back({segment.segment_number, std::nullopt, std::move(mask)});
            }
        }
    }
    for (const auto* rt_obj : series.structure_sets) {
        const auto contours = dicom::parse_rtstruct(*rt_obj);
        for (auto i : order) {
            for (auto& layer : rasterize_contours(contours, geometry[i])) {
                if (layer.mask.area() > 0) plan.layers[i].push_back(std::move(layer));
            }
        }
    }
    return plan;
}

auto placeholder(const std::string& label, const ThumbnailConfig& cfg) -> RgbImage {
    return placeholder_card(label.empty() ? "?" : label, cfg.edge, cfg.background);
}

auto render_image(const SeriesInput& series, const ThumbnailConfig& cfg) -> RgbImage {
    const auto order = order_instances(series.instances);
    if (order.empty()) throw Error(ErrorCode::no_renderable_instance, "series has no instance with pixel data");
    auto choice = select_slice(series.instances);
    std::vector<OverlayLayer> layers;
    if (!series.segmentations.empty() || !series.structure_sets.empty()) {
        auto plan = plan_overlays(series, order);
        std::uint64_t best = 0;
        for (auto i : order) {
            auto it = plan.layers.find(i);
            if (it == plan.layers.end()) continue;
            std::uint64_t area = 0;
            for (const auto& l : it->second) area += l.mask.area();
            if (area > best) {
                best = area;
                choice = {i, (frames_of(*series.instances[i]) - 1) / 2};
            }
        }
        if (best > 0) layers = std::move(plan.layers[choice.instance]);
    }
    const auto gray = gray_of(*series.instances[choice.instance], choice.frame);
    return fit_letterbox(render_overlay(gray, std::move(layers), cfg), cfg.edge, cfg.background);
}

}  // namespace

auto order_instances(const std::vector<const dicom::DicomObject*>& instances) -> std::vector<std::size_t> {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (instances[i] != nullptr && instances[i]->has_pixel_data()) idx.push_back(i);
    }
    std::vector<std::string> sop(instances.size());
    std::vector<double> num(instances.size());
    for (auto i : idx) {
        sop[i] = instances[i]->string(dicom::tags::sop_instance_uid).value_or("");
        num[i] = instance_number(*instances[i]);
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (num[a] != num[b]) return num[a] < num[b];
        return sop[a] < sop[b];
    });
    return idx;
}

auto select_slice(const std::vector<const dicom::DicomObject*>& instances) -> SliceChoice {
    const auto order = order_instances(instances);
    if (order.empty()) throw Error(ErrorCode::no_renderable_instance, "series has no instance with pixel data");
    const auto pick = order[(order.size() - 1) / 2];
    return {pick, (frames_of(*instances[pick]) - 1) / 2};
}

auto is_non_image_modality(std::string_view modality) -> bool {
    static const std::vector<std::string> codes = {"SR", "PR", "KO", "SEG", "RTSTRUCT", "RTPLAN", "DOC", "REG"};
    return std::find(codes.begin(), codes.end(), text::trim(modality)) != codes.end();
}

auto render_thumbnail(const SeriesInput& series, const ThumbnailConfig& cfg) -> RgbImage {
    cfg.validate();
    if (is_non_image_modality(series.modality) || order_instances(series.instances).empty()) {
        return placeholder(series.modality, cfg);
    }
    try {
        return render_image(series, cfg);
    } catch (const Error&) {
        return placeholder("ERR " + series.modality, cfg);
    }
}

auto make_thumbnail(const SeriesInput& series, const ThumbnailConfig& cfg) -> std::vector<std::uint8_t> {
    return encode_png(render_thumbnail(series, cfg));
}

auto slice_count(const std::vector<const dicom::DicomObject*>& instances) -> std::size_t {
    std::size_t n = 0;
    for (auto i : order_instances(instances)) n += frames_of(*instances[i]);
    return n;
}

auto render_slice_png(const std::vector<const dicom::DicomObject*>& instances, std::size_t index)
    -> std::vector<std::uint8_t> {
    for (auto i : order_instances(instances)) {
        const auto frames = frames_of(*instances[i]);
        if (index < frames) return encode_png(gray_to_rgb(gray_of(*instances[i], static_cast<std::uint32_t>(index))));
        index -= frames;
    }
    throw Error(ErrorCode::frame_out_of_range, "slice index out of range");
}

ThumbnailCache::ThumbnailCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

auto ThumbnailCache::path_for(const std::string& series_uid, const ThumbnailConfig& cfg) const
    -> std::filesystem::path {
    return dir_ / series_uid.substr(0, 2) / (series_uid + "_" + cfg.hash() + ".png");
}

auto ThumbnailCache::load(const std::string& series_uid, const ThumbnailConfig& cfg) const
    -> std::optional<std::vector<std::uint8_t>> {
    const auto path = path_for(series_uid, cfg);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
    try {
        return fileio::read_bytes(path);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void ThumbnailCache::store(const std::string& series_uid, const ThumbnailConfig& cfg,
                           const std::vector<std::uint8_t>& png) const {
    const auto path = path_for(series_uid, cfg);
    std::filesystem::create_directories(path.parent_path());
    fileio::write_atomic(path, std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
}

void ThumbnailCache::invalidate(const std::string& series_uid) const {
    const auto sub = dir_ / series_uid.substr(0, 2);
    std::error_code ec;
    if (!std::filesystem::is_directory(sub, ec)) return;
    const auto prefix = series_uid + "_";
    for (const auto& entry : std::filesystem::directory_iterator(sub, ec)) {
        const auto name = entry.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && name.size() == prefix.size() + 16 + 4) std::filesystem::remove(entry.path(), ec);
    }
}

}  // namespace curator::thumbnail
