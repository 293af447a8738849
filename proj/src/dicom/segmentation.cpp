/**
 * @file segmentation.cpp
 * @brief DICOM-SEG and RT Structure Set extraction
 */

#include "curator/dicom/segmentation.hpp"

#include "curator/common/error.hpp"
#include "curator/common/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace curator::dicom {

namespace {

auto first_item(const Item& parent, DicomTag seq) -> const Item* {
    const auto& items = get_items(parent, seq);
    return items.empty() ? nullptr : &items.front();
}

auto source_sop_uid(const Item& frame_group) -> std::string {
    for (const auto& derivation : get_items(frame_group, tags::derivation_image_sequence)) {
        for (const auto& source : get_items(derivation, tags::source_image_sequence)) {
            if (auto uid = get_string(source, tags::referenced_sop_instance_uid)) return *uid;
        }
    }
    return {};
}

auto referenced_segment(const Item* group) -> std::optional<std::uint32_t> {
    if (group == nullptr) return std::nullopt;
    const auto* ident = first_item(*group, tags::segment_identification_sequence);
    if (ident == nullptr) return std::nullopt;
    const auto n = get_number(*ident, tags::referenced_segment_number);
    if (!n || *n < 1) return std::nullopt;
    return static_cast<std::uint32_t>(*n);
}

auto plane_z(const Item* group) -> std::optional<double> {
    if (group == nullptr) return std::nullopt;
    const auto* plane = first_item(*group, tags::plane_position_sequence);
    if (plane == nullptr) return std::nullopt;
    return get_number(*plane, tags::image_position_patient, 2);
}

}  // namespace

auto unpack_bits_lsb(std::span<const std::uint8_t> packed, std::size_t bit_offset, std::size_t count)
    -> std::vector<std::uint8_t> {
    std::vector<std::uint8_t> out(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t bit = bit_offset + i;
        const std::size_t byte = bit >> 3;
        if (byte >= packed.size()) break;
        out[i] = static_cast<std::uint8_t>((packed[byte] >> (bit & 7U)) & 1U);
    }
    return out;
}

auto pack_bits_lsb(std::span<const std::uint8_t> bits) -> std::vector<std::uint8_t> {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) out[i >> 3] = static_cast<std::uint8_t>(out[i >> 3] | (1U << (i & 7U)));
    }
    return out;
}

auto parse_seg(const DicomObject& obj) -> SegmentationMasks {
    if (obj.string(tags::modality).value_or("") != "SEG") {
        throw Error(ErrorCode::not_a_segmentation, "Modality is not SEG");
    }
    const auto type = obj.string(tags::segmentation_type).value_or("");
    if (type != "BINARY") {
        throw Error(ErrorCode::unsupported_segmentation_type,
                    "segmentation type '" + type + "' is not supported (BINARY only)");
    }
    const auto desc = obj.pixel_descriptor();
    if (desc.bits_allocated != 1) {
        throw Error(ErrorCode::unsupported_segmentation_type,
                    "binary segmentation must have BitsAllocated 1, found " + std::to_string(desc.bits_allocated));
    }
    if (!obj.pixel_payload) {
        throw Error(ErrorCode::no_pixel_data, "segmentation has no pixel data");
    }

    SegmentationMasks out;
    out.rows = desc.rows;
    out.columns = desc.columns;
    for (const auto& series : obj.items(tags::referenced_series_sequence)) {
        if (auto uid = get_string(series, tags::series_instance_uid)) {
            out.referenced_series_uid = *uid;
            break;
        }
    }

    std::map<std::uint32_t, Segment> segments;
    for (const auto& item : obj.items(tags::segment_sequence)) {
        const auto n = get_number(item, tags::segment_number);
        if (!n || *n < 1) continue;
        const auto number = static_cast<std::uint32_t>(*n);
        if (segments.count(number) != 0) continue;
        segments[number] = Segment{number, get_string(item, tags::segment_label).value_or(""), {}};
    }

    const std::size_t frame_bits = static_cast<std::size_t>(desc.rows) * desc.columns;
    const auto& per_frame = obj.items(tags::per_frame_functional_groups_sequence);
    const auto& shared_items = obj.items(DicomTag{0x5200, 0x9229});
    const Item* shared = shared_items.empty() ? nullptr : &shared_items.front();
    if (obj.pixel_payload->bytes.size() * 8 < frame_bits * desc.frames) {
        throw Error(ErrorCode::truncated_element, "segmentation pixel payload shorter than its frames");
    }

    for (std::uint32_t f = 0; f < desc.frames; ++f) {
        const Item* group = f < per_frame.size() ? &per_frame[f] : nullptr;
        auto number = referenced_segment(group);
        if (!number) number = referenced_segment(shared);
        if (!number && segments.size() == 1) number = segments.begin()->first;
        if (!number) {
            throw Error(ErrorCode::missing_frame_mapping,
                        "frame " + std::to_string(f) + " has no referenced segment number");
        }
        auto it = segments.find(*number);
        if (it == segments.end()) {
            throw Error(ErrorCode::missing_frame_mapping, "frame " + std::to_string(f) + " references segment " +
                                                             std::to_string(*number) + " which is not declared");
        }
        SegmentFrame frame;
        if (group != nullptr) {
            frame.referenced_sop_uid = source_sop_uid(*group);
            frame.position_z = plane_z(group);
        }
        frame.mask = unpack_bits_lsb(obj.pixel_payload->bytes, frame_bits * f, frame_bits);
        it->second.frames.push_back(std::move(frame));
    }

    for (auto& [number, seg] : segments) out.segments.push_back(std::move(seg));
    return out;
}

auto parse_rtstruct(const DicomObject& obj) -> ContourSet {
    if (obj.string(tags::modality).value_or("") != "RTSTRUCT") {
        throw Error(ErrorCode::not_an_rtstruct, "Modality is not RTSTRUCT");
    }
    ContourSet out;
    for (const auto& frame_ref : obj.items(tags::referenced_frame_of_reference_sequence)) {
        for (const auto& study : get_items(frame_ref, tags::rt_referenced_study_sequence)) {
            for (const auto& series : get_items(study, tags::rt_referenced_series_sequence)) {
                if (auto uid = get_string(series, tags::series_instance_uid); uid && out.referenced_series_uid.empty()) {
                    out.referenced_series_uid = *uid;
                }
            }
        }
    }
    if (out.referenced_series_uid.empty()) {
        for (const auto& series : obj.items(tags::referenced_series_sequence)) {
            if (auto uid = get_string(series, tags::series_instance_uid)) {
                out.referenced_series_uid = *uid;
                break;
            }
        }
    }

    std::map<std::uint32_t, std::string> names;
    for (const auto& item : obj.items(tags::structure_set_roi_sequence)) {
        const auto n = get_number(item, tags::roi_number);
        if (!n) continue;
        names.emplace(static_cast<std::uint32_t>(*n), get_string(item, tags::roi_name).value_or(""));
    }

    std::map<std::uint32_t, Roi> rois;
    for (const auto& item : obj.items(tags::roi_contour_sequence)) {
        const auto n = get_number(item, tags::referenced_roi_number);
        if (!n) continue;
        const auto number = static_cast<std::uint32_t>(*n);
        auto& roi = rois[number];
        roi.roi_number = number;
        if (const auto name = names.find(number); name != names.end() && !name->second.empty()) {
            roi.name = name->second;
        } else {
            roi.name = "ROI_" + std::to_string(number);
        }
        const auto color = get_numbers(item, tags::roi_display_color);
        if (color.size() == 3) {
            std::array<std::uint8_t, 3> rgb{};
            for (std::size_t i = 0; i < 3; ++i) {
                rgb[i] = static_cast<std::uint8_t>(std::clamp(color[i], 0.0, 255.0));
            }
            roi.color = rgb;
        }
        for (const auto& contour_item : get_items(item, tags::contour_sequence)) {
            Contour contour;
            contour.geometric_type = get_string(contour_item, tags::contour_geometric_type).value_or("");
            for (const auto& image : get_items(contour_item, tags::contour_image_sequence)) {
                if (auto uid = get_string(image, tags::referenced_sop_instance_uid)) {
                    contour.referenced_sop_uid = *uid;
                    break;
                }
            }
            const auto* data = find_element(contour_item, tags::contour_data);
            std::vector<double> coords;
            if (data != nullptr) {
                if (const auto* strings = data->strings()) {
                    for (const auto& token : *strings) {
                        const auto v = text::parse_double(token);
                        if (!v) {
                            throw Error(ErrorCode::malformed_contour_data,
                                        "ROI " + std::to_string(number) + ": non-numeric ContourData token '" +
                                            token + "'");
                        }
                        coords.push_back(*v);
                    }
                } else {
                    coords = get_numbers(contour_item, tags::contour_data);
                }
            }
            if (coords.size() % 3 != 0) {
                throw Error(ErrorCode::malformed_contour_data,
                            "ROI " + std::to_string(number) + ": ContourData has " + std::to_string(coords.size()) +
                                " values, not a multiple of 3");
            }
            for (std::size_t i = 0; i < coords.size(); i += 3) {
                contour.points.push_back({coords[i], coords[i + 1], coords[i + 2]});
            }
            if (contour.geometric_type == "CLOSED_PLANAR" && contour.points.size() < 3) {
                throw Error(ErrorCode::malformed_contour_data,
                            "ROI " + std::to_string(number) + ": CLOSED_PLANAR contour with fewer than 3 points");
            }
            roi.contours.push_back(std::move(contour));
        }
    }
    for (const auto& [number, name] : names) {
        if (rois.count(number) == 0) {
            Roi roi;
            roi.roi_number = number;
            roi.name = name.empty() ? "ROI_" + std::to_string(number) : name;
            rois.emplace(number, std::move(roi));
        }
    }
    for (auto& [number, roi] : rois) out.rois.push_back(std::move(roi));
    return out;
}

}  // namespace curator::dicom
