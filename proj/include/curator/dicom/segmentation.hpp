/**
 * @file segmentation.hpp
 * @brief DICOM-SEG binary masks and RT Structure Set contours
 */
#pragma once

#include "curator/dicom/dataset.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace curator::dicom {

struct SegmentFrame {
    std::string referenced_sop_uid;             ///< empty when the frame carries no source reference
    std::optional<double> position_z;           ///< from PlanePositionSequence when present
    std::vector<std::uint8_t> mask;             ///< rows*columns, row-major, 0/1

    auto operator==(const SegmentFrame&) const -> bool = default;
};

struct Segment {
    std::uint32_t segment_number = 0;
    std::string label;
    std::vector<SegmentFrame> frames;

    auto operator==(const Segment&) const -> bool = default;
};

struct SegmentationMasks {
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    std::string referenced_series_uid;
    std::vector<Segment> segments;  ///< ascending segment_number, unique
};

/// Unpacks `count` bits starting at `bit_offset`, least-significant bit first within each byte.
[[nodiscard]] auto unpack_bits_lsb(std::span<const std::uint8_t> packed, std::size_t bit_offset, std::size_t count)
    -> std::vector<std::uint8_t>;

/// Inverse of unpack_bits_lsb for offset 0; trailing bits of the last byte are zero.
[[nodiscard]] auto pack_bits_lsb(std::span<const std::uint8_t> bits) -> std::vector<std::uint8_t>;

/**
 * @brief Extract binary segmentation masks.
 *
 * Frames are packed contiguously in the pixel payload; each frame is mapped
 * to its segment through SegmentIdentificationSequence and to its source
 * image through DerivationImageSequence / SourceImageSequence.
 *
 * @throws Error not_a_segmentation, unsupported_segmentation_type, missing_frame_mapping
 */
[[nodiscard]] auto parse_seg(const DicomObject& obj) -> SegmentationMasks;

struct Point3 {
    double x = 0;
    double y = 0;
    double z = 0;

    auto operator==(const Point3&) const -> bool = default;
};

struct Contour {
    std::string referenced_sop_uid;
    std::string geometric_type;
    std::vector<Point3> points;
};

struct Roi {
    std::uint32_t roi_number = 0;
    std::string name;
    std::optional<std::array<std::uint8_t, 3>> color;
    std::vector<Contour> contours;
};

struct ContourSet {
    std::string referenced_series_uid;
    std::vector<Roi> rois;
};

/**
 * @brief Extract ROI contours from an RT Structure Set.
 *
 * ROI names come from StructureSetROISequence by number; a contour ROI with
 * no matching entry is named `ROI_<n>`.
 *
 * @throws Error not_an_rtstruct, malformed_contour_data
 */
[[nodiscard]] auto parse_rtstruct(const DicomObject& obj) -> ContourSet;

}  // namespace curator::dicom
