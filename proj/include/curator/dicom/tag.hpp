/**
 * @file tag.hpp
 * @brief DICOM tag value type and frequently used tag constants
 */
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace curator::dicom {

struct DicomTag {
    std::uint16_t group = 0;
    std::uint16_t element = 0;

    constexpr auto operator<=>(const DicomTag&) const = default;

    [[nodiscard]] constexpr auto is_private() const -> bool { return (group & 1U) != 0; }
    [[nodiscard]] constexpr auto combined() const -> std::uint32_t {
        return (static_cast<std::uint32_t>(group) << 16) | element;
    }

    /// `(GGGG,EEEE)`, uppercase hex.
    [[nodiscard]] auto to_string() const -> std::string;

    /// Accepts `(GGGG,EEEE)`, `GGGG,EEEE` or `GGGGEEEE`.
    [[nodiscard]] static auto parse(std::string_view text) -> std::optional<DicomTag>;
};

namespace tags {
inline constexpr DicomTag file_meta_group_length{0x0002, 0x0000};
inline constexpr DicomTag media_storage_sop_class_uid{0x0002, 0x0002};
inline constexpr DicomTag media_storage_sop_instance_uid{0x0002, 0x0003};
inline constexpr DicomTag transfer_syntax_uid{0x0002, 0x0010};
inline constexpr DicomTag implementation_class_uid{0x0002, 0x0012};

inline constexpr DicomTag specific_character_set{0x0008, 0x0005};
inline constexpr DicomTag image_type{0x0008, 0x0008};
inline constexpr DicomTag sop_class_uid{0x0008, 0x0016};
inline constexpr DicomTag sop_instance_uid{0x0008, 0x0018};
inline constexpr DicomTag study_date{0x0008, 0x0020};
inline constexpr DicomTag modality{0x0008, 0x0060};
inline constexpr DicomTag manufacturer{0x0008, 0x0070};
inline constexpr DicomTag series_description{0x0008, 0x103E};
inline constexpr DicomTag referenced_series_sequence{0x0008, 0x1115};
inline constexpr DicomTag referenced_instance_sequence{0x0008, 0x114A};
inline constexpr DicomTag referenced_sop_class_uid{0x0008, 0x1150};
inline constexpr DicomTag referenced_sop_instance_uid{0x0008, 0x1155};
inline constexpr DicomTag source_image_sequence{0x0008, 0x2112};
inline constexpr DicomTag derivation_image_sequence{0x0008, 0x9124};

inline constexpr DicomTag patient_name{0x0010, 0x0010};
inline constexpr DicomTag patient_id{0x0010, 0x0020};

inline constexpr DicomTag body_part_examined{0x0018, 0x0015};
inline constexpr DicomTag slice_thickness{0x0018, 0x0050};
inline constexpr DicomTag spacing_between_slices{0x0018, 0x0088};
inline constexpr DicomTag convolution_kernel{0x0018, 0x1210};

inline constexpr DicomTag study_instance_uid{0x0020, 0x000D};
inline constexpr DicomTag series_instance_uid{0x0020, 0x000E};
inline constexpr DicomTag series_number{0x0020, 0x0011};
inline constexpr DicomTag instance_number{0x0020, 0x0013};
inline constexpr DicomTag image_position_patient{0x0020, 0x0032};
inline constexpr DicomTag image_orientation_patient{0x0020, 0x0037};
inline constexpr DicomTag frame_of_reference_uid{0x0020, 0x0052};
inline constexpr DicomTag plane_position_sequence{0x0020, 0x9113};

inline constexpr DicomTag samples_per_pixel{0x0028, 0x0002};
inline constexpr DicomTag photometric_interpretation{0x0028, 0x0004};
inline constexpr DicomTag number_of_frames{0x0028, 0x0008};
inline constexpr DicomTag rows{0x0028, 0x0010};
inline constexpr DicomTag columns{0x0028, 0x0011};
inline constexpr DicomTag pixel_spacing{0x0028, 0x0030};
inline constexpr DicomTag bits_allocated{0x0028, 0x0100};
inline constexpr DicomTag bits_stored{0x0028, 0x0101};
inline constexpr DicomTag high_bit{0x0028, 0x0102};
inline constexpr DicomTag pixel_representation{0x0028, 0x0103};
inline constexpr DicomTag window_center{0x0028, 0x1050};
inline constexpr DicomTag window_width{0x0028, 0x1051};
inline constexpr DicomTag rescale_intercept{0x0028, 0x1052};
inline constexpr DicomTag rescale_slope{0x0028, 0x1053};

inline constexpr DicomTag segmentation_type{0x0062, 0x0001};
inline constexpr DicomTag segment_sequence{0x0062, 0x0002};
inline constexpr DicomTag segment_number{0x0062, 0x0004};
inline constexpr DicomTag segment_label{0x0062, 0x0005};
inline constexpr DicomTag segment_identification_sequence{0x0062, 0x000A};
inline constexpr DicomTag referenced_segment_number{0x0062, 0x000B};

inline constexpr DicomTag referenced_frame_of_reference_sequence{0x3006, 0x0010};
inline constexpr DicomTag rt_referenced_study_sequence{0x3006, 0x0012};
inline constexpr DicomTag rt_referenced_series_sequence{0x3006, 0x0014};
inline constexpr DicomTag contour_image_sequence{0x3006, 0x0016};
inline constexpr DicomTag structure_set_roi_sequence{0x3006, 0x0020};
inline constexpr DicomTag roi_number{0x3006, 0x0022};
inline constexpr DicomTag roi_name{0x3006, 0x0026};
inline constexpr DicomTag roi_display_color{0x3006, 0x002A};
inline constexpr DicomTag roi_contour_sequence{0x3006, 0x0039};
inline constexpr DicomTag contour_sequence{0x3006, 0x0040};
inline constexpr DicomTag contour_geometric_type{0x3006, 0x0042};
inline constexpr DicomTag number_of_contour_points{0x3006, 0x0046};
inline constexpr DicomTag contour_data{0x3006, 0x0050};
inline constexpr DicomTag referenced_roi_number{0x3006, 0x0084};

inline constexpr DicomTag per_frame_functional_groups_sequence{0x5200, 0x9230};
inline constexpr DicomTag pixel_data{0x7FE0, 0x0010};

inline constexpr DicomTag item{0xFFFE, 0xE000};
inline constexpr DicomTag item_delimitation{0xFFFE, 0xE00D};
inline constexpr DicomTag sequence_delimitation{0xFFFE, 0xE0DD};
inline constexpr DicomTag dataset_trailing_padding{0xFFFC, 0xFFFC};
}  // namespace tags

}  // namespace curator::dicom
