/**
 * @file nifti.hpp
 * @brief NIfTI-1 single-file volumes to secondary-capture DICOM slices
 */
#pragma once

#include "curator/dicom/dataset.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace curator::dicom {

/// Root under which imported UIDs are generated (`2.25.<128-bit decimal>`).
[[nodiscard]] auto derive_uid(std::string_view seed) -> std::string;

/**
 * @brief Convert a NIfTI-1 `.nii` image into one DICOM object per z slice.
 *
 * Only geometry survives the conversion: rows/columns, PixelSpacing,
 * SliceThickness and an axial ImagePositionPatient. Modality is "OT" and
 * PatientName "NIFTI_IMPORT". float32 voxels are quantized to uint16 over the
 * volume [min, max] with matching RescaleSlope/RescaleIntercept. UIDs derive
 * from `uid_seed`, so equal inputs give byte-identical output.
 *
 * @throws Error not_nifti, unsupported_datatype, unsupported_dims
 */
[[nodiscard]] auto nifti_to_dicom(std::span<const std::uint8_t> nifti, std::string_view uid_seed)
    -> std::vector<DicomObject>;

}  // namespace curator::dicom
