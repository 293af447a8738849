/**
 * @file nifti.cpp
 * @brief NIfTI-1 import
 */

#include "curator/dicom/nifti.hpp"

#include "curator/common/error.hpp"
#include "curator/common/text.hpp"
#include "curator/dicom/pixels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace curator::dicom {

namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::int16_t kUint8 = 2;
constexpr std::int16_t kInt16 = 4;
constexpr std::int16_t kFloat32 = 16;
constexpr std::string_view kSecondaryCaptureSopClass = "1.2.840.10008.5.1.4.1.1.7";

template <typename T>
auto read_at(std::span<const std::uint8_t> data, std::size_t offset) -> T {
    T v{};
    std::memcpy(&v, data.data() + offset, sizeof(T));
    return v;
}

auto to_decimal(unsigned __int128 v) -> std::string {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

auto ds(double v) -> std::string {
    // DS is limited to 16 characters
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    std::string s = buf;
    if (s.size() > 16) {
        std::snprintf(buf, sizeof(buf), "%.8g", v);
        s = buf;
    }
    return s;
}

auto str(DicomTag tag, Vr vr, std::string value) -> DataElement { return {tag, vr, Strings{std::move(value)}}; }
auto strs(DicomTag tag, Vr vr, Strings values) -> DataElement { return {tag, vr, std::move(values)}; }
auto us(DicomTag tag, std::int64_t v) -> DataElement { return {tag, vr::US, Ints{v}}; }

}  // namespace

auto derive_uid(std::string_view seed) -> std::string {
    const auto hi = text::fnv1a64(seed);
    const auto lo = text::fnv1a64(seed, 0x84222325cbf29ce4ULL);
    const unsigned __int128 v = (static_cast<unsigned __int128>(hi) << 64) | lo;
    return "2.25." + to_decimal(v);
}

auto nifti_to_dicom(std::span<const std::uint8_t> nifti, std::string_view uid_seed) -> std::vector<DicomObject> {
    if (nifti.size() < 352) {
        throw Error(ErrorCode::not_nifti, "input shorter than a NIfTI-1 single-file header");
    }
    if (read_at<std::int32_t>(nifti, 0) != static_cast<std::int32_t>(kHeaderSize)) {
        throw Error(ErrorCode::not_nifti, "sizeof_hdr is not 348");
    }
    if (std::memcmp(nifti.data() + 344, "n+1\0", 4) != 0) {
        throw Error(ErrorCode::not_nifti, "magic is not \"n+1\" (single-file NIfTI-1)");
    }
    std::array<std::int16_t, 8> dim{};
    for (std::size_t i = 0; i < 8; ++i) dim[i] = read_at<std::int16_t>(nifti, 40 + 2 * i);
    const auto datatype = read_at<std::int16_t>(nifti, 70);
    std::array<float, 8> pixdim{};
    for (std::size_t i = 0; i < 8; ++i) pixdim[i] = read_at<float>(nifti, 76 + 4 * i);
    const auto vox_offset = read_at<float>(nifti, 108);
    const auto scl_slope = read_at<float>(nifti, 112);
    const auto scl_inter = read_at<float>(nifti, 116);

    if (datatype != kUint8 && datatype != kInt16 && datatype != kFloat32) {
        throw Error(ErrorCode::unsupported_datatype, "NIfTI datatype " + std::to_string(datatype) +
                                                         " is not uint8, int16 or float32");
    }
    if (dim[0] != 2 && dim[0] != 3) {
        throw Error(ErrorCode::unsupported_dims, "NIfTI dim[0]=" + std::to_string(dim[0]) + " (2 or 3 supported)");
    }
    const std::int64_t nx = dim[1];
    const std::int64_t ny = dim[2];
    const std::int64_t nz = dim[0] == 3 ? dim[3] : 1;
    if (nx <= 0 || ny <= 0 || nz <= 0 || nx > 65535 || ny > 65535) {
        throw Error(ErrorCode::unsupported_dims, "NIfTI dimensions out of range");
    }
    const std::size_t width = datatype == kUint8 ? 1 : datatype == kInt16 ? 2 : 4;
    const std::size_t offset = vox_offset >= static_cast<float>(kHeaderSize) ? static_cast<std::size_t>(vox_offset) : 352;
    const std::size_t per_slice = static_cast<std::size_t>(nx * ny);
    const std::size_t total = per_slice * static_cast<std::size_t>(nz);
    if (nifti.size() < offset + total * width) {
        throw Error(ErrorCode::truncated_element, "NIfTI voxel data shorter than dim implies");
    }

    const bool has_scaling = scl_slope != 0.0F && std::isfinite(scl_slope) && std::isfinite(scl_inter);
    std::uint32_t bits = 16;
    bool is_signed = false;
    double slope = 1.0;
    double intercept = 0.0;
    std::vector<std::int32_t> stored(total);

    if (datatype == kFloat32) {
        std::vector<double> values(total);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < total; ++i) {
            double v = read_at<float>(nifti, offset + i * 4);
            if (!std::isfinite(v)) v = 0;
            if (has_scaling) v = v * scl_slope + scl_inter;
            values[i] = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        intercept = lo;
        slope = hi > lo ? (hi - lo) / 65535.0 : 1.0;
        for (std::size_t i = 0; i < total; ++i) {
            stored[i] = hi > lo ? static_cast<std::int32_t>(std::lround((values[i] - lo) / slope)) : 0;
        }
    } else {
        bits = datatype == kUint8 ? 8 : 16;
        is_signed = datatype == kInt16;
        for (std::size_t i = 0; i < total; ++i) {
            stored[i] = datatype == kUint8 ? nifti[offset + i] : read_at<std::int16_t>(nifti, offset + i * 2);
        }
        if (has_scaling) {
            slope = scl_slope;
            intercept = scl_inter;
        }
    }

    const std::string seed(uid_seed);
    const auto study_uid = derive_uid(seed + "/study");
    const auto series_uid = derive_uid(seed + "/series");
    const auto frame_uid = derive_uid(seed + "/frame-of-reference");
    const double dx = pixdim[1] > 0 ? pixdim[1] : 1.0;
    const double dy = pixdim[2] > 0 ? pixdim[2] : 1.0;
    const double dz = dim[0] == 3 && pixdim[3] > 0 ? pixdim[3] : 1.0;

    std::vector<DicomObject> out;
    out.reserve(static_cast<std::size_t>(nz));
    for (std::int64_t z = 0; z < nz; ++z) {
        const auto sop_uid = derive_uid(seed + "/instance/" + std::to_string(z));
        DicomObject obj;
        obj.transfer_syntax = TransferSyntax::explicit_vr_little_endian;
        obj.meta = {
            DataElement{tags::file_meta_group_length, vr::UL, Ints{0}},
            DataElement{DicomTag{0x0002, 0x0001}, vr::OB, Bytes{0x00, 0x01}},
            str(tags::media_storage_sop_class_uid, vr::UI, std::string(kSecondaryCaptureSopClass)),
            str(tags::media_storage_sop_instance_uid, vr::UI, sop_uid),
            str(tags::transfer_syntax_uid, vr::UI, std::string(kExplicitVrLittleEndianUid)),
            str(tags::implementation_class_uid, vr::UI, "2.25.1"),
        };
        std::vector<DataElement> e = {
            str(DicomTag{0x0008, 0x0064}, vr::CS, "WSD"),
            str(tags::sop_class_uid, vr::UI, std::string(kSecondaryCaptureSopClass)),
            str(tags::sop_instance_uid, vr::UI, sop_uid),
            str(tags::modality, vr::CS, "OT"),
            str(tags::patient_name, vr::PN, "NIFTI_IMPORT"),
            str(tags::patient_id, vr::LO, "NIFTI_IMPORT"),
            str(tags::slice_thickness, vr::DS, ds(dz)),
            str(tags::study_instance_uid, vr::UI, study_uid),
            str(tags::series_instance_uid, vr::UI, series_uid),
            str(tags::instance_number, vr::IS, std::to_string(z + 1)),
            strs(tags::image_position_patient, vr::DS, {"0", "0", ds(static_cast<double>(z) * dz)}),
            strs(tags::image_orientation_patient, vr::DS, {"1", "0", "0", "0", "1", "0"}),
            str(tags::frame_of_reference_uid, vr::UI, frame_uid),
            us(tags::samples_per_pixel, 1),
            str(tags::photometric_interpretation, vr::CS, "MONOCHROME2"),
            us(tags::rows, ny),
            us(tags::columns, nx),
            strs(tags::pixel_spacing, vr::DS, {ds(dy), ds(dx)}),
            us(tags::bits_allocated, bits),
            us(tags::bits_stored, bits),
            us(tags::high_bit, bits - 1),
            us(tags::pixel_representation, is_signed ? 1 : 0),
            str(tags::rescale_intercept, vr::DS, ds(intercept)),
            str(tags::rescale_slope, vr::DS, ds(slope)),
        };
        std::sort(e.begin(), e.end(), [](const DataElement& a, const DataElement& b) { return a.tag < b.tag; });
        obj.elements = std::move(e);
        const std::span<const std::int32_t> slice(stored.data() + static_cast<std::size_t>(z) * per_slice, per_slice);
        obj.pixel_payload = PixelPayload{bits == 8 ? vr::OB : vr::OW, encode_stored_values(slice, bits)};
        out.push_back(std::move(obj));
    }
    return out;
}

}  // namespace curator::dicom
