/**
 * @file fixtures.hpp
 * @brief Programmatic DICOM / NIfTI fixtures shared by the test suites
 */
#pragma once

#include "curator/dicom/dataset.hpp"
#include "curator/dicom/segmentation.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace curator::fixture {

/// String element with the dictionary VR.
auto el(dicom::DicomTag tag, const std::string& value) -> dicom::DataElement;
auto el_multi(dicom::DicomTag tag, std::vector<std::string> values) -> dicom::DataElement;
auto el_us(dicom::DicomTag tag, std::int64_t value) -> dicom::DataElement;
auto el_seq(dicom::DicomTag tag, std::vector<dicom::Item> items) -> dicom::DataElement;
auto item(std::vector<dicom::DataElement> elements) -> dicom::Item;

/// File meta for an object with the given SOP uid and syntax.
auto make_meta(const std::string& sop_class, const std::string& sop_uid, dicom::TransferSyntax ts)
    -> std::vector<dicom::DataElement>;

struct ImageSpec {
    std::string patient_id = "P001";
    std::string study_uid = "1.2.3.4";
    std::string series_uid = "1.2.3.4.1";
    std::string sop_uid = "1.2.3.4.1.1";
    std::optional<int> instance_number = 1;
    std::string modality = "CT";
    std::string manufacturer = "SIEMENS";
    std::string kernel = "B30f";
    std::string body_part = "CHEST";
    std::uint32_t rows = 16;
    std::uint32_t columns = 16;
    std::uint32_t frames = 1;
    bool is_signed = true;
    std::uint32_t bits_allocated = 16;
    std::optional<double> rescale_slope = 1.0;
    std::optional<double> rescale_intercept = -1024.0;
    std::optional<std::pair<double, double>> window;  ///< center, width
    double z = 0.0;
    double spacing = 1.0;
    std::vector<std::int32_t> stored;  ///< rows*columns*frames; generated gradient when empty
    std::vector<dicom::DataElement> extra;
    dicom::TransferSyntax syntax = dicom::TransferSyntax::explicit_vr_little_endian;
};

auto make_image(const ImageSpec& spec) -> dicom::DicomObject;

struct SegFrameSpec {
    std::uint32_t segment_number = 1;
    std::string referenced_sop_uid;
    std::vector<std::uint8_t> mask;  ///< rows*columns of 0/1
};

struct SegSpec {
    std::string series_uid = "1.2.3.4.900";
    std::string sop_uid = "1.2.3.4.900.1";
    std::string study_uid = "1.2.3.4";
    std::string patient_id = "P001";
    std::string referenced_series_uid = "1.2.3.4.1";
    std::string segmentation_type = "BINARY";
    std::uint32_t rows = 16;
    std::uint32_t columns = 16;
    std::vector<std::pair<std::uint32_t, std::string>> segments = {{1, "Liver"}};
    std::vector<SegFrameSpec> frames;
};

auto make_seg(const SegSpec& spec) -> dicom::DicomObject;

struct RoiSpec {
    std::uint32_t number = 1;
    std::optional<std::string> name = "GTV";
    std::optional<std::array<int, 3>> color;
    std::vector<std::pair<std::string, std::vector<double>>> contours;  ///< referenced sop uid, flat xyz
};

struct RtStructSpec {
    std::string series_uid = "1.2.3.4.800";
    std::string sop_uid = "1.2.3.4.800.1";
    std::string study_uid = "1.2.3.4";
    std::string patient_id = "P001";
    std::string referenced_series_uid = "1.2.3.4.1";
    std::vector<RoiSpec> rois;
    bool include_structure_set = true;
};

auto make_rtstruct(const RtStructSpec& spec) -> dicom::DicomObject;

struct NiftiSpec {
    std::vector<std::int16_t> dim = {3, 4, 4, 2};
    std::int16_t datatype = 4;  ///< 2 uint8, 4 int16, 16 float32
    std::vector<float> pixdim = {1.0F, 0.5F, 0.5F, 2.0F};
    std::string magic = std::string("n+1\0", 4);
    std::vector<std::uint8_t> voxels;
};

auto make_nifti(const NiftiSpec& spec) -> std::vector<std::uint8_t>;

/// Random object for parser round-trips: nested sequences, multi-frame pixels,
/// values restricted to what the chosen syntax can carry.
auto random_object(std::mt19937_64& rng, dicom::TransferSyntax ts, int index) -> dicom::DicomObject;

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Writes the object as `<dir>/<name>` and returns the path.
auto write_object(const std::filesystem::path& dir, const std::string& name, const dicom::DicomObject& obj)
    -> std::filesystem::path;

/// Unique scratch directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    auto operator=(const TempDir&) -> TempDir& = delete;
    [[nodiscard]] auto path() const -> const std::filesystem::path& { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace curator::fixture
