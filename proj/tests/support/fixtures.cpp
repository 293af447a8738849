/**
 * @file fixtures.cpp
 */

#include "fixtures.hpp"

#include "curator/dicom/dictionary.hpp"
#include "curator/dicom/parser.hpp"
#include "curator/dicom/pixels.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <unistd.h>

namespace curator::fixture {

using namespace curator::dicom;

namespace {

constexpr std::string_view kCtImageStorage = "1.2.840.10008.5.1.4.1.1.2";
constexpr std::string_view kSegStorage = "1.2.840.10008.5.1.4.1.1.66.4";
constexpr std::string_view kRtStructStorage = "1.2.840.10008.5.1.4.1.1.481.3";

void sort_elements(std::vector<DataElement>& list) {
    std::sort(list.begin(), list.end(), [](const DataElement& a, const DataElement& b) { return a.tag < b.tag; });
}

auto fmt(double v) -> std::string {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

template <typename T>
void put(std::vector<std::uint8_t>& out, std::size_t offset, T value) {
    std::memcpy(out.data() + offset, &value, sizeof(T));
}

}  // namespace

auto el(DicomTag tag, const std::string& value) -> DataElement {
    return DataElement{tag, lookup_tag(tag).vr, Strings{value}};
}

auto el_multi(DicomTag tag, std::vector<std::string> values) -> DataElement {
    return DataElement{tag, lookup_tag(tag).vr, Strings(std::move(values))};
}

auto el_us(DicomTag tag, std::int64_t value) -> DataElement {
    return DataElement{tag, lookup_tag(tag).vr, Ints{value}};
}

auto el_seq(DicomTag tag, std::vector<Item> items) -> DataElement {
    return DataElement{tag, vr::SQ, Sequence(std::move(items))};
}

auto item(std::vector<DataElement> elements) -> Item {
    sort_elements(elements);
    return elements;
}

auto make_meta(const std::string& sop_class, const std::string& sop_uid, TransferSyntax ts) -> std::vector<DataElement> {
    return {
        DataElement{tags::file_meta_group_length, vr::UL, Ints{0}},
        DataElement{DicomTag{0x0002, 0x0001}, vr::OB, Bytes{0x00, 0x01}},
        DataElement{tags::media_storage_sop_class_uid, vr::UI, Strings{sop_class}},
        DataElement{tags::media_storage_sop_instance_uid, vr::UI, Strings{sop_uid}},
        DataElement{tags::transfer_syntax_uid, vr::UI, Strings{std::string(transfer_syntax_uid(ts))}},
        DataElement{tags::implementation_class_uid, vr::UI, Strings{"1.2.826.0.1.3680043.9.7"}},
    };
}

auto make_image(const ImageSpec& spec) -> DicomObject {
    DicomObject obj;
    obj.transfer_syntax = spec.syntax;
    obj.meta = make_meta(std::string(kCtImageStorage), spec.sop_uid, spec.syntax);
    std::vector<DataElement> e = {
        el(tags::sop_class_uid, std::string(kCtImageStorage)),
        el(tags::sop_instance_uid, spec.sop_uid),
        el(tags::modality, spec.modality),
        el(tags::patient_id, spec.patient_id),
        el(tags::patient_name, "TEST^" + spec.patient_id),
        el(tags::study_instance_uid, spec.study_uid),
        el(tags::series_instance_uid, spec.series_uid),
        el_multi(tags::image_position_patient, {"0", "0", fmt(spec.z)}),
        el_multi(tags::image_orientation_patient, {"1", "0", "0", "0", "1", "0"}),
        el_multi(tags::pixel_spacing, {fmt(spec.spacing), fmt(spec.spacing)}),
        el_us(tags::samples_per_pixel, 1),
        el(tags::photometric_interpretation, "MONOCHROME2"),
        el_us(tags::rows, spec.rows),
        el_us(tags::columns, spec.columns),
        el_us(tags::bits_allocated, spec.bits_allocated),
        el_us(tags::bits_stored, spec.bits_allocated),
        el_us(tags::high_bit, spec.bits_allocated - 1),
        el_us(tags::pixel_representation, spec.is_signed ? 1 : 0),
    };
    if (!spec.manufacturer.empty()) e.push_back(el(tags::manufacturer, spec.manufacturer));
    if (!spec.kernel.empty()) e.push_back(el(tags::convolution_kernel, spec.kernel));
    if (!spec.body_part.empty()) e.push_back(el(tags::body_part_examined, spec.body_part));
    if (spec.instance_number) e.push_back(el(tags::instance_number, std::to_string(*spec.instance_number)));
    if (spec.frames > 1) e.push_back(el(tags::number_of_frames, std::to_string(spec.frames)));
    if (spec.rescale_slope) e.push_back(el(tags::rescale_slope, fmt(*spec.rescale_slope)));
    if (spec.rescale_intercept) e.push_back(el(tags::rescale_intercept, fmt(*spec.rescale_intercept)));
    if (spec.window) {
        e.push_back(el(tags::window_center, fmt(spec.window->first)));
        e.push_back(el(tags::window_width, fmt(spec.window->second)));
    }
    for (const auto& x : spec.extra) {
        e.erase(std::remove_if(e.begin(), e.end(), [&](const DataElement& d) { return d.tag == x.tag; }), e.end());
        e.push_back(x);
    }
    sort_elements(e);
    obj.elements = std::move(e);

    const std::size_t n = static_cast<std::size_t>(spec.rows) * spec.columns * spec.frames;
    std::vector<std::int32_t> stored = spec.stored;
    if (stored.empty()) {
        stored.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = (i / spec.columns) % spec.rows;
            const auto c = i % spec.columns;
            stored[i] = spec.bits_allocated == 8 ? static_cast<std::int32_t>((r * 8 + c * 4) % 256)
                                                 : static_cast<std::int32_t>(r * 64 + c * 16);
        }
    }
    obj.pixel_payload = PixelPayload{spec.bits_allocated == 8 ? vr::OB : vr::OW,
                                     encode_stored_values(stored, spec.bits_allocated)};
    return obj;
}

auto make_seg(const SegSpec& spec) -> DicomObject {
    DicomObject obj;
    obj.meta = make_meta(std::string(kSegStorage), spec.sop_uid, TransferSyntax::explicit_vr_little_endian);
    std::vector<Item> segments;
    for (const auto& [number, label] : spec.segments) {
        segments.push_back(item({el_us(tags::segment_number, number), el(tags::segment_label, label)}));
    }
    std::vector<Item> per_frame;
    std::vector<std::uint8_t> bits;
    for (const auto& f : spec.frames) {
        auto ident = item({el_us(tags::referenced_segment_number, f.segment_number)});
        auto source = item({el(tags::referenced_sop_class_uid, std::string(kCtImageStorage)),
                            el(tags::referenced_sop_instance_uid, f.referenced_sop_uid)});
        auto derivation = item({el_seq(tags::source_image_sequence, {source})});
        per_frame.push_back(item({el_seq(tags::derivation_image_sequence, {derivation}),
                                  el_seq(tags::segment_identification_sequence, {ident})}));
        bits.insert(bits.end(), f.mask.begin(), f.mask.end());
    }
    std::vector<DataElement> e = {
        el(tags::sop_class_uid, std::string(kSegStorage)),
        el(tags::sop_instance_uid, spec.sop_uid),
        el(tags::modality, "SEG"),
        el(tags::patient_id, spec.patient_id),
        el(tags::study_instance_uid, spec.study_uid),
        el(tags::series_instance_uid, spec.series_uid),
        el(tags::instance_number, "1"),
        el_seq(tags::referenced_series_sequence, {item({el(tags::series_instance_uid, spec.referenced_series_uid)})}),
        el_us(tags::samples_per_pixel, 1),
        el(tags::photometric_interpretation, "MONOCHROME2"),
        el(tags::number_of_frames, std::to_string(spec.frames.size())),
        el_us(tags::rows, spec.rows),
        el_us(tags::columns, spec.columns),
        el_us(tags::bits_allocated, 1),
        el_us(tags::bits_stored, 1),
        el_us(tags::high_bit, 0),
        el_us(tags::pixel_representation, 0),
        el(tags::segmentation_type, spec.segmentation_type),
        el_seq(tags::segment_sequence, segments),
        el_seq(tags::per_frame_functional_groups_sequence, per_frame),
    };
    sort_elements(e);
    obj.elements = std::move(e);
    obj.pixel_payload = PixelPayload{vr::OB, pack_bits_lsb(bits)};
    return obj;
}

auto make_rtstruct(const RtStructSpec& spec) -> DicomObject {
    DicomObject obj;
    obj.meta = make_meta(std::string(kRtStructStorage), spec.sop_uid, TransferSyntax::explicit_vr_little_endian);
    std::vector<Item> structure_set;
    std::vector<Item> roi_contours;
    for (const auto& roi : spec.rois) {
        std::vector<DataElement> ss = {el_us(tags::roi_number, roi.number)};
        if (roi.name) ss.push_back(el(tags::roi_name, *roi.name));
        structure_set.push_back(item(ss));
        std::vector<Item> contours;
        for (const auto& [sop, coords] : roi.contours) {
            Strings data;
            for (double v : coords) data.push_back(fmt(v));
            auto image = item({el(tags::referenced_sop_class_uid, std::string(kCtImageStorage)),
                               el(tags::referenced_sop_instance_uid, sop)});
            contours.push_back(item({el_seq(tags::contour_image_sequence, {image}),
                                     el(tags::contour_geometric_type, "CLOSED_PLANAR"),
                                     el(tags::number_of_contour_points, std::to_string(coords.size() / 3)),
                                     DataElement{tags::contour_data, vr::DS, data}}));
        }
        std::vector<DataElement> rc = {el_us(tags::referenced_roi_number, roi.number),
                                       el_seq(tags::contour_sequence, contours)};
        if (roi.color) {
            rc.push_back(el_multi(tags::roi_display_color, {std::to_string((*roi.color)[0]),
                                                            std::to_string((*roi.color)[1]),
                                                            std::to_string((*roi.color)[2])}));
        }
        roi_contours.push_back(item(rc));
    }
    auto series = item({el(tags::series_instance_uid, spec.referenced_series_uid)});
    auto study = item({el(tags::referenced_sop_instance_uid, spec.study_uid),
                       el_seq(tags::rt_referenced_series_sequence, {series})});
    auto frame_ref = item({el(tags::frame_of_reference_uid, spec.study_uid + ".9"),
                           el_seq(tags::rt_referenced_study_sequence, {study})});
    std::vector<DataElement> e = {
        el(tags::sop_class_uid, std::string(kRtStructStorage)),
        el(tags::sop_instance_uid, spec.sop_uid),
        el(tags::modality, "RTSTRUCT"),
        el(tags::patient_id, spec.patient_id),
        el(tags::study_instance_uid, spec.study_uid),
        el(tags::series_instance_uid, spec.series_uid),
        el(tags::instance_number, "1"),
        el_seq(tags::referenced_frame_of_reference_sequence, {frame_ref}),
        el_seq(tags::roi_contour_sequence, roi_contours),
    };
    if (spec.include_structure_set) e.push_back(el_seq(tags::structure_set_roi_sequence, structure_set));
    sort_elements(e);
    obj.elements = std::move(e);
    return obj;
}

auto make_nifti(const NiftiSpec& spec) -> std::vector<std::uint8_t> {
    std::vector<std::uint8_t> out(352, 0);
    put<std::int32_t>(out, 0, 348);
    for (std::size_t i = 0; i < 8 && i < spec.dim.size(); ++i) put<std::int16_t>(out, 40 + 2 * i, spec.dim[i]);
    put<std::int16_t>(out, 70, spec.datatype);
    const std::int16_t bitpix = spec.datatype == 2 ? 8 : spec.datatype == 4 ? 16 : 32;
    put<std::int16_t>(out, 72, bitpix);
    for (std::size_t i = 0; i < 8 && i < spec.pixdim.size(); ++i) put<float>(out, 76 + 4 * i, spec.pixdim[i]);
    put<float>(out, 108, 352.0F);
    std::memcpy(out.data() + 344, spec.magic.data(), std::min<std::size_t>(4, spec.magic.size()));
    out.insert(out.end(), spec.voxels.begin(), spec.voxels.end());
    return out;
}

namespace {

auto random_token(std::mt19937_64& rng, std::string_view alphabet, std::size_t min_len, std::size_t max_len)
    -> std::string {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s(len(rng), ' ');
    for (auto& c : s) c = alphabet[pick(rng)];
    return s;
}

auto random_uid(std::mt19937_64& rng) -> std::string {
    std::string uid = "1.2.826.0.1";
    std::uniform_int_distribution<int> parts(2, 5);
    std::uniform_int_distribution<std::uint32_t> part(1, 999999);
    for (int i = parts(rng); i > 0; --i) uid += "." + std::to_string(part(rng));
    return uid;
}

/// Value for a string VR; never ends with padding characters.
auto random_string_value(std::mt19937_64& rng, Vr v) -> std::string {
    constexpr std::string_view upper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
    constexpr std::string_view words = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJ0123456789-^";
    std::uniform_int_distribution<int> d100(0, 99);
    if (v == vr::CS) return random_token(rng, upper, 1, 12);
    if (v == vr::UI) return random_uid(rng);
    if (v == vr::DA) return "20" + std::to_string(10 + d100(rng) % 15) + "0" + std::to_string(1 + d100(rng) % 9) + "1" +
                            std::to_string(d100(rng) % 9);
    if (v == vr::TM) return std::to_string(10 + d100(rng) % 13) + "3000";
    if (v == vr::DT) return "20240101120000";
    if (v == vr::AS) return "0" + std::to_string(10 + d100(rng) % 89) + "Y";
    if (v == vr::IS) return std::to_string(static_cast<int>(d100(rng)) - 20);
    if (v == vr::DS) return fmt((d100(rng) - 50) * 0.25);
    if (v == vr::PN) return random_token(rng, "ABCDEFGHIJKLMNOP", 2, 8) + "^" + random_token(rng, "abcdefgh", 1, 6);
    if (v == vr::ST || v == vr::LT || v == vr::UT) {
        // backslash is not a delimiter in these VRs
        return random_token(rng, words, 1, 20) + "\\" + random_token(rng, words, 1, 20);
    }
    auto s = random_token(rng, words, 1, 24);
    if (d100(rng) < 30) s += " " + random_token(rng, words, 1, 8);
    return s;
}

auto random_value(std::mt19937_64& rng, Vr v) -> Value {
    std::uniform_int_distribution<int> vm(1, 3);
    if (v == vr::US) {
        std::uniform_int_distribution<std::int64_t> d(0, 65535);
        Ints out;
        for (int i = vm(rng); i > 0; --i) out.push_back(d(rng));
        return out;
    }
    if (v == vr::SS) {
        std::uniform_int_distribution<std::int64_t> d(-32768, 32767);
        return Ints{d(rng)};
    }
    if (v == vr::UL) {
        std::uniform_int_distribution<std::int64_t> d(0, 0xFFFFFFFFLL);
        return Ints{d(rng)};
    }
    if (v == vr::AT) {
        std::uniform_int_distribution<std::int64_t> d(0x00080000, 0x7FE00010);
        return Ints{d(rng), d(rng)};
    }
    if (v == vr::FD || v == vr::FL) {
        std::uniform_real_distribution<double> d(-1000, 1000);
        Floats out;
        for (int i = vm(rng); i > 0; --i) out.push_back(v == vr::FL ? static_cast<float>(d(rng)) : d(rng));
        return out;
    }
    if (v == vr::OB || v == vr::OW || v == vr::UN) {
        std::uniform_int_distribution<int> b(0, 255);
        Bytes out(static_cast<std::size_t>(2 * vm(rng) + 2));
        for (auto& x : out) x = static_cast<std::uint8_t>(b(rng));
        return out;
    }
    Strings out;
    const int n = v.is_unsplit_text() ? 1 : vm(rng);
    for (int i = 0; i < n; ++i) out.push_back(random_string_value(rng, v));
    return out;
}

auto leaf_pool() -> const std::vector<DicomTag>& {
    static const std::vector<DicomTag> pool = [] {
        std::vector<DicomTag> out;
        for (const auto& entry : dictionary_entries()) {
            const auto t = entry.tag;
            if (t.group == 0x0002 || t.group == 0x0028 || t.group == 0x7FE0 || t.group == 0xFFFE) continue;
            if (t.element == 0x0000) continue;
            if (entry.vr == "SQ" || t == tags::specific_character_set) continue;
            out.push_back(t);
        }
        return out;
    }();
    return pool;
}

auto seq_pool() -> const std::vector<DicomTag>& {
    static const std::vector<DicomTag> pool = [] {
        std::vector<DicomTag> out;
        for (const auto& entry : dictionary_entries()) {
            if (entry.vr == "SQ" && entry.tag.group != 0x0002 && entry.tag.group != 0xFFFE) out.push_back(entry.tag);
        }
        return out;
    }();
    return pool;
}

auto random_elements(std::mt19937_64& rng, int depth, std::size_t count) -> std::vector<DataElement> {
    std::vector<DataElement> out;
    const auto& leaves = leaf_pool();
    const auto& seqs = seq_pool();
    std::uniform_int_distribution<std::size_t> pick_leaf(0, leaves.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_seq(0, seqs.size() - 1);
    std::uniform_int_distribution<int> d100(0, 99);
    for (std::size_t i = 0; i < count; ++i) {
        if (depth < 3 && d100(rng) < 15) {
            const auto tag = seqs[pick_seq(rng)];
            Sequence items;
            const int n = d100(rng) % 4;  // empty sequences included
            for (int k = 0; k < n; ++k) items.push_back(random_elements(rng, depth + 1, 1 + d100(rng) % 5));
            out.push_back(DataElement{tag, vr::SQ, std::move(items)});
        } else {
            const auto tag = leaves[pick_leaf(rng)];
            const auto v = lookup_tag(tag).vr;
            DataElement e{tag, v, random_value(rng, v)};
            if (d100(rng) < 5) e.value = v.is_string() ? Value{Strings{}} : Value{std::monostate{}};
            out.push_back(std::move(e));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const DataElement& a, const DataElement& b) { return a.tag < b.tag; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const DataElement& a, const DataElement& b) { return a.tag == b.tag; }),
              out.end());
    return out;
}

}  // namespace

auto random_object(std::mt19937_64& rng, TransferSyntax ts, int index) -> DicomObject {
    std::uniform_int_distribution<int> d100(0, 99);
    ImageSpec spec;
    spec.syntax = ts;
    spec.series_uid = "1.2.826.0.1.77." + std::to_string(index);
    spec.sop_uid = spec.series_uid + ".1";
    spec.rows = static_cast<std::uint32_t>(2 + d100(rng) % 7);
    spec.columns = static_cast<std::uint32_t>(2 + d100(rng) % 7);
    spec.frames = static_cast<std::uint32_t>(d100(rng) < 40 ? 2 + d100(rng) % 4 : 1);
    spec.bits_allocated = d100(rng) < 30 ? 8 : 16;
    spec.is_signed = spec.bits_allocated == 16 && d100(rng) < 50;
    const std::size_t n = static_cast<std::size_t>(spec.rows) * spec.columns * spec.frames;
    const std::int32_t lo = spec.is_signed ? -32768 : 0;
    const std::int32_t hi = spec.bits_allocated == 8 ? 255 : spec.is_signed ? 32767 : 65535;
    std::uniform_int_distribution<std::int32_t> px(lo, hi);
    spec.stored.resize(n);
    for (auto& v : spec.stored) v = px(rng);
    if (d100(rng) < 30) {
        spec.extra.push_back(el(tags::specific_character_set, "ISO_IR 100"));
        spec.extra.push_back(el(tags::patient_name, "M\xC3\xBCller^J\xC3\xB6rg"));
    }
    for (auto& e : random_elements(rng, 0, 10 + static_cast<std::size_t>(d100(rng) % 15))) {
        // keep identifying and pixel-module attributes under the spec's control
        if (e.tag == tags::sop_instance_uid || e.tag == tags::series_instance_uid || e.tag == tags::study_instance_uid ||
            e.tag == tags::patient_name || e.tag == tags::sop_class_uid) {
            continue;
        }
        spec.extra.push_back(std::move(e));
    }
    return make_image(spec);
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

auto write_object(const std::filesystem::path& dir, const std::string& name, const DicomObject& obj)
    -> std::filesystem::path {
    const auto path = dir / name;
    write_bytes(path, write_file(obj));
    return path;
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("curator-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace curator::fixture
