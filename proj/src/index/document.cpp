/**
 * @file document.cpp
 */

#include "curator/index/document.hpp"

#include "curator/common/error.hpp"
#include "curator/common/text.hpp"
#include "curator/dicom/dictionary.hpp"

#include <algorithm>

namespace curator::index {

using dicom::DataElement;
using dicom::Vr;

namespace {

constexpr std::string_view kTypeNames[] = {"keyword", "text", "name", "date", "number"};

auto field_type_for(Vr vr) -> std::optional<FieldType> {
    namespace v = dicom::vr;
    if (vr == v::DA) return FieldType::date;
    if (vr == v::DS || vr == v::IS || vr == v::FD || vr == v::FL || vr == v::SL || vr == v::SS || vr == v::UL ||
        vr == v::US || vr == v::SV || vr == v::UV) {
        return FieldType::number;
    }
    if (vr == v::LT || vr == v::ST || vr == v::UT) return FieldType::text;
    if (vr == v::PN) return FieldType::name;
    if (vr.is_string()) return FieldType::keyword;
    return std::nullopt;
}

auto field_name(const std::string& keyword) -> std::string {
    for (const auto& reserved : reserved_field_names()) {
        if (text::iequals(keyword, reserved)) return keyword + "_dicom";
    }
    return keyword;
}

void add_unique(std::vector<std::string>& list, const std::string& value) {
    if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
}

auto describe(const Field& f) -> std::string {
    if (f.type == FieldType::number) {
        std::vector<std::string> parts;
        for (double n : f.numbers) parts.push_back(text::format_number(n));
        return text::join(parts, "\\");
    }
    return text::join(f.values, "\\");
}

/// Converts one element into a field, or nothing (binary VRs, empty values).
auto element_field(const DataElement& e, std::vector<std::string>& warnings) -> std::optional<Field> {
    const auto type = field_type_for(e.vr);
    if (!type) return std::nullopt;
    Field f;
    f.type = *type;
    const auto keyword = dicom::lookup_tag(e.tag).keyword;
    if (const auto* strings = e.strings()) {
        for (const auto& raw : *strings) {
            const auto s = std::string(text::trim(raw));
            if (s.empty()) continue;
            switch (*type) {
                case FieldType::date:
                    if (auto d = normalize_date(s)) {
                        f.values.push_back(*d);
                    } else {
                        warnings.push_back(keyword + ": invalid date '" + s + "' dropped");
                    }
                    break;
                case FieldType::number:
                    if (auto n = text::parse_double(s)) {
                        f.numbers.push_back(*n);
                    } else {
                        warnings.push_back(keyword + ": invalid number '" + s + "' dropped");
                    }
                    break;
                default:
                    f.values.push_back(s);
            }
        }
    } else if (const auto* ints = e.ints()) {
        for (auto v : *ints) f.numbers.push_back(static_cast<double>(v));
    } else if (const auto* floats = e.floats()) {
        for (auto v : *floats) f.numbers.push_back(v);
    }
    if (f.empty()) return std::nullopt;
    return f;
}

}  // namespace

auto to_string(FieldType t) -> std::string_view { return kTypeNames[static_cast<std::size_t>(t)]; }

auto field_type_from_string(std::string_view s) -> std::optional<FieldType> {
    for (std::size_t i = 0; i < std::size(kTypeNames); ++i) {
        if (kTypeNames[i] == s) return static_cast<FieldType>(i);
    }
    return std::nullopt;
}

auto reserved_field_names() -> const std::vector<std::string>& {
    static const std::vector<std::string> names = {"tags", "anatomical_structures", "body_part", "instance_count"};
    return names;
}

auto normalize_date(std::string_view da) -> std::optional<std::string> {
    std::string digits;
    if (da.size() == 8) {
        digits = std::string(da);
    } else if (da.size() == 10 && da[4] == '-' && da[7] == '-') {
        digits = std::string(da.substr(0, 4)) + std::string(da.substr(5, 2)) + std::string(da.substr(8, 2));
    } else {
        return std::nullopt;
    }
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
    const int y = std::stoi(digits.substr(0, 4));
    const int m = std::stoi(digits.substr(4, 2));
    const int d = std::stoi(digits.substr(6, 2));
    if (m < 1 || m > 12 || d < 1) return std::nullopt;
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    const int limit = m == 2 && leap ? 29 : days[m - 1];
    if (d > limit) return std::nullopt;
    return digits.substr(0, 4) + "-" + digits.substr(4, 2) + "-" + digits.substr(6, 2);
}

auto tokenize(std::string_view s) -> std::vector<std::string> {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
        if (word) {
            cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : ch);
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

auto is_instance_level(std::string_view keyword) -> bool {
    static constexpr std::string_view names[] = {
        "SOPInstanceUID",  "InstanceNumber", "ImagePositionPatient", "SliceLocation",   "ContentTime",
        "AcquisitionTime", "ContentDate",    "AcquisitionDate",      "AcquisitionNumber", "InstanceCreationTime",
        "InstanceCreationDate", "WindowCenter", "WindowWidth",       "LargestImagePixelValue",
        "SmallestImagePixelValue", "RescaleIntercept", "RescaleSlope", "NumberOfFrames",
    };
    return std::find(std::begin(names), std::end(names), keyword) != std::end(names);
}

auto to_document(const dicom::DicomObject& obj, std::int64_t ingest_time) -> SeriesDocument {
    const auto series_uid = obj.string(dicom::tags::series_instance_uid);
    if (!series_uid || series_uid->empty()) {
        throw Error(ErrorCode::missing_series_uid, "object has no SeriesInstanceUID");
    }
    SeriesDocument doc;
    doc.series_uid = *series_uid;
    doc.study_uid = obj.string(dicom::tags::study_instance_uid).value_or("");
    doc.patient_id = obj.string(dicom::tags::patient_id).value_or("");
    doc.modality = obj.string(dicom::tags::modality).value_or("");
    doc.body_part = obj.string(dicom::tags::body_part_examined);
    if (doc.body_part && doc.body_part->empty()) doc.body_part.reset();
    doc.has_pixel_data = obj.has_pixel_data();
    doc.ingest_time = ingest_time;
    doc.instance_count = 1;
    if (auto sop = obj.string(dicom::tags::sop_instance_uid); sop && !sop->empty()) {
        doc.sop_instance_uids.push_back(*sop);
    }

    for (const auto& e : obj.elements) {
        if (e.tag.is_private() || e.tag.element == 0x0000 || e.tag == dicom::tags::pixel_data) continue;
        const auto keyword = dicom::lookup_tag(e.tag).keyword;
        if (const auto* items = e.items()) {
            Field f;
            f.type = FieldType::number;
            f.numbers.push_back(static_cast<double>(items->size()));
            doc.fields[field_name(keyword + "_count")] = std::move(f);
            continue;
        }
        if (auto f = element_field(e, doc.warnings)) doc.fields[field_name(keyword)] = std::move(*f);
    }
    return doc;
}

auto merge_instance(SeriesDocument doc, const dicom::DicomObject& obj) -> SeriesDocument {
    auto other = to_document(obj, doc.ingest_time);
    if (other.series_uid != doc.series_uid) {
        throw Error(ErrorCode::series_uid_mismatch,
                    "instance of series '" + other.series_uid + "' merged into '" + doc.series_uid + "'");
    }
    const auto sop = other.sop_instance_uids.empty() ? std::string() : other.sop_instance_uids.front();
    if (!sop.empty()) {
        const auto it = std::lower_bound(doc.sop_instance_uids.begin(), doc.sop_instance_uids.end(), sop);
        if (it != doc.sop_instance_uids.end() && *it == sop) return doc;  // already counted
        doc.sop_instance_uids.insert(it, sop);
    }
    doc.instance_count += 1;
    doc.has_pixel_data = doc.has_pixel_data || other.has_pixel_data;
    if (doc.study_uid.empty()) doc.study_uid = other.study_uid;
    if (doc.patient_id.empty()) doc.patient_id = other.patient_id;
    if (doc.modality.empty()) doc.modality = other.modality;
    if (!doc.body_part) doc.body_part = other.body_part;
    for (const auto& w : other.warnings) add_unique(doc.warnings, w);

    for (auto& [name, field] : other.fields) {
        auto it = doc.fields.find(name);
        if (it == doc.fields.end()) {
            doc.fields.emplace(name, std::move(field));
            continue;
        }
        auto& mine = it->second;
        if (mine == field || is_instance_level(name)) continue;
        const bool list_like = mine.type == FieldType::keyword && field.type == FieldType::keyword &&
                               (mine.values.size() > 1 || field.values.size() > 1);
        if (list_like) {
            for (const auto& v : field.values) add_unique(mine.values, v);
            continue;
        }
        add_unique(doc.field_conflicts, name + ": kept '" + describe(mine) + "', saw '" + describe(field) + "'");
    }
    return doc;
}

}  // namespace curator::index
