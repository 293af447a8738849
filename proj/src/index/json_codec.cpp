/**
 * @file json_codec.cpp
 */

#include "curator/index/json_codec.hpp"

#include "curator/common/error.hpp"

namespace curator::index {

using nlohmann::json;

auto document_to_json(const SeriesDocument& doc) -> json {
    json fields = json::object();
    for (const auto& [name, f] : doc.fields) {
        json jf = {{"type", std::string(to_string(f.type))}};
        if (f.type == FieldType::number) {
            jf["values"] = f.numbers;
        } else {
            jf["values"] = f.values;
        }
        fields[name] = std::move(jf);
    }
    json j = {
        {"series_uid", doc.series_uid},
        {"study_uid", doc.study_uid},
        {"patient_id", doc.patient_id},
        {"modality", doc.modality},
        {"instance_count", doc.instance_count},
        {"has_pixel_data", doc.has_pixel_data},
        {"tags", doc.tags},
        {"anatomical_structures", doc.anatomical_structures},
        {"body_part", doc.body_part ? json(*doc.body_part) : json(nullptr)},
        {"ingest_time", doc.ingest_time},
        {"sop_instance_uids", doc.sop_instance_uids},
        {"warnings", doc.warnings},
        {"field_conflicts", doc.field_conflicts},
        {"fields", std::move(fields)},
    };
    return j;
}

auto document_from_json(const json& j) -> SeriesDocument {
    try {
        SeriesDocument doc;
        doc.series_uid = j.at("series_uid").get<std::string>();
        if (doc.series_uid.empty()) throw Error(ErrorCode::invalid_document, "empty series_uid");
        doc.study_uid = j.value("study_uid", "");
        doc.patient_id = j.value("patient_id", "");
        doc.modality = j.value("modality", "");
        doc.instance_count = j.value("instance_count", std::uint64_t{0});
        doc.has_pixel_data = j.value("has_pixel_data", false);
        doc.tags = j.value("tags", std::vector<std::string>{});
        doc.anatomical_structures = j.value("anatomical_structures", std::vector<std::string>{});
        if (j.contains("body_part") && j["body_part"].is_string()) doc.body_part = j["body_part"].get<std::string>();
        doc.ingest_time = j.value("ingest_time", std::int64_t{0});
        doc.sop_instance_uids = j.value("sop_instance_uids", std::vector<std::string>{});
        doc.warnings = j.value("warnings", std::vector<std::string>{});
        doc.field_conflicts = j.value("field_conflicts", std::vector<std::string>{});
        const auto fields = j.value("fields", json::object());
        for (const auto& [name, jf] : fields.items()) {
            Field f;
            const auto type = field_type_from_string(jf.at("type").get<std::string>());
            if (!type) throw Error(ErrorCode::invalid_document, "unknown field type for " + name);
            f.type = *type;
            if (f.type == FieldType::number) {
                f.numbers = jf.at("values").get<std::vector<double>>();
            } else {
                f.values = jf.at("values").get<std::vector<std::string>>();
            }
            doc.fields.emplace(name, std::move(f));
        }
        return doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_document, std::string("invalid document JSON: ") + e.what());
    }
}

auto facets_to_json(const FacetDistribution& dist) -> json {
    json fields = json::array();
    for (const auto& f : dist.fields) {
        json buckets = json::array();
        for (const auto& b : f.buckets) buckets.push_back({{"value", b.value}, {"count", b.count}});
        fields.push_back({{"field", f.field},
                          {"buckets", std::move(buckets)},
                          {"missing_count", f.missing_count},
                          {"binned", f.binned}});
    }
    return {{"total", dist.total}, {"fields", std::move(fields)}, {"warnings", dist.warnings}};
}

}  // namespace curator::index
