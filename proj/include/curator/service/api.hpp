/**
 * @file api.hpp
 * @brief JSON serialization of catalog results and the HTTP endpoint table
 *
 * | Method | Path                                   | Catalog call        |
 * |--------|----------------------------------------|---------------------|
 * | POST   | /api/ingest {path, recursive}          | ingest_directory    |
 * | GET    | /api/series ?q&from&size&sort          | search              |
 * | GET    | /api/series/{uid}                      | get_series          |
 * | GET    | /api/series/{uid}/thumbnail.png ?edge  | thumbnail           |
 * | GET    | /api/series/{uid}/slices/{i}.png       | slice_png           |
 * | GET    | /api/aggregate ?q&fields               | aggregate           |
 * | GET    | /api/aggregate.csv ?q&field            | aggregate_csv       |
 * | GET    | /api/autocomplete ?field&prefix&limit  | index autocomplete  |
 * | GET    | /api/fields                            | index fields        |
 * | POST   | /api/datasets {name}                   | create_dataset      |
 * | GET    | /api/datasets                          | list_datasets       |
 * | GET    | /api/datasets/{id}                     | get_dataset         |
 * | PATCH  | /api/datasets/{id}/series {add,remove} | modify_membership   |
 * | POST   | /api/tags/bulk {uids,add,remove}       | bulk_tag            |
 * | GET    | /api/fsck                              | fsck                |
 * | GET    | /api/annotators                        | annotators          |
 * | POST   | /api/annotators/{name}/run {series_uids} | submit_annotation |
 * | GET    | /api/jobs/{id}                         | job                 |
 *
 * Errors are `{"code","message","details"}` with the status from http_status().
 */
#pragma once

#include "curator/service/catalog.hpp"

#include "json.hpp"

#include <memory>
#include <string>

namespace curator::service {

[[nodiscard]] auto error_json(ErrorCode code, const std::string& message, nlohmann::json details = nlohmann::json::object())
    -> nlohmann::json;
/// Adds `position` and `expected` for query parse errors.
[[nodiscard]] auto error_json(const Error& e) -> nlohmann::json;

[[nodiscard]] auto ingest_report_json(const IngestReport& r) -> nlohmann::json;
/// One hit: the document JSON plus `score`.
[[nodiscard]] auto hit_json(const index::SeriesDocument& doc, double score) -> nlohmann::json;
[[nodiscard]] auto search_json(const index::SearchResults& r, const index::MetadataIndex& idx) -> nlohmann::json;
[[nodiscard]] auto suggestions_json(const std::vector<index::Suggestion>& s) -> nlohmann::json;
[[nodiscard]] auto fields_json(const std::vector<index::FieldInfo>& f) -> nlohmann::json;
[[nodiscard]] auto dataset_json(const store::DatasetRecord& d) -> nlohmann::json;
[[nodiscard]] auto dataset_list_json(const std::vector<store::DatasetSummary>& list) -> nlohmann::json;
[[nodiscard]] auto delta_json(const store::MembershipDelta& d) -> nlohmann::json;
[[nodiscard]] auto tag_outcomes_json(const std::vector<store::TagOutcome>& r) -> nlohmann::json;
[[nodiscard]] auto fsck_json(const store::FsckReport& r) -> nlohmann::json;
[[nodiscard]] auto manifest_json(const annotator::AnnotatorManifest& m) -> nlohmann::json;
[[nodiscard]] auto annotation_json(const annotator::AnnotationResult& r) -> nlohmann::json;
[[nodiscard]] auto job_json(const Job& j) -> nlohmann::json;

/// httplib server bound to one Catalog.
class HttpServer {
public:
    explicit HttpServer(Catalog& catalog);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    auto operator=(const HttpServer&) -> HttpServer& = delete;

    /// Binds; port 0 picks a free port. Returns the bound port. @throws Error internal
    auto bind(const std::string& host, int port) -> int;
    /// Serves until stop(). Requires bind().
    void listen();
    /// Runs listen() on a background thread and waits until the server accepts connections.
    void start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace curator::service
