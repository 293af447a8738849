/**
 * @file api.cpp
 */

#include "curator/service/api.hpp"

#include "curator/common/text.hpp"
#include "curator/index/json_codec.hpp"
#include "curator/index/query.hpp"

#include "httplib.h"

#include <thread>

namespace curator::service {

using nlohmann::json;

auto error_json(ErrorCode code, const std::string& message, json details) -> json {
    return {{"code", std::string(to_string(code))}, {"message", message}, {"details", std::move(details)}};
}

auto error_json(const Error& e) -> json {
    json details = json::object();
    if (const auto* pe = dynamic_cast<const index::QueryParseError*>(&e)) {
        details["position"] = pe->position();
        details["expected"] = pe->expected();
    }
    return error_json(e.code(), e.what(), std::move(details));
}

auto ingest_report_json(const IngestReport& r) -> json {
    json skipped = json::array();
    for (const auto& s : r.skipped) {
        skipped.push_back({{"path", s.path}, {"code", std::string(to_string(s.code))}, {"message", s.message}});
    }
    return {{"scanned", r.scanned},       {"indexed_series", r.indexed_series}, {"instances", r.instances},
            {"skipped", std::move(skipped)}, {"duration_ms", r.duration_ms}};
}

auto hit_json(const index::SeriesDocument& doc, double score) -> json {
    auto j = index::document_to_json(doc);
    j["score"] = score;
    return j;
}

auto search_json(const index::SearchResults& r, const index::MetadataIndex& idx) -> json {
    json hits = json::array();
    for (const auto& h : r.hits) {
        if (auto doc = idx.get(h.series_uid)) hits.push_back(hit_json(*doc, h.score));
    }
    return {{"total", r.total}, {"from", r.from}, {"size", r.size}, {"hits", std::move(hits)}, {"warnings", r.warnings}};
}

auto suggestions_json(const std::vector<index::Suggestion>& s) -> json {
    json out = json::array();
    for (const auto& x : s) out.push_back({{"value", x.value}, {"count", x.doc_count}});
    return {{"suggestions", std::move(out)}};
}

auto fields_json(const std::vector<index::FieldInfo>& f) -> json {
    json out = json::array();
    for (const auto& x : f) {
        out.push_back({{"name", x.name}, {"type", std::string(index::to_string(x.type))}, {"doc_count", x.doc_count}});
    }
    return {{"fields", std::move(out)}};
}

auto dataset_json(const store::DatasetRecord& d) -> json {
    return {{"id", d.id}, {"name", d.name}, {"created", d.created}, {"series", d.series}};
}

auto dataset_list_json(const std::vector<store::DatasetSummary>& list) -> json {
    json out = json::array();
    for (const auto& d : list) out.push_back({{"id", d.id}, {"name", d.name}, {"size", d.size}});
    return {{"datasets", std::move(out)}};
}

auto delta_json(const store::MembershipDelta& d) -> json {
    return {{"added", d.added}, {"removed", d.removed}, {"ignored", d.ignored}};
}

auto tag_outcomes_json(const std::vector<store::TagOutcome>& r) -> json {
    json out = json::array();
    for (const auto& o : r) {
        if (o.error) {
            out.push_back({{"series_uid", o.series_uid},
                           {"error", error_json(*o.error, "unknown series '" + o.series_uid + "'")}});
        } else {
            out.push_back({{"series_uid", o.series_uid}, {"tags", o.tags}});
        }
    }
    return {{"results", std::move(out)}};
}

auto fsck_json(const store::FsckReport& r) -> json {
    json dangling = json::array();
    for (const auto& [id, uid] : r.dangling) dangling.push_back({{"dataset", id}, {"series_uid", uid}});
    return {{"clean", r.clean()},
            {"dangling", std::move(dangling)},
            {"orphan_tags", r.orphan_tags},
            {"tag_mismatches", r.tag_mismatches}};
}

auto manifest_json(const annotator::AnnotatorManifest& m) -> json {
    return {{"name", m.name},
            {"version", m.version},
            {"kind", m.kind == annotator::AnnotatorKind::segmentation ? "segmentation" : "classification"},
            {"labels", m.labels}};
}

auto annotation_json(const annotator::AnnotationResult& r) -> json {
    json segs = json::array();
    for (const auto& p : r.produced_seg_files) segs.push_back(p.string());
    return {{"series_uid", r.series_uid},
            {"source", r.source},
            {"structures", r.structures},
            {"body_part", r.body_part ? json(*r.body_part) : json(nullptr)},
            {"produced_seg_files", std::move(segs)}};
}

auto job_json(const Job& j) -> json {
    json results = json::array();
    for (const auto& r : j.results) results.push_back(annotation_json(r));
    json errors = json::array();
    for (const auto& e : j.errors) {
        errors.push_back({{"series_uid", e.series_uid}, {"error", error_json(e.code, e.message)}});
    }
    return {{"id", j.id},
            {"annotator", j.annotator},
            {"state", std::string(to_string(j.state))},
            {"series_uids", j.series_uids},
            {"results", std::move(results)},
            {"errors", std::move(errors)},
            {"created", j.created},
            {"finished", j.finished}};
}

namespace {

constexpr std::string_view kFallbackPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>curator</title></head>"
    "<body><h1>curator</h1><p>The web UI bundle is not installed. The JSON API is served under /api.</p></body></html>";

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) { send_json(res, error_json(e), http_status(e.code())); }

auto bad_request(const std::string& msg) -> Error { return Error(ErrorCode::bad_request, msg); }

auto param(const httplib::Request& req, const std::string& name, const std::string& fallback = "") -> std::string {
    return req.has_param(name) ? req.get_param_value(name) : fallback;
}

auto size_param(const httplib::Request& req, const std::string& name, std::size_t fallback) -> std::size_t {
    if (!req.has_param(name)) return fallback;
    const auto v = text::parse_int(req.get_param_value(name));
    if (!v || *v < 0) throw bad_request(name + " must be a non-negative integer");
    return static_cast<std::size_t>(*v);
}

auto body_json(const httplib::Request& req) -> json {
    try {
        auto j = json::parse(req.body);
        if (!j.is_object()) throw bad_request("request body must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw bad_request(std::string("request body is not valid JSON: ") + e.what());
    }
}

auto string_list(const json& body, const std::string& key, bool required) -> std::vector<std::string> {
    if (!body.contains(key)) {
        if (required) throw bad_request("missing '" + key + "'");
        return {};
    }
    const auto& v = body[key];
    if (!v.is_array()) throw bad_request("'" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string()) throw bad_request("'" + key + "' must be an array of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

auto split_fields(const std::string& csv) -> std::vector<std::string> {
    std::vector<std::string> out;
    for (const auto& f : text::split(csv, ',')) {
        const auto t = text::trim(f);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

template <typename F>
auto guarded(F&& f) {
    return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_json(res, error_json(ErrorCode::internal, e.what()), 500);
        }
    };
}

}  // namespace

struct HttpServer::Impl {
    Catalog& catalog;
    httplib::Server server;
    std::thread thread;
    bool bound = false;

    explicit Impl(Catalog& c) : catalog(c) { routes(); }

    void routes() {
        auto& cat = catalog;
        server.Post("/api/ingest", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto body = body_json(req);
            if (!body.contains("path") || !body["path"].is_string()) throw bad_request("missing 'path'");
            const bool recursive = body.value("recursive", true);
            send_json(res, ingest_report_json(cat.ingest_directory(body["path"].get<std::string>(), recursive)));
        }));
        server.Get("/api/series", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            std::optional<std::string> sort;
            if (req.has_param("sort") && !req.get_param_value("sort").empty()) sort = req.get_param_value("sort");
            const auto r = cat.search(param(req, "q"), size_param(req, "from", 0), size_param(req, "size", 20), sort);
            send_json(res, search_json(r, cat.index()));
        }));
        server.Get(R"(/api/series/([^/]+)/thumbnail\.png)", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            std::optional<std::uint32_t> edge;
            if (req.has_param("edge")) edge = static_cast<std::uint32_t>(size_param(req, "edge", 0));
            const auto png = cat.thumbnail(req.matches[1], edge);
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        }));
        server.Get(R"(/api/series/([^/]+)/slices/(\d+)\.png)", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto i = text::parse_int(req.matches[2].str());
            if (!i) throw bad_request("slice index out of range");
            const auto png = cat.slice_png(req.matches[1], static_cast<std::size_t>(*i));
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        }));
        server.Get(R"(/api/series/([^/]+))", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto doc = cat.get_series(req.matches[1]);
            auto j = index::document_to_json(doc);
            j["slice_count"] = cat.slice_count(doc.series_uid);
            send_json(res, j);
        }));
        server.Get("/api/aggregate", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto fields = split_fields(param(req, "fields"));
            if (fields.empty()) throw bad_request("'fields' is required");
            send_json(res, index::facets_to_json(cat.aggregate(param(req, "q"), fields)));
        }));
        server.Get("/api/aggregate.csv", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto raw = param(req, "field");
            const std::string field(text::trim(raw));
            if (field.empty()) throw bad_request("'field' is required");
            res.set_content(cat.aggregate_csv(param(req, "q"), field), "text/csv");
        }));
        server.Get("/api/autocomplete", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto field = param(req, "field");
            if (field.empty()) throw bad_request("'field' is required");
            send_json(res, suggestions_json(cat.index().autocomplete(field, param(req, "prefix"), size_param(req, "limit", 10))));
        }));
        server.Get("/api/fields", guarded([&cat](const httplib::Request&, httplib::Response& res) {
            send_json(res, fields_json(cat.index().fields()));
        }));
        server.Post("/api/datasets", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto body = body_json(req);
            if (!body.contains("name") || !body["name"].is_string()) throw bad_request("missing 'name'");
            send_json(res, dataset_json(cat.create_dataset(body["name"].get<std::string>())), 201);
        }));
        server.Get("/api/datasets", guarded([&cat](const httplib::Request&, httplib::Response& res) {
            send_json(res, dataset_list_json(cat.store().list_datasets()));
        }));
        server.Get(R"(/api/datasets/([^/]+))", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            send_json(res, dataset_json(cat.store().get_dataset(req.matches[1])));
        }));
        server.Patch(R"(/api/datasets/([^/]+)/series)", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto body = body_json(req);
            send_json(res, delta_json(cat.modify_membership(req.matches[1], string_list(body, "add", false),
                                                            string_list(body, "remove", false))));
        }));
        server.Post("/api/tags/bulk", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto body = body_json(req);
            send_json(res, tag_outcomes_json(cat.bulk_tag(string_list(body, "uids", true), string_list(body, "add", false),
                                                          string_list(body, "remove", false))));
        }));
        server.Get("/api/fsck", guarded([&cat](const httplib::Request&, httplib::Response& res) {
            send_json(res, fsck_json(cat.fsck()));
        }));
        server.Get("/api/annotators", guarded([&cat](const httplib::Request&, httplib::Response& res) {
            json out = json::array();
            for (const auto& m : cat.annotators()) out.push_back(manifest_json(m));
            send_json(res, {{"annotators", std::move(out)}});
        }));
        server.Post(R"(/api/annotators/([^/]+)/run)", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            const auto body = body_json(req);
            const auto id = cat.submit_annotation(req.matches[1], string_list(body, "series_uids", true));
            send_json(res, job_json(cat.job(id)), 202);
        }));
        server.Get(R"(/api/jobs/([^/]+))", guarded([&cat](const httplib::Request& req, httplib::Response& res) {
            send_json(res, job_json(cat.job(req.matches[1])));
        }));

        const auto& static_dir = catalog.config().static_dir;
        std::error_code ec;
        if (!static_dir.empty() && std::filesystem::is_directory(static_dir, ec)) {
            server.set_mount_point("/", static_dir.string());
        } else {
            server.Get("/", [](const httplib::Request&, httplib::Response& res) {
                res.set_content(std::string(kFallbackPage), "text/html");
            });
        }
        server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
            if (req.path.rfind("/api/", 0) == 0 && res.body.empty()) {
                const auto code = res.status == 404 ? ErrorCode::not_found : ErrorCode::bad_request;
                send_json(res, error_json(code, "no route for " + req.method + " " + req.path), res.status);
            }
        });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
            send_json(res, error_json(ErrorCode::internal, "unhandled exception"), 500);
        });
    }
};

HttpServer::HttpServer(Catalog& catalog) : impl_(std::make_unique<Impl>(catalog)) {}

HttpServer::~HttpServer() { stop(); }

auto HttpServer::bind(const std::string& host, int port) -> int {
    int bound = 0;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else {
        bound = impl_->server.bind_to_port(host, port) ? port : -1;
    }
    if (bound <= 0) throw Error(ErrorCode::internal, "cannot bind " + host + ":" + std::to_string(port));
    impl_->bound = true;
    return bound;
}

void HttpServer::listen() {
    if (!impl_->bound) throw Error(ErrorCode::internal, "listen() before bind()");
    impl_->server.listen_after_bind();
}

void HttpServer::start() {
    if (!impl_->bound) throw Error(ErrorCode::internal, "start() before bind()");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpServer::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace curator::service
