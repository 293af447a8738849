/**
 * @file cli.cpp
 */

#include "curator/cli/cli.hpp"

#include "curator/common/error.hpp"
#include "curator/common/text.hpp"
#include "curator/index/json_codec.hpp"
#include "curator/index/query.hpp"
#include "curator/service/api.hpp"
#include "curator/service/catalog.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <thread>

#include <pthread.h>

namespace curator::cli {

using nlohmann::json;

namespace {

constexpr std::string_view kGrammarHint =
    "query grammar: term | \"phrase\" | field:value | field:[lo TO hi] | a AND b | a OR b | NOT a | (group); "
    "wildcards * and ?";

struct Globals {
    std::string config_file;
    std::string archive_dir;
    std::string data_dir;
    std::string annotator_dir;
};

auto make_config(const Globals& g, const service::EnvLookup& env) -> service::ServiceConfig {
    std::optional<std::filesystem::path> file;
    if (!g.config_file.empty()) file = g.config_file;
    auto cfg = service::load_config(file, env);
    if (!g.archive_dir.empty()) cfg.archive_dir = g.archive_dir;
    if (!g.data_dir.empty()) cfg.data_dir = g.data_dir;
    if (!g.annotator_dir.empty()) cfg.annotator_dir = g.annotator_dir;
    cfg.validate();
    return cfg;
}

auto field_value(const index::SeriesDocument& doc, const std::string& col) -> std::string {
    const auto c = text::to_lower(col);
    if (c == "uid" || c == "series_uid") return doc.series_uid;
    if (c == "study_uid") return doc.study_uid;
    if (c == "instance_count") return std::to_string(doc.instance_count);
    if (c == "tags") return text::join(doc.tags, ";");
    if (c == "anatomical_structures") return text::join(doc.anatomical_structures, ";");
    if (c == "body_part") return doc.body_part.value_or("");
    for (const auto& [name, f] : doc.fields) {
        if (!text::iequals(name, col)) continue;
        if (f.type == index::FieldType::number) {
            std::vector<std::string> parts;
            for (double v : f.numbers) parts.push_back(text::format_number(v));
            return text::join(parts, ";");
        }
        return text::join(f.values, ";");
    }
    if (c == "modality") return doc.modality;
    if (c == "patient_id") return doc.patient_id;
    return "";
}

auto split_list(const std::string& csv) -> std::vector<std::string> {
    std::vector<std::string> out;
    for (const auto& f : text::split(csv, ',')) {
        const auto t = text::trim(f);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

auto cmd_ingest(service::Catalog& cat, const std::string& path, bool recursive, bool as_json, std::ostream& out) -> int {
    const auto r = cat.ingest_directory(path, recursive);
    if (as_json) {
        out << service::ingest_report_json(r).dump() << '\n';
    } else {
        out << "scanned " << r.scanned << ", instances " << r.instances << ", series " << r.indexed_series << ", skipped "
            << r.skipped.size() << " (" << r.duration_ms << " ms)\n";
        for (const auto& s : r.skipped) out << "skipped\t" << to_string(s.code) << '\t' << s.path << '\n';
    }
    return kExitOk;
}

auto cmd_search(service::Catalog& cat, const std::string& q, const std::vector<std::string>& cols, std::size_t from,
                std::size_t size, const std::string& sort, bool as_json, std::ostream& out) -> int {
    std::optional<std::string> s;
    if (!sort.empty()) s = sort;
    const auto r = cat.search(q, from, size, s);
    if (as_json) {
        for (const auto& h : r.hits) {
            if (auto doc = cat.index().get(h.series_uid)) out << service::hit_json(*doc, h.score).dump() << '\n';
        }
        return kExitOk;
    }
    out << text::join(cols, "\t") << '\n';
    for (const auto& h : r.hits) {
        const auto doc = cat.index().get(h.series_uid);
        if (!doc) continue;
        std::vector<std::string> row;
        for (const auto& c : cols) row.push_back(field_value(*doc, c));
        out << text::join(row, "\t") << '\n';
    }
    return kExitOk;
}

auto cmd_aggregate(service::Catalog& cat, const std::string& q, const std::vector<std::string>& fields, bool csv,
                   bool as_json, std::ostream& out, std::ostream& err) -> int {
    if (fields.empty()) {
        err << "aggregate: --fields is required\n";
        return kExitUsage;
    }
    if (csv) {
        if (fields.size() != 1) {
            err << "aggregate: --csv takes exactly one field\n";
            return kExitUsage;
        }
        out << cat.aggregate_csv(q, fields[0]);
        return kExitOk;
    }
    const auto dist = cat.aggregate(q, fields);
    if (as_json) {
        out << index::facets_to_json(dist).dump() << '\n';
        return kExitOk;
    }
    out << "field\tvalue\tcount\n";
    for (const auto& f : dist.fields) {
        for (const auto& b : f.buckets) out << f.field << '\t' << b.value << '\t' << b.count << '\n';
        if (f.missing_count > 0) out << f.field << "\t__missing__\t" << f.missing_count << '\n';
    }
    for (const auto& w : dist.warnings) err << "warning: " << w << '\n';
    return kExitOk;
}

auto cmd_thumbs(service::Catalog& cat, const std::string& q, std::uint32_t edge, const std::string& out_dir,
                std::ostream& out, std::ostream& err) -> int {
    const auto uids = cat.index().match_all_uids(index::parse_query(q));
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> failures{0};
    std::mutex err_mutex;
    const auto threads = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), uids.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < uids.size(); i = next++) {
                try {
                    const auto png = cat.thumbnail(uids[i], edge == 0 ? std::nullopt : std::optional<std::uint32_t>(edge));
                    if (!out_dir.empty()) {
                        fileio::write_atomic(std::filesystem::path(out_dir) / (uids[i] + ".png"),
                                             std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
                    }
                } catch (const Error& e) {
                    ++failures;
                    std::lock_guard lock(err_mutex);
                    err << "thumbnail " << uids[i] << ": " << to_string(e.code()) << ": " << e.what() << '\n';
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    out << uids.size() - failures << " thumbnails\n";
    return failures == 0 ? kExitOk : kExitError;
}

auto cmd_fsck(service::Catalog& cat, bool as_json, std::ostream& out) -> int {
    const auto r = cat.fsck();
    if (as_json) {
        out << service::fsck_json(r).dump() << '\n';
    } else {
        for (const auto& [id, uid] : r.dangling) out << "dangling\t" << id << '\t' << uid << '\n';
        for (const auto& uid : r.orphan_tags) out << "orphan_tags\t" << uid << '\n';
        for (const auto& uid : r.tag_mismatches) out << "tag_mismatch\t" << uid << '\n';
        out << (r.clean() ? "clean" : "problems found") << '\n';
    }
    return r.clean() ? kExitOk : kExitError;
}

auto cmd_annotate(service::Catalog& cat, const std::string& name, const std::string& q, bool as_json, std::ostream& out,
                  std::ostream& err) -> int {
    const auto uids = cat.index().match_all_uids(index::parse_query(q));
    if (uids.empty()) {
        err << "annotate: query matched no series\n";
        return kExitError;
    }
    const auto job = cat.wait_job(cat.submit_annotation(name, uids));
    if (as_json) {
        out << service::job_json(job).dump() << '\n';
    } else {
        for (const auto& r : job.results) {
            out << r.series_uid << '\t' << text::join(r.structures, ";") << '\t' << r.body_part.value_or("") << '\n';
        }
        for (const auto& e : job.errors) err << e.series_uid << ": " << to_string(e.code) << ": " << e.message << '\n';
    }
    return job.state == service::JobState::done ? kExitOk : kExitError;
}

auto cmd_serve(service::Catalog& cat, std::ostream& out) -> int {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    service::HttpServer server(cat);
    const auto port = server.bind(cat.config().bind, cat.config().port);
    server.start();
    out << "listening on http://" << cat.config().bind << ':' << port << '\n' << std::flush;
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
    return kExitOk;
}

}  // namespace

auto default_search_columns() -> const std::vector<std::string>& {
    static const std::vector<std::string> cols = {"uid", "Modality", "PatientID", "instance_count", "tags"};
    return cols;
}

auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const service::EnvLookup& env) -> int {
    CLI::App app{"curator: DICOM series curation"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_file, "key = value config file");
    app.add_option("--archive-dir", g.archive_dir);
    app.add_option("--data-dir", g.data_dir);
    app.add_option("--annotator-dir", g.annotator_dir);

    bool as_json = false;
    std::string path;
    bool no_recursive = false;
    auto* ingest = app.add_subcommand("ingest", "index DICOM/NIfTI files and copy them into the archive");
    ingest->add_option("path", path)->required();
    ingest->add_flag("--no-recursive", no_recursive);
    ingest->add_flag("--json", as_json);

    std::string bind;
    std::string static_dir;
    auto* serve = app.add_subcommand("serve", "run the HTTP API");
    serve->add_option("--bind", bind, "host or host:port");
    serve->add_option("--static-dir", static_dir, "web UI bundle served under /");

    std::string query;
    std::string cols_text;
    std::size_t from = 0;
    std::size_t size = index::kMaxPageSize;
    std::string sort;
    auto* search = app.add_subcommand("search", "print matching series");
    search->add_option("query", query)->required();
    search->add_flag("--json", as_json, "NDJSON, one hit per line");
    search->add_option("--cols", cols_text, "comma-separated columns");
    search->add_option("--from", from);
    search->add_option("--size", size);
    search->add_option("--sort", sort, "field, '-' prefix for descending");

    std::string fields_text;
    bool csv = false;
    auto* aggregate = app.add_subcommand("aggregate", "value counts of fields over a query");
    aggregate->add_option("query", query)->required();
    aggregate->add_option("--fields", fields_text)->required();
    aggregate->add_flag("--csv", csv);
    aggregate->add_flag("--json", as_json);

    std::uint32_t edge = 0;
    std::string out_dir;
    auto* thumbs = app.add_subcommand("thumbs", "generate thumbnails for matching series");
    thumbs->add_option("query", query)->required();
    thumbs->add_option("--edge", edge);
    thumbs->add_option("--out", out_dir, "also write <uid>.png here");

    auto* fsck = app.add_subcommand("fsck", "check dataset membership and tag mirror consistency");
    fsck->add_flag("--json", as_json);

    std::string annotator_name;
    auto* annotate = app.add_subcommand("annotate", "run an external annotator over matching series");
    annotate->add_option("name", annotator_name)->required();
    annotate->add_option("query", query)->required();
    annotate->add_flag("--json", as_json);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (search->parsed() || aggregate->parsed() || thumbs->parsed() || annotate->parsed()) {
            (void)index::parse_query(query);
        }
        auto cfg = make_config(g, env);
        if (serve->parsed()) {
            if (!bind.empty()) {
                service::apply_env(cfg, [&](const std::string& k) -> std::optional<std::string> {
                    if (k == "CURATOR_BIND") return bind;
                    return std::nullopt;
                });
            }
            if (!static_dir.empty()) cfg.static_dir = static_dir;
            cfg.validate();
        }
        service::Catalog cat(cfg);
        if (ingest->parsed()) return cmd_ingest(cat, path, !no_recursive, as_json, out);
        if (serve->parsed()) return cmd_serve(cat, out);
        if (search->parsed()) {
            auto cols = cols_text.empty() ? default_search_columns() : split_list(cols_text);
            return cmd_search(cat, query, cols, from, size, sort, as_json, out);
        }
        if (aggregate->parsed()) return cmd_aggregate(cat, query, split_list(fields_text), csv, as_json, out, err);
        if (thumbs->parsed()) return cmd_thumbs(cat, query, edge, out_dir, out, err);
        if (fsck->parsed()) return cmd_fsck(cat, as_json, out);
        if (annotate->parsed()) return cmd_annotate(cat, annotator_name, query, as_json, out, err);
    } catch (const index::QueryParseError& e) {
        err << "query error at position " << e.position() << ": " << e.what() << '\n' << kGrammarHint << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return e.code() == ErrorCode::bad_request ? kExitUsage : kExitError;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}

}  // namespace curator::cli
