/**
 * @file catalog.cpp
 */

#include "curator/service/catalog.hpp"

#include "curator/common/text.hpp"
#include "curator/dicom/nifti.hpp"
#include "curator/dicom/parser.hpp"
#include "curator/dicom/segmentation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>

namespace curator::service {

namespace {

auto safe_component(std::string_view s) -> std::string {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '.' ||
                        c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

auto is_nifti(const std::filesystem::path& p) -> bool {
    const auto name = text::to_lower(p.filename().string());
    return name.ends_with(".nii") || name.ends_with(".nii.gz");
}

auto load_object(const std::filesystem::path& p) -> dicom::DicomObject {
    const auto bytes = fileio::read_bytes(p);
    return dicom::parse_file(bytes);
}

auto modality_of(const dicom::DicomObject& obj) -> std::string {
    return std::string(text::trim(obj.string(dicom::tags::modality).value_or("")));
}

auto format_job_id(std::uint64_t n) -> std::string {
    char buf[32];
    std::snprintf(buf, sizeof buf, "job-%06llu", static_cast<unsigned long long>(n));
    return buf;
}

}  // namespace

auto to_string(JobState s) -> std::string_view {
    switch (s) {
        case JobState::queued: return "queued";
        case JobState::running: return "running";
        case JobState::done: return "done";
        case JobState::failed: return "failed";
    }
    return "failed";
}

Catalog::Catalog(ServiceConfig config) : config_(std::move(config)), cache_(config_.data_dir / "thumbs") {
    config_.validate();
    std::filesystem::create_directories(config_.data_dir);
    std::filesystem::create_directories(config_.archive_dir);
    lock_ = fileio::DirLock(config_.data_dir);
    index_ = std::make_unique<index::MetadataIndex>(config_.data_dir / "index.journal");
    store_ = std::make_unique<store::DatasetStore>(config_.data_dir / "store");
    if (!config_.annotator_dir.empty()) manifests_ = annotator::load_manifests(config_.annotator_dir);
    load_archive();
    store_->reconcile(*index_);
    for (std::size_t i = 0; i < config_.annotator_workers; ++i) workers_.emplace_back([this] { worker_loop(); });
}

Catalog::~Catalog() {
    {
        std::lock_guard lock(jobs_mutex_);
        stopping_ = true;
    }
    jobs_cv_.notify_all();
    for (auto& t : workers_) t.join();
}

void Catalog::load_archive() {
    std::error_code ec;
    std::vector<std::pair<std::string, std::filesystem::path>> overlay_sources;
    for (const auto& dir : std::filesystem::directory_iterator(config_.archive_dir, ec)) {
        if (!dir.is_directory()) continue;
        std::vector<std::filesystem::path> files;
        for (const auto& f : std::filesystem::directory_iterator(dir.path(), ec)) {
            if (f.is_regular_file() && f.path().extension() == ".dcm") files.push_back(f.path());
        }
        if (files.empty()) continue;
        std::sort(files.begin(), files.end());
        auto uid = dir.path().filename().string();
        auto doc = index_->get(uid);
        if (!doc || doc->instance_count < files.size()) {
            // index missing or behind the archive: rebuild from the files
            std::optional<index::SeriesDocument> rebuilt;
            for (const auto& f : files) {
                try {
                    const auto obj = load_object(f);
                    rebuilt = rebuilt ? index::merge_instance(std::move(*rebuilt), obj)
                                      : index::to_document(obj, doc ? doc->ingest_time : fileio::now_ms());
                } catch (const Error&) {
                }
            }
            if (!rebuilt) continue;
            if (doc) rebuilt->anatomical_structures = doc->anatomical_structures;
            rebuilt->tags = store_->tags(rebuilt->series_uid);
            rebuilt->body_part = annotator::annotate_from_headers(*rebuilt).body_part;
            uid = rebuilt->series_uid;
            index_->upsert(*rebuilt);
            doc = std::move(rebuilt);
        }
        if (doc->modality == "SEG" || doc->modality == "RTSTRUCT") {
            for (const auto& f : files) overlay_sources.emplace_back(uid, f);
        }
        files_[uid] = std::move(files);
    }
    for (const auto& [own, path] : overlay_sources) {
        try {
            register_overlay_source(own, load_object(path), path);
        } catch (const Error&) {
        }
    }
    index_->flush();
}

void Catalog::register_overlay_source(const std::string& own_series, const dicom::DicomObject& obj,
                                      const std::filesystem::path& path) {
    const auto modality = modality_of(obj);
    std::string target;
    if (modality == "SEG") {
        const auto seg = dicom::parse_seg(obj);
        target = seg.referenced_series_uid;
        if (target.empty() || !index_->contains(target)) {
            std::set<std::string> sops;
            for (const auto& s : seg.segments) {
                for (const auto& f : s.frames) {
                    if (!f.referenced_sop_uid.empty()) sops.insert(f.referenced_sop_uid);
                }
            }
            for (const auto& uid : index_->series_uids()) {
                const auto doc = index_->get(uid);
                if (!doc) continue;
                const bool hit = std::any_of(sops.begin(), sops.end(), [&](const std::string& s) {
                    return std::binary_search(doc->sop_instance_uids.begin(), doc->sop_instance_uids.end(), s);
                });
                if (hit) {
                    target = uid;
                    break;
                }
            }
        }
        if (target.empty() || target == own_series) return;
        if (auto doc = index_->get(target); doc && annotator::seg_references(seg, *doc)) {
            const auto updated = annotator::ingest_seg_labels(seg, *doc);
            if (updated.anatomical_structures != doc->anatomical_structures) {
                index_->set_anatomical_structures(target, updated.anatomical_structures);
            }
        }
    } else if (modality == "RTSTRUCT") {
        target = dicom::parse_rtstruct(obj).referenced_series_uid;
        if (target.empty() || target == own_series) return;
    } else {
        return;
    }
    {
        std::lock_guard lock(files_mutex_);
        auto& list = overlays_[target];
        if (std::find(list.begin(), list.end(), path) == list.end()) list.push_back(path);
    }
    cache_.invalidate(target);
}

struct Catalog::Pending {
    std::map<std::string, index::SeriesDocument> docs;
    std::vector<std::pair<std::string, std::filesystem::path>> overlay_sources;  ///< own series, archive path
    std::map<std::string, std::set<std::filesystem::path>> files;
};

auto Catalog::ingest_directory(const std::filesystem::path& root, bool recursive) -> IngestReport {
    std::error_code ec;
    if (!std::filesystem::exists(root, ec)) throw Error(ErrorCode::path_not_found, "no such path: " + root.string());
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(root, ec)) {
        if (recursive) {
            for (const auto& e : std::filesystem::recursive_directory_iterator(
                     root, std::filesystem::directory_options::skip_permission_denied, ec)) {
                if (e.is_regular_file()) files.push_back(e.path());
            }
        } else {
            for (const auto& e : std::filesystem::directory_iterator(root, ec)) {
                if (e.is_regular_file()) files.push_back(e.path());
            }
        }
    } else {
        files.push_back(root);
    }
    std::sort(files.begin(), files.end());
    return ingest_files(files);
}

auto Catalog::ingest_files(const std::vector<std::filesystem::path>& files) -> IngestReport {
    const auto start = std::chrono::steady_clock::now();
    IngestReport report;
    std::lock_guard writer(writer_);
    Pending pending;
    const auto now = fileio::now_ms();

    auto skip = [&](const std::filesystem::path& p, const Error& e) {
        ++report.scanned;
        report.skipped.push_back({p.string(), e.code(), e.what()});
    };
    auto take = [&](const dicom::DicomObject& obj, const std::vector<std::uint8_t>& raw, const std::filesystem::path& p) {
        const auto series = obj.string(dicom::tags::series_instance_uid).value_or("");
        if (text::trim(series).empty()) {
            skip(p, Error(ErrorCode::missing_series_uid, "no SeriesInstanceUID"));
            return;
        }
        index::SeriesDocument doc;
        try {
            if (auto it = pending.docs.find(series); it != pending.docs.end()) {
                doc = index::merge_instance(std::move(it->second), obj);
            } else if (auto existing = index_->get(series)) {
                doc = index::merge_instance(std::move(*existing), obj);
            } else {
                doc = index::to_document(obj, now);
            }
        } catch (const Error& e) {
            skip(p, e);
            return;
        }
        auto sop = std::string(text::trim(obj.string(dicom::tags::sop_instance_uid).value_or("")));
        if (sop.empty()) {
            sop = "noid-" + text::hex64(text::fnv1a64(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size())));
        }
        const auto dest = config_.archive_dir / safe_component(doc.series_uid) / (safe_component(sop) + ".dcm");
        std::filesystem::create_directories(dest.parent_path());
        fileio::write_atomic(dest, std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
        pending.files[doc.series_uid].insert(dest);
        const auto modality = modality_of(obj);
        if (modality == "SEG" || modality == "RTSTRUCT") pending.overlay_sources.emplace_back(doc.series_uid, dest);
        pending.docs.insert_or_assign(doc.series_uid, std::move(doc));
        ++report.scanned;
        ++report.instances;
    };

    for (const auto& p : files) {
        try {
            if (is_nifti(p)) {
                const auto bytes = fileio::read_gzip(p);
                const auto seed = text::hex64(text::fnv1a64(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size())));
                for (const auto& obj : dicom::nifti_to_dicom(bytes, seed)) take(obj, dicom::write_file(obj), p);
            } else {
                const auto bytes = fileio::read_bytes(p);
                take(dicom::parse_file(bytes), bytes, p);
            }
        } catch (const Error& e) {
            skip(p, e);
        }
    }

    for (auto& [uid, doc] : pending.docs) {
        doc.tags = store_->tags(uid);
        doc.body_part = annotator::annotate_from_headers(doc).body_part;
        index_->upsert(doc);
        {
            std::lock_guard lock(files_mutex_);
            auto& list = files_[uid];
            std::set<std::filesystem::path> merged(list.begin(), list.end());
            merged.insert(pending.files[uid].begin(), pending.files[uid].end());
            list.assign(merged.begin(), merged.end());
        }
        cache_.invalidate(uid);
    }
    for (const auto& [own, path] : pending.overlay_sources) {
        try {
            register_overlay_source(own, load_object(path), path);
        } catch (const Error&) {
        }
    }
    index_->flush();
    report.indexed_series = pending.docs.size();
    report.duration_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return report;
}

auto Catalog::search(const std::string& q, std::size_t from, std::size_t size, const std::optional<std::string>& sort) const
    -> index::SearchResults {
    return index_->search(index::parse_query(q), from, size, sort);
}

auto Catalog::get_series(const std::string& uid) const -> index::SeriesDocument {
    auto doc = index_->get(uid);
    if (!doc) throw Error(ErrorCode::unknown_series, "unknown series '" + uid + "'");
    return std::move(*doc);
}

auto Catalog::aggregate(const std::string& q, const std::vector<std::string>& fields) const -> index::FacetDistribution {
    return index_->aggregate(index::parse_query(q), fields);
}

auto Catalog::aggregate_csv(const std::string& q, const std::string& field) const -> std::string {
    return index::export_csv(aggregate(q, {field}), field);
}

auto Catalog::series_files(const std::string& uid) const -> std::vector<std::filesystem::path> {
    std::lock_guard lock(files_mutex_);
    auto it = files_.find(uid);
    return it == files_.end() ? std::vector<std::filesystem::path>{} : it->second;
}

auto Catalog::thumbnail(const std::string& uid, std::optional<std::uint32_t> edge) const -> std::vector<std::uint8_t> {
    const auto doc = get_series(uid);
    thumbnail::ThumbnailConfig cfg;
    cfg.edge = edge.value_or(config_.thumb_edge);
    cfg.validate();
    if (auto hit = cache_.load(uid, cfg)) return std::move(*hit);

    std::vector<dicom::DicomObject> instances;
    std::vector<dicom::DicomObject> overlay_objects;
    for (const auto& f : series_files(uid)) {
        try {
            instances.push_back(load_object(f));
        } catch (const Error&) {
        }
    }
    std::vector<std::filesystem::path> overlay_paths;
    {
        std::lock_guard lock(files_mutex_);
        if (auto it = overlays_.find(uid); it != overlays_.end()) overlay_paths = it->second;
    }
    for (const auto& f : overlay_paths) {
        try {
            overlay_objects.push_back(load_object(f));
        } catch (const Error&) {
        }
    }
    thumbnail::SeriesInput input;
    input.modality = doc.modality;
    for (const auto& o : instances) input.instances.push_back(&o);
    for (const auto& o : overlay_objects) {
        (modality_of(o) == "SEG" ? input.segmentations : input.structure_sets).push_back(&o);
    }
    auto png = thumbnail::make_thumbnail(input, cfg);
    cache_.store(uid, cfg, png);
    return png;
}

auto Catalog::slice_count(const std::string& uid) const -> std::size_t {
    (void)get_series(uid);
    std::vector<dicom::DicomObject> instances;
    for (const auto& f : series_files(uid)) {
        try {
            instances.push_back(load_object(f));
        } catch (const Error&) {
        }
    }
    std::vector<const dicom::DicomObject*> ptrs;
    for (const auto& o : instances) ptrs.push_back(&o);
    return thumbnail::slice_count(ptrs);
}

auto Catalog::slice_png(const std::string& uid, std::size_t i) const -> std::vector<std::uint8_t> {
    (void)get_series(uid);
    std::vector<dicom::DicomObject> instances;
    for (const auto& f : series_files(uid)) instances.push_back(load_object(f));
    std::vector<const dicom::DicomObject*> ptrs;
    for (const auto& o : instances) ptrs.push_back(&o);
    return thumbnail::render_slice_png(ptrs, i);
}

auto Catalog::create_dataset(const std::string& name) -> store::DatasetRecord {
    std::lock_guard writer(writer_);
    return store_->create_dataset(name);
}

auto Catalog::modify_membership(const std::string& id, const std::vector<std::string>& add,
                                const std::vector<std::string>& remove) -> store::MembershipDelta {
    std::lock_guard writer(writer_);
    return store_->modify_membership(id, add, remove);
}

auto Catalog::bulk_tag(const std::vector<std::string>& uids, const std::vector<std::string>& add,
                       const std::vector<std::string>& remove) -> std::vector<store::TagOutcome> {
    std::lock_guard writer(writer_);
    return store_->bulk_tag(uids, add, remove, *index_);
}

auto Catalog::fsck() const -> store::FsckReport { return store_->fsck(*index_); }

auto Catalog::annotators() const -> std::vector<annotator::AnnotatorManifest> {
    std::vector<annotator::AnnotatorManifest> out;
    for (const auto& [name, m] : manifests_) out.push_back(m);
    return out;
}

auto Catalog::submit_annotation(const std::string& name, const std::vector<std::string>& series_uids) -> std::string {
    if (manifests_.find(name) == manifests_.end()) throw Error(ErrorCode::unknown_annotator, "unknown annotator '" + name + "'");
    if (series_uids.empty()) throw Error(ErrorCode::bad_request, "series_uids is empty");
    std::string id;
    {
        std::lock_guard lock(jobs_mutex_);
        id = format_job_id(next_job_++);
        Job job;
        job.id = id;
        job.annotator = name;
        job.series_uids = series_uids;
        job.created = fileio::now_ms();
        jobs_.emplace(id, std::move(job));
        queue_.push_back(id);
    }
    jobs_cv_.notify_all();
    return id;
}

auto Catalog::job(const std::string& id) const -> Job {
    std::lock_guard lock(jobs_mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw Error(ErrorCode::unknown_job, "unknown job '" + id + "'");
    return it->second;
}

auto Catalog::wait_job(const std::string& id) const -> Job {
    std::unique_lock lock(jobs_mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw Error(ErrorCode::unknown_job, "unknown job '" + id + "'");
    jobs_cv_.wait(lock, [&] { return it->second.state == JobState::done || it->second.state == JobState::failed; });
    return it->second;
}

void Catalog::worker_loop() {
    while (true) {
        std::string id;
        {
            std::unique_lock lock(jobs_mutex_);
            jobs_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            id = queue_.front();
            queue_.pop_front();
            jobs_.at(id).state = JobState::running;
        }
        jobs_cv_.notify_all();
        run_job(id);
    }
}

void Catalog::apply_annotation(const annotator::AnnotationResult& r) {
    std::lock_guard writer(writer_);
    auto doc = index_->get(r.series_uid);
    if (!doc) throw Error(ErrorCode::unknown_series, "series '" + r.series_uid + "' disappeared");
    auto updated = *doc;
    updated.anatomical_structures = annotator::union_structures(updated.anatomical_structures, r.structures);
    if (r.body_part) updated.body_part = r.body_part;
    if (updated != *doc) index_->upsert(std::move(updated));
}

void Catalog::run_job(const std::string& id) {
    const auto job_copy = job(id);
    const auto& manifest = manifests_.at(job_copy.annotator);
    std::vector<annotator::AnnotationResult> results;
    std::vector<JobSeriesError> errors;
    std::size_t n = 0;
    for (const auto& uid : job_copy.series_uids) {
        const auto work = config_.data_dir / "jobs" / id / std::to_string(n++);
        try {
            if (!index_->contains(uid)) throw Error(ErrorCode::unknown_series, "unknown series '" + uid + "'");
            const auto files = series_files(uid);
            if (files.empty()) throw Error(ErrorCode::not_found, "no archived files for series '" + uid + "'");
            auto r = annotator::run_external(manifest, files, uid, {config_.annotator_timeout, work});
            apply_annotation(r);
            if (!r.produced_seg_files.empty()) (void)ingest_files(r.produced_seg_files);
            results.push_back(std::move(r));
        } catch (const Error& e) {
            errors.push_back({uid, e.code(), e.what()});
        } catch (const std::exception& e) {
            errors.push_back({uid, ErrorCode::internal, e.what()});
        }
    }
    {
        std::lock_guard lock(jobs_mutex_);
        auto& j = jobs_.at(id);
        j.results = std::move(results);
        j.errors = std::move(errors);
        j.state = j.errors.empty() ? JobState::done : JobState::failed;
        j.finished = fileio::now_ms();
    }
    jobs_cv_.notify_all();
}

}  // namespace curator::service
