/**
 * @file catalog.hpp
 * @brief The curation backend: archive, index, dataset store, thumbnails and annotator jobs
 *
 * Data directory layout:
 *  - `index.journal`    metadata index journal
 *  - `store/`           dataset store journal and snapshot
 *  - `thumbs/`          thumbnail cache
 *  - `jobs/<id>/<n>/`   annotator work directories
 *  - `LOCK`             held while a Catalog is open
 *
 * Archive layout: `<archive>/<series_uid>/<sop_uid>.dcm`.
 *
 * Mutations go through one writer mutex; reads run concurrently against the
 * index's own reader lock.
 */
#pragma once

#include "curator/annotator/annotator.hpp"
#include "curator/common/error.hpp"
#include "curator/common/fileio.hpp"
#include "curator/index/index.hpp"
#include "curator/service/config.hpp"
#include "curator/store/dataset_store.hpp"
#include "curator/thumbnail/thumbnail.hpp"

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace curator::service {

struct SkippedFile {
    std::string path;
    ErrorCode code = ErrorCode::internal;
    std::string message;
};

struct IngestReport {
    std::uint64_t scanned = 0;  ///< instances + skipped; a NIfTI volume counts once per generated slice
    std::uint64_t indexed_series = 0;
    std::uint64_t instances = 0;
    std::vector<SkippedFile> skipped;
    std::int64_t duration_ms = 0;
};

enum class JobState : std::uint8_t { queued, running, done, failed };

[[nodiscard]] auto to_string(JobState s) -> std::string_view;

struct JobSeriesError {
    std::string series_uid;
    ErrorCode code = ErrorCode::internal;
    std::string message;
};

struct Job {
    std::string id;
    std::string annotator;
    std::vector<std::string> series_uids;
    JobState state = JobState::queued;
    std::vector<annotator::AnnotationResult> results;
    std::vector<JobSeriesError> errors;
    std::int64_t created = 0;
    std::int64_t finished = 0;
};

class Catalog {
public:
    /// Opens (creating) the archive and data directory. @throws Error data_dir_locked, storage_error
    explicit Catalog(ServiceConfig config);
    ~Catalog();
    Catalog(const Catalog&) = delete;
    auto operator=(const Catalog&) -> Catalog& = delete;

    [[nodiscard]] auto config() const -> const ServiceConfig& { return config_; }
    [[nodiscard]] auto index() -> index::MetadataIndex& { return *index_; }
    [[nodiscard]] auto index() const -> const index::MetadataIndex& { return *index_; }
    [[nodiscard]] auto store() -> store::DatasetStore& { return *store_; }
    [[nodiscard]] auto store() const -> const store::DatasetStore& { return *store_; }

    /// Walks `root` (a file or directory). @throws Error path_not_found
    auto ingest_directory(const std::filesystem::path& root, bool recursive = true) -> IngestReport;
    /// Ingests exactly these files.
    auto ingest_files(const std::vector<std::filesystem::path>& files) -> IngestReport;

    /// @throws Error parse_error, bad_request
    [[nodiscard]] auto search(const std::string& q, std::size_t from, std::size_t size,
                              const std::optional<std::string>& sort = std::nullopt) const -> index::SearchResults;
    /// @throws Error unknown_series
    [[nodiscard]] auto get_series(const std::string& uid) const -> index::SeriesDocument;
    [[nodiscard]] auto aggregate(const std::string& q, const std::vector<std::string>& fields) const
        -> index::FacetDistribution;
    [[nodiscard]] auto aggregate_csv(const std::string& q, const std::string& field) const -> std::string;

    /// Archive files of a series, sorted.
    [[nodiscard]] auto series_files(const std::string& uid) const -> std::vector<std::filesystem::path>;

    /// Cached PNG thumbnail; edge defaults to the configured size. @throws Error unknown_series, invalid_config
    [[nodiscard]] auto thumbnail(const std::string& uid, std::optional<std::uint32_t> edge = std::nullopt) const
        -> std::vector<std::uint8_t>;
    [[nodiscard]] auto slice_count(const std::string& uid) const -> std::size_t;
    /// @throws Error unknown_series, frame_out_of_range
    [[nodiscard]] auto slice_png(const std::string& uid, std::size_t i) const -> std::vector<std::uint8_t>;

    auto create_dataset(const std::string& name) -> store::DatasetRecord;
    auto modify_membership(const std::string& id, const std::vector<std::string>& add,
                           const std::vector<std::string>& remove) -> store::MembershipDelta;
    auto bulk_tag(const std::vector<std::string>& uids, const std::vector<std::string>& add,
                  const std::vector<std::string>& remove) -> std::vector<store::TagOutcome>;
    [[nodiscard]] auto fsck() const -> store::FsckReport;

    [[nodiscard]] auto annotators() const -> std::vector<annotator::AnnotatorManifest>;
    /// Queues a run; returns the job id. @throws Error unknown_annotator, bad_request
    auto submit_annotation(const std::string& annotator, const std::vector<std::string>& series_uids) -> std::string;
    /// @throws Error unknown_job
    [[nodiscard]] auto job(const std::string& id) const -> Job;
    /// Blocks until the job leaves queued/running. @throws Error unknown_job
    auto wait_job(const std::string& id) const -> Job;

private:
    struct Pending;

    void load_archive();
    void register_overlay_source(const std::string& series_uid, const dicom::DicomObject& obj,
                                 const std::filesystem::path& path);
    void worker_loop();
    void run_job(const std::string& id);
    auto apply_annotation(const annotator::AnnotationResult& r) -> void;

    ServiceConfig config_;
    fileio::DirLock lock_;
    std::unique_ptr<index::MetadataIndex> index_;
    std::unique_ptr<store::DatasetStore> store_;
    thumbnail::ThumbnailCache cache_;
    std::map<std::string, annotator::AnnotatorManifest> manifests_;

    std::mutex writer_;
    mutable std::mutex files_mutex_;
    std::map<std::string, std::vector<std::filesystem::path>> files_;     ///< series uid -> archive files
    std::map<std::string, std::vector<std::filesystem::path>> overlays_;  ///< image series uid -> SEG/RTSTRUCT files

    mutable std::mutex jobs_mutex_;
    mutable std::condition_variable jobs_cv_;
    std::map<std::string, Job> jobs_;
    std::deque<std::string> queue_;
    std::uint64_t next_job_ = 1;
    bool stopping_ = false;
    std::vector<std::thread> workers_;
};

}  // namespace curator::service
