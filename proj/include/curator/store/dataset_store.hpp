/**
 * @file dataset_store.hpp
 * @brief Named datasets, series membership and curation tags on an operation journal
 *
 * Files in the store directory:
 *  - `datasets.journal`: `{"v":1}` header, then one JSON operation per line.
 *  - `datasets.snapshot`: `{"v":1}` header, then one JSON state line. Written
 *    by rename; journal operations with seq <= the snapshot's seq are skipped.
 */
#pragma once

#include "curator/common/fileio.hpp"
#include "curator/index/index.hpp"
#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace curator::store {

struct DatasetRecord {
    std::string id;
    std::string name;
    std::int64_t created = 0;  ///< ms since epoch
    std::set<std::string> series;

    auto operator==(const DatasetRecord&) const -> bool = default;
};

struct DatasetSummary {
    std::string id;
    std::string name;
    std::size_t size = 0;

    auto operator==(const DatasetSummary&) const -> bool = default;
};

struct MembershipDelta {
    std::size_t added = 0;
    std::size_t removed = 0;
    std::size_t ignored = 0;

    auto operator==(const MembershipDelta&) const -> bool = default;
};

struct TagOutcome {
    std::string series_uid;
    std::optional<ErrorCode> error;  ///< unknown_series
    std::vector<std::string> tags;   ///< final tags when ok

    auto operator==(const TagOutcome&) const -> bool = default;
};

struct FsckReport {
    std::vector<std::pair<std::string, std::string>> dangling;  ///< (dataset id, series uid) not in the index
    std::vector<std::string> orphan_tags;                       ///< tagged uids not in the index
    std::vector<std::string> tag_mismatches;                    ///< index tags differ from the store

    [[nodiscard]] auto clean() const -> bool {
        return dangling.empty() && orphan_tags.empty() && tag_mismatches.empty();
    }
};

struct StoreReplayReport {
    std::uint64_t operations = 0;
    std::uint64_t truncated_bytes = 0;
    bool snapshot_loaded = false;
};

/// Lowercases and validates one tag (1..64 chars of [a-z0-9 _:-]). @throws Error invalid_tag
[[nodiscard]] auto normalize_tag(std::string_view tag) -> std::string;

/// @throws Error invalid_name
void validate_dataset_name(std::string_view name);

class DatasetStore {
public:
    /// Loads the snapshot and replays the journal; a torn tail is truncated.
    explicit DatasetStore(const std::filesystem::path& dir);

    /// @throws Error invalid_name, duplicate_name, storage_error
    auto create_dataset(const std::string& name) -> DatasetRecord;
    /// @throws Error unknown_dataset, overlapping_add_remove, storage_error
    auto modify_membership(const std::string& id, const std::vector<std::string>& add,
                           const std::vector<std::string>& remove) -> MembershipDelta;

    [[nodiscard]] auto list_datasets() const -> std::vector<DatasetSummary>;
    /// @throws Error unknown_dataset
    [[nodiscard]] auto get_dataset(const std::string& id) const -> DatasetRecord;

    /**
     * @brief final = (current ∪ add) \ remove per uid, persisted then mirrored into `index`.
     *
     * Uids unknown to the index are reported, the rest still applied.
     * @throws Error invalid_tag (before anything changes)
     */
    auto bulk_tag(const std::vector<std::string>& uids, const std::vector<std::string>& add,
                  const std::vector<std::string>& remove, index::MetadataIndex& index) -> std::vector<TagOutcome>;

    [[nodiscard]] auto tags(const std::string& series_uid) const -> std::vector<std::string>;
    [[nodiscard]] auto all_tags() const -> std::map<std::string, std::vector<std::string>>;

    /// Pushes store tags into index documents that disagree. Returns the number of documents fixed.
    auto reconcile(index::MetadataIndex& index) const -> std::size_t;

    [[nodiscard]] auto fsck(const index::MetadataIndex& index) const -> FsckReport;

    /// Writes a snapshot and resets the journal.
    void snapshot();

    [[nodiscard]] auto replay_report() const -> const StoreReplayReport& { return replay_; }

    /// Operations appended since the last snapshot after which one is taken automatically.
    static constexpr std::uint64_t kSnapshotEvery = 1000;

private:
    struct State {
        std::map<std::string, DatasetRecord> datasets;  ///< by id
        std::map<std::string, std::set<std::string>> tags;
        std::uint64_t next_id = 1;
        std::uint64_t seq = 0;
    };

    void load();
    void apply(State& state, const nlohmann::json& op) const;
    void append(nlohmann::json op);
    void snapshot_locked();

    std::filesystem::path journal_path_;
    std::filesystem::path snapshot_path_;
    mutable std::mutex mutex_;
    State state_;
    fileio::AppendLog journal_;
    std::uint64_t since_snapshot_ = 0;
    StoreReplayReport replay_;
};

}  // namespace curator::store
