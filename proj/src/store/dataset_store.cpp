/**
 * @file dataset_store.cpp
 */

#include "curator/store/dataset_store.hpp"

#include "curator/common/error.hpp"
#include "curator/common/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>

namespace curator::store {

using nlohmann::json;

namespace {

constexpr std::string_view kHeader = R"({"v":1})";

auto tag_char_ok(char c) -> bool {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == ' ' || c == '_' || c == ':' || c == '-';
}

auto format_id(std::uint64_t n) -> std::string {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ds-%06llu", static_cast<unsigned long long>(n));
    return buf;
}

auto header_ok(std::string_view line) -> bool {
    try {
        const auto j = json::parse(line);
        return j.is_object() && j.value("v", 0) == 1;
    } catch (const json::exception&) {
        return false;
    }
}

auto normalize_all(const std::vector<std::string>& tags) -> std::set<std::string> {
    std::set<std::string> out;
    for (const auto& t : tags) out.insert(normalize_tag(t));
    return out;
}

}  // namespace

auto normalize_tag(std::string_view tag) -> std::string {
    auto t = text::to_lower(tag);
    if (t.empty() || t.size() > 64) throw Error(ErrorCode::invalid_tag, "tag must be 1..64 characters");
    if (!std::all_of(t.begin(), t.end(), tag_char_ok)) {
        throw Error(ErrorCode::invalid_tag, "tag '" + t + "' has characters outside [a-z0-9 _:-]");
    }
    return t;
}

void validate_dataset_name(std::string_view name) {
    if (name.empty() || name.size() > 128) throw Error(ErrorCode::invalid_name, "dataset name must be 1..128 characters");
    if (text::trim(name).empty()) throw Error(ErrorCode::invalid_name, "dataset name is blank");
    for (unsigned char c : name) {
        if (c < 0x20 || c == 0x7f) throw Error(ErrorCode::invalid_name, "dataset name has control characters");
    }
}

DatasetStore::DatasetStore(const std::filesystem::path& dir)
    : journal_path_(dir / "datasets.journal"), snapshot_path_(dir / "datasets.snapshot") {
    std::filesystem::create_directories(dir);
    load();
}

void DatasetStore::load() {
    std::error_code ec;
    if (std::filesystem::exists(snapshot_path_, ec)) {
        const auto body = fileio::read_text(snapshot_path_);
        const auto nl = body.find('\n');
        if (nl == std::string::npos || !header_ok(std::string_view(body).substr(0, nl))) {
            throw Error(ErrorCode::storage_error, "dataset snapshot is corrupt");
        }
        try {
            const auto s = json::parse(body.substr(nl + 1));
            state_.seq = s.at("seq").get<std::uint64_t>();
            state_.next_id = s.at("next_id").get<std::uint64_t>();
            for (const auto& d : s.at("datasets")) {
                DatasetRecord r;
                r.id = d.at("id").get<std::string>();
                r.name = d.at("name").get<std::string>();
                r.created = d.at("created").get<std::int64_t>();
                for (const auto& u : d.at("series")) r.series.insert(u.get<std::string>());
                state_.datasets.emplace(r.id, std::move(r));
            }
            for (const auto& [uid, tags] : s.at("tags").items()) {
                auto& set = state_.tags[uid];
                for (const auto& t : tags) set.insert(t.get<std::string>());
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::storage_error, std::string("dataset snapshot is corrupt: ") + e.what());
        }
        replay_.snapshot_loaded = true;
    }

    bool first = true;
    bool has_header = false;
    const auto accepted = fileio::scan_lines(journal_path_, [&](std::string_view line) {
        if (first) {
            first = false;
            has_header = header_ok(line);
            return has_header;
        }
        json op;
        try {
            op = json::parse(line);
            if (!op.is_object() || !op.contains("seq") || !op.contains("op")) return false;
        } catch (const json::exception&) {
            return false;
        }
        const auto seq = op.value("seq", std::uint64_t{0});
        if (seq <= state_.seq) return true;
        auto next = state_;
        try {
            apply(next, op);
        } catch (const std::exception&) {
            return false;
        }
        state_ = std::move(next);
        ++replay_.operations;
        ++since_snapshot_;
        return true;
    });
    const auto size = std::filesystem::exists(journal_path_, ec) ? std::filesystem::file_size(journal_path_, ec) : 0;
    journal_ = fileio::AppendLog(journal_path_);
    if (!has_header) {
        replay_.truncated_bytes = size;
        journal_.reset(kHeader);
        since_snapshot_ = 0;
        if (replay_.operations > 0) snapshot_locked();
    } else if (accepted < size) {
        replay_.truncated_bytes = size - accepted;
        journal_ = fileio::AppendLog();
        fileio::truncate_file(journal_path_, accepted);
        journal_ = fileio::AppendLog(journal_path_);
    }
}

void DatasetStore::apply(State& state, const json& op) const {
    const auto kind = op.at("op").get<std::string>();
    if (kind == "create") {
        DatasetRecord r;
        r.id = op.at("id").get<std::string>();
        r.name = op.at("name").get<std::string>();
        r.created = op.at("created").get<std::int64_t>();
        if (state.datasets.count(r.id) != 0) throw Error(ErrorCode::storage_error, "duplicate dataset id in journal");
        state.next_id = std::max(state.next_id, op.at("n").get<std::uint64_t>() + 1);
        state.datasets.emplace(r.id, std::move(r));
    } else if (kind == "members") {
        auto& r = state.datasets.at(op.at("id").get<std::string>());
        for (const auto& u : op.at("add")) r.series.insert(u.get<std::string>());
        for (const auto& u : op.at("remove")) r.series.erase(u.get<std::string>());
    } else if (kind == "tags") {
        for (const auto& [uid, tags] : op.at("set").items()) {
            std::set<std::string> s;
            for (const auto& t : tags) s.insert(t.get<std::string>());
            if (s.empty()) {
                state.tags.erase(uid);
            } else {
                state.tags[uid] = std::move(s);
            }
        }
    } else {
        throw Error(ErrorCode::storage_error, "unknown journal operation '" + kind + "'");
    }
    state.seq = op.at("seq").get<std::uint64_t>();
}

void DatasetStore::append(json op) {
    op["seq"] = state_.seq + 1;
    auto next = state_;
    apply(next, op);
    journal_.append(op.dump(), true);
    state_ = std::move(next);
    if (++since_snapshot_ >= kSnapshotEvery) snapshot_locked();
}

auto DatasetStore::create_dataset(const std::string& name) -> DatasetRecord {
    validate_dataset_name(name);
    std::lock_guard lock(mutex_);
    for (const auto& [id, r] : state_.datasets) {
        if (text::iequals(r.name, name)) throw Error(ErrorCode::duplicate_name, "dataset '" + r.name + "' already exists");
    }
    const auto n = state_.next_id;
    const auto id = format_id(n);
    append({{"op", "create"}, {"id", id}, {"n", n}, {"name", name}, {"created", fileio::now_ms()}});
    return state_.datasets.at(id);
}

auto DatasetStore::modify_membership(const std::string& id, const std::vector<std::string>& add,
                                     const std::vector<std::string>& remove) -> MembershipDelta {
    std::lock_guard lock(mutex_);
    auto it = state_.datasets.find(id);
    if (it == state_.datasets.end()) throw Error(ErrorCode::unknown_dataset, "unknown dataset '" + id + "'");
    const std::set<std::string> add_set(add.begin(), add.end());
    const std::set<std::string> remove_set(remove.begin(), remove.end());
    for (const auto& u : add_set) {
        if (remove_set.count(u) != 0) {
            throw Error(ErrorCode::overlapping_add_remove, "series '" + u + "' is both added and removed");
        }
    }
    MembershipDelta delta;
    json added = json::array();
    json removed = json::array();
    for (const auto& u : add_set) {
        if (it->second.series.count(u) != 0) {
            ++delta.ignored;
        } else {
            added.push_back(u);
        }
    }
    for (const auto& u : remove_set) {
        if (it->second.series.count(u) == 0) {
            ++delta.ignored;
        } else {
            removed.push_back(u);
        }
    }
    delta.ignored += (add.size() - add_set.size()) + (remove.size() - remove_set.size());
    delta.added = added.size();
    delta.removed = removed.size();
    if (!added.empty() || !removed.empty()) {
        append({{"op", "members"}, {"id", id}, {"add", std::move(added)}, {"remove", std::move(removed)}});
    }
    return delta;
}

auto DatasetStore::list_datasets() const -> std::vector<DatasetSummary> {
    std::lock_guard lock(mutex_);
    std::vector<DatasetSummary> out;
    for (const auto& [id, r] : state_.datasets) out.push_back({r.id, r.name, r.series.size()});
    std::sort(out.begin(), out.end(), [](const DatasetSummary& a, const DatasetSummary& b) {
        const auto la = text::to_lower(a.name);
        const auto lb = text::to_lower(b.name);
        return la != lb ? la < lb : a.id < b.id;
    });
    return out;
}

auto DatasetStore::get_dataset(const std::string& id) const -> DatasetRecord {
    std::lock_guard lock(mutex_);
    auto it = state_.datasets.find(id);
    if (it == state_.datasets.end()) throw Error(ErrorCode::unknown_dataset, "unknown dataset '" + id + "'");
    return it->second;
}

auto DatasetStore::bulk_tag(const std::vector<std::string>& uids, const std::vector<std::string>& add,
                            const std::vector<std::string>& remove, index::MetadataIndex& index)
    -> std::vector<TagOutcome> {
    const auto add_set = normalize_all(add);
    const auto remove_set = normalize_all(remove);
    std::lock_guard lock(mutex_);
    std::vector<TagOutcome> out;
    json set = json::object();
    std::map<std::string, std::vector<std::string>> mirror;
    for (const auto& uid : uids) {
        TagOutcome o{uid, std::nullopt, {}};
        if (!index.contains(uid)) {
            o.error = ErrorCode::unknown_series;
            out.push_back(std::move(o));
            continue;
        }
        std::set<std::string> final_tags;
        if (auto it = state_.tags.find(uid); it != state_.tags.end()) final_tags = it->second;
        final_tags.insert(add_set.begin(), add_set.end());
        for (const auto& t : remove_set) final_tags.erase(t);
        o.tags.assign(final_tags.begin(), final_tags.end());
        set[uid] = o.tags;
        mirror[uid] = o.tags;
        out.push_back(std::move(o));
    }
    if (!set.empty()) append({{"op", "tags"}, {"set", std::move(set)}});
    for (auto& [uid, tags] : mirror) index.set_tags(uid, tags);
    return out;
}

auto DatasetStore::tags(const std::string& series_uid) const -> std::vector<std::string> {
    std::lock_guard lock(mutex_);
    auto it = state_.tags.find(series_uid);
    if (it == state_.tags.end()) return {};
    return {it->second.begin(), it->second.end()};
}

auto DatasetStore::all_tags() const -> std::map<std::string, std::vector<std::string>> {
    std::lock_guard lock(mutex_);
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [uid, s] : state_.tags) out.emplace(uid, std::vector<std::string>(s.begin(), s.end()));
    return out;
}

auto DatasetStore::reconcile(index::MetadataIndex& index) const -> std::size_t {
    const auto store_tags = all_tags();
    std::size_t fixed = 0;
    for (const auto& uid : index.series_uids()) {
        auto it = store_tags.find(uid);
        const auto want = it == store_tags.end() ? std::vector<std::string>{} : it->second;
        const auto doc = index.get(uid);
        if (doc && doc->tags != want) {
            index.set_tags(uid, want);
            ++fixed;
        }
    }
    return fixed;
}

auto DatasetStore::fsck(const index::MetadataIndex& index) const -> FsckReport {
    FsckReport report;
    std::lock_guard lock(mutex_);
    for (const auto& [id, r] : state_.datasets) {
        for (const auto& u : r.series) {
            if (!index.contains(u)) report.dangling.emplace_back(id, u);
        }
    }
    for (const auto& [uid, s] : state_.tags) {
        if (!index.contains(uid)) report.orphan_tags.push_back(uid);
    }
    for (const auto& uid : index.series_uids()) {
        const auto doc = index.get(uid);
        if (!doc) continue;
        auto it = state_.tags.find(uid);
        const auto want = it == state_.tags.end() ? std::vector<std::string>{}
                                                  : std::vector<std::string>(it->second.begin(), it->second.end());
        if (doc->tags != want) report.tag_mismatches.push_back(uid);
    }
    return report;
}

void DatasetStore::snapshot() {
    std::lock_guard lock(mutex_);
    snapshot_locked();
}

void DatasetStore::snapshot_locked() {
    json datasets = json::array();
    for (const auto& [id, r] : state_.datasets) {
        datasets.push_back({{"id", r.id}, {"name", r.name}, {"created", r.created}, {"series", r.series}});
    }
    json tags = json::object();
    for (const auto& [uid, s] : state_.tags) tags[uid] = s;
    const json body = {{"seq", state_.seq}, {"next_id", state_.next_id}, {"datasets", std::move(datasets)},
                       {"tags", std::move(tags)}};
    fileio::write_atomic(snapshot_path_, std::string(kHeader) + "\n" + body.dump() + "\n");
    journal_.reset(kHeader);
    since_snapshot_ = 0;
}

}  // namespace curator::store
