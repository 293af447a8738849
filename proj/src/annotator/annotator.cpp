/**
 * @file annotator.cpp
 */

#include "curator/annotator/annotator.hpp"

#include "curator/common/error.hpp"
#include "curator/common/fileio.hpp"
#include "curator/common/text.hpp"
#include "curator/dicom/parser.hpp"

#include "json.hpp"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <set>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace curator::annotator {

using nlohmann::json;

namespace {

auto manifest_error(const std::string& msg) -> Error { return Error(ErrorCode::invalid_manifest, msg); }

auto count_of(std::string_view hay, std::string_view needle) -> std::size_t {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
    return n;
}

auto replace_all(std::string s, std::string_view from, const std::string& to) -> std::string {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

auto violation(const std::string& msg) -> Error { return Error(ErrorCode::protocol_violation, msg); }

/// Absolute program path: as given when it contains '/', else the first PATH hit.
auto resolve_program(const std::string& prog, const std::filesystem::path& base_dir) -> std::string {
    if (prog.find('/') != std::string::npos) {
        std::filesystem::path p(prog);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        return p.string();
    }
    const char* path = std::getenv("PATH");
    for (const auto& dir : text::split(path != nullptr ? path : "/usr/bin:/bin", ':')) {
        if (dir.empty()) continue;
        const auto candidate = std::filesystem::path(dir) / prog;
        if (::access(candidate.c_str(), X_OK) == 0) return candidate.string();
    }
    return prog;
}

struct ChildOutcome {
    int exit_code = -1;
    bool timed_out = false;
    std::string stderr_text;
};

auto run_child(const std::vector<std::string>& argv, const std::vector<std::string>& extra_env,
               std::chrono::milliseconds timeout) -> ChildOutcome {
    std::vector<std::string> env_store;
    for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
        const std::string_view kv(*e);
        const bool overridden = std::any_of(extra_env.begin(), extra_env.end(), [&](const std::string& x) {
            return kv.substr(0, kv.find('=') + 1) == std::string_view(x).substr(0, x.find('=') + 1);
        });
        if (!overridden) env_store.emplace_back(kv);
    }
    env_store.insert(env_store.end(), extra_env.begin(), extra_env.end());
    std::vector<char*> envp;
    for (auto& s : env_store) envp.push_back(s.data());
    envp.push_back(nullptr);
    auto args = argv;
    std::vector<char*> cargv;
    for (auto& s : args) cargv.push_back(s.data());
    cargv.push_back(nullptr);

    int err_pipe[2];
    if (::pipe2(err_pipe, O_CLOEXEC) != 0) throw Error(ErrorCode::internal, "pipe failed");
    const int devnull = ::open("/dev/null", O_RDWR | O_CLOEXEC);
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(err_pipe[0]);
        ::close(err_pipe[1]);
        if (devnull >= 0) ::close(devnull);
        throw Error(ErrorCode::internal, "fork failed");
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        if (devnull >= 0) {
            ::dup2(devnull, STDIN_FILENO);
            ::dup2(devnull, STDOUT_FILENO);
        }
        ::dup2(err_pipe[1], STDERR_FILENO);
        ::execve(cargv[0], cargv.data(), envp.data());
        const char msg[] = "exec failed\n";
        (void)!::write(STDERR_FILENO, msg, sizeof msg - 1);
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(err_pipe[1]);
    if (devnull >= 0) ::close(devnull);

    ChildOutcome out;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    constexpr std::size_t kMaxStderr = 64 * 1024;
    bool open = true;
    int status = 0;
    bool reaped = false;
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            out.timed_out = true;
            break;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        if (open) {
            pollfd pfd{err_pipe[0], POLLIN, 0};
            const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 50)));
            if (rc > 0) {
                char buf[4096];
                const auto n = ::read(err_pipe[0], buf, sizeof buf);
                if (n > 0) {
                    if (out.stderr_text.size() < kMaxStderr) out.stderr_text.append(buf, static_cast<std::size_t>(n));
                } else if (n == 0 || errno != EINTR) {
                    open = false;
                }
            }
        } else {
            std::this_thread::sleep_for(std::chrono::milliseconds(std::min<long long>(left, 10)));
        }
        const pid_t w = ::waitpid(pid, &status, WNOHANG);
        if (w == pid) {
            reaped = true;
            break;
        }
    }
    if (!reaped) ::waitpid(pid, &status, 0);
    // Drain what the child wrote before exiting.
    if (open && !out.timed_out) {
        ::fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);
        char buf[4096];
        ssize_t n = 0;
        while ((n = ::read(err_pipe[0], buf, sizeof buf)) > 0 && out.stderr_text.size() < kMaxStderr) {
            out.stderr_text.append(buf, static_cast<std::size_t>(n));
        }
    }
    ::close(err_pipe[0]);
    if (WIFEXITED(status)) {
        out.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        out.exit_code = 128 + WTERMSIG(status);
    }
    return out;
}

void materialize_input(const std::vector<std::filesystem::path>& files, const std::filesystem::path& input_dir) {
    std::filesystem::remove_all(input_dir);
    std::filesystem::create_directories(input_dir);
    std::size_t i = 0;
    for (const auto& f : files) {
        std::error_code ec;
        if (!std::filesystem::is_regular_file(f, ec)) throw Error(ErrorCode::path_not_found, "missing input file " + f.string());
        const auto target = input_dir / (std::to_string(i++) + "_" + f.filename().string());
        std::filesystem::create_symlink(std::filesystem::absolute(f), target, ec);
        if (ec) std::filesystem::copy_file(f, target);
    }
}

auto read_result_json(const std::filesystem::path& path, const std::string& series_uid, AnnotationResult& result)
    -> void {
    json j;
    try {
        j = json::parse(fileio::read_text(path));
    } catch (const json::exception& e) {
        throw violation(std::string("result.json is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw violation("result.json must be an object");
    if (j.contains("series_uid")) {
        if (!j["series_uid"].is_string()) throw violation("result.json series_uid must be a string");
        if (j["series_uid"].get<std::string>() != series_uid) {
            throw violation("result.json series_uid '" + j["series_uid"].get<std::string>() + "' does not match");
        }
    }
    if (j.contains("structures")) {
        if (!j["structures"].is_array()) throw violation("result.json structures must be an array");
        std::vector<std::string> add;
        for (const auto& s : j["structures"]) {
            if (!s.is_string()) throw violation("result.json structures must be strings");
            add.push_back(s.get<std::string>());
        }
        result.structures = union_structures(std::move(result.structures), add);
    }
    if (j.contains("body_part") && !j["body_part"].is_null()) {
        if (!j["body_part"].is_string()) throw violation("result.json body_part must be a string or null");
        const auto bp = text::to_lower(text::trim(j["body_part"].get<std::string>()));
        if (!bp.empty()) result.body_part = bp;
    }
}

}  // namespace

auto AnnotatorManifest::has_label(std::string_view label) const -> bool {
    return std::any_of(labels.begin(), labels.end(), [&](const std::string& l) { return text::iequals(l, label); });
}

void validate_manifest(const AnnotatorManifest& m) {
    if (text::trim(m.name).empty()) throw manifest_error("manifest name is empty");
    if (m.name.find('/') != std::string::npos) throw manifest_error("manifest name must not contain '/'");
    if (text::trim(m.version).empty()) throw manifest_error("manifest version is empty");
    if (m.labels.empty()) throw manifest_error("manifest has no labels");
    std::set<std::string> seen;
    for (const auto& l : m.labels) {
        if (text::trim(l).empty()) throw manifest_error("manifest has an empty label");
        if (!seen.insert(text::to_lower(l)).second) throw manifest_error("duplicate label '" + l + "'");
    }
    for (const auto* ph : {"{input_dir}", "{output_dir}"}) {
        if (count_of(m.invocation, ph) != 1) {
            throw manifest_error(std::string("invocation must contain ") + ph + " exactly once");
        }
    }
    for (const auto& [group, members] : m.label_groups) {
        for (const auto& l : members) {
            if (!m.has_label(l)) throw manifest_error("group '" + group + "' lists unknown label '" + l + "'");
        }
    }
}

auto parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) -> AnnotatorManifest {
    AnnotatorManifest m;
    try {
        const auto j = json::parse(json_text);
        if (!j.is_object()) throw manifest_error("manifest must be a JSON object");
        m.name = j.at("name").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.labels = j.at("labels").get<std::vector<std::string>>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "segmentation") {
            m.kind = AnnotatorKind::segmentation;
        } else if (kind == "classification") {
            m.kind = AnnotatorKind::classification;
        } else {
            throw manifest_error("unknown annotator kind '" + kind + "'");
        }
        m.invocation = j.at("invocation").get<std::string>();
        if (j.contains("label_groups")) {
            m.label_groups = j["label_groups"].get<std::map<std::string, std::vector<std::string>>>();
        }
    } catch (const json::exception& e) {
        throw manifest_error(std::string("malformed manifest: ") + e.what());
    }
    m.base_dir = base_dir;
    validate_manifest(m);
    return m;
}

auto load_manifest(const std::filesystem::path& path) -> AnnotatorManifest {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw Error(ErrorCode::path_not_found, "no manifest at " + path.string());
    return parse_manifest(fileio::read_text(path), path.parent_path());
}

auto load_manifests(const std::filesystem::path& dir, std::vector<std::string>* rejected)
    -> std::map<std::string, AnnotatorManifest> {
    std::map<std::string, AnnotatorManifest> out;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) return out;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > 14 && name.ends_with(".manifest.json")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        try {
            auto m = load_manifest(f);
            auto name = m.name;
            out.insert_or_assign(std::move(name), std::move(m));
        } catch (const Error& e) {
            if (rejected != nullptr) rejected->push_back(f.filename().string() + ": " + e.what());
        }
    }
    return out;
}

auto body_part_synonyms() -> const std::map<std::string, std::string>& {
    static const std::map<std::string, std::string> table = {
        {"HEAD", "head"},
        {"BRAIN", "head"},
        {"SKULL", "head"},
        {"NECK", "neck"},
        {"HEADNECK", "head neck"},
        {"CHEST", "chest"},
        {"THORAX", "chest"},
        {"LUNG", "chest"},
        {"HEART", "chest"},
        {"BREAST", "breast"},
        {"ABDOMEN", "abdomen"},
        {"ABD", "abdomen"},
        {"LIVER", "abdomen"},
        {"KIDNEY", "abdomen"},
        {"PELVIS", "pelvis"},
        {"HIP", "pelvis"},
        {"PROSTATE", "pelvis"},
        {"CHESTABDOMEN", "chest abdomen"},
        {"ABDOMENPELVIS", "abdomen pelvis"},
        {"CHESTABDPELVIS", "chest abdomen pelvis"},
        {"WHOLEBODY", "whole body"},
        {"SPINE", "spine"},
        {"CSPINE", "spine"},
        {"TSPINE", "spine"},
        {"LSPINE", "spine"},
        {"KNEE", "knee"},
        {"SHOULDER", "shoulder"},
        {"EXTREMITY", "extremity"},
        {"ARM", "extremity"},
        {"LEG", "extremity"},
    };
    return table;
}

auto normalize_body_part(std::string_view raw) -> std::optional<std::string> {
    std::string key;
    for (char c : raw) {
        if (c == ' ' || c == '_' || c == '-' || c == '^') continue;
        key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    const auto& table = body_part_synonyms();
    auto it = table.find(key);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

auto annotate_from_headers(const index::SeriesDocument& doc) -> AnnotationResult {
    AnnotationResult r;
    r.series_uid = doc.series_uid;
    r.source = std::string(kHeaderAnnotatorSource);
    if (auto it = doc.fields.find("BodyPartExamined"); it != doc.fields.end()) {
        for (const auto& v : it->second.values) {
            if ((r.body_part = normalize_body_part(v))) break;
        }
    }
    return r;
}

auto seg_references(const dicom::SegmentationMasks& seg, const index::SeriesDocument& doc) -> bool {
    if (!seg.referenced_series_uid.empty() && seg.referenced_series_uid == doc.series_uid) return true;
    for (const auto& s : seg.segments) {
        for (const auto& f : s.frames) {
            if (!f.referenced_sop_uid.empty() &&
                std::binary_search(doc.sop_instance_uids.begin(), doc.sop_instance_uids.end(), f.referenced_sop_uid)) {
                return true;
            }
        }
    }
    return false;
}

auto union_structures(std::vector<std::string> current, const std::vector<std::string>& add) -> std::vector<std::string> {
    for (const auto& a : add) {
        auto l = text::to_lower(text::trim(a));
        if (l.empty() || std::find(current.begin(), current.end(), l) != current.end()) continue;
        current.push_back(std::move(l));
    }
    return current;
}

auto ingest_seg_labels(const dicom::SegmentationMasks& seg, index::SeriesDocument doc) -> index::SeriesDocument {
    if (!seg_references(seg, doc)) {
        throw Error(ErrorCode::unreferenced_segmentation, "segmentation does not reference series '" + doc.series_uid + "'");
    }
    std::vector<std::string> labels;
    for (const auto& s : seg.segments) labels.push_back(s.label);
    doc.anatomical_structures = union_structures(std::move(doc.anatomical_structures), labels);
    return doc;
}

auto build_argv(const AnnotatorManifest& manifest, const std::filesystem::path& input_dir,
                const std::filesystem::path& output_dir) -> std::vector<std::string> {
    std::vector<std::string> argv;
    for (auto& tok : text::split(manifest.invocation, ' ')) {
        const auto t = text::trim(tok);
        if (t.empty()) continue;
        argv.push_back(replace_all(replace_all(std::string(t), "{input_dir}", input_dir.string()), "{output_dir}",
                                   output_dir.string()));
    }
    if (argv.empty()) throw manifest_error("invocation is empty");
    argv[0] = resolve_program(argv[0], manifest.base_dir);
    return argv;
}

auto run_external(const AnnotatorManifest& manifest, const std::vector<std::filesystem::path>& series_files,
                  const std::string& series_uid, const RunOptions& options) -> AnnotationResult {
    validate_manifest(manifest);
    if (options.work_dir.empty()) throw Error(ErrorCode::bad_request, "run_external needs a work directory");
    const auto input_dir = options.work_dir / "input";
    const auto output_dir = options.work_dir / "output";
    materialize_input(series_files, input_dir);
    std::filesystem::remove_all(output_dir);
    std::filesystem::create_directories(output_dir);

    const auto argv = build_argv(manifest, input_dir, output_dir);
    const auto child = run_child(argv, {"CURATOR_SERIES_UID=" + series_uid, "CURATOR_OUTPUT_DIR=" + output_dir.string()},
                                 options.timeout);
    if (child.timed_out) {
        throw Error(ErrorCode::timeout, manifest.source() + " exceeded " + std::to_string(options.timeout.count()) + " ms");
    }
    if (child.exit_code != 0) {
        throw Error(ErrorCode::annotator_failed,
                    manifest.source() + " exited with " + std::to_string(child.exit_code) + ": " + child.stderr_text);
    }

    AnnotationResult result;
    result.series_uid = series_uid;
    result.source = manifest.source();
    bool any_output = false;
    std::vector<std::filesystem::path> outputs;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(output_dir)) {
        if (entry.is_regular_file()) outputs.push_back(entry.path());
    }
    std::sort(outputs.begin(), outputs.end());
    for (const auto& path : outputs) {
        if (path.filename() == "result.json") {
            read_result_json(path, series_uid, result);
            any_output = true;
        } else if (text::iequals(path.extension().string(), ".dcm")) {
            dicom::SegmentationMasks seg;
            try {
                const auto bytes = fileio::read_bytes(path);
                seg = dicom::parse_seg(dicom::parse_file(bytes));
            } catch (const Error& e) {
                throw violation("output " + path.filename().string() + " is not a readable SEG: " + e.what());
            }
            std::vector<std::string> labels;
            for (const auto& s : seg.segments) labels.push_back(s.label);
            result.structures = union_structures(std::move(result.structures), labels);
            result.produced_seg_files.push_back(path);
            any_output = true;
        }
    }
    if (!any_output) throw violation(manifest.source() + " produced neither result.json nor a SEG file");
    for (const auto& s : result.structures) {
        if (!manifest.has_label(s)) throw violation("label '" + s + "' is not declared by " + manifest.source());
    }
    if (manifest.kind == AnnotatorKind::classification && result.body_part && !manifest.has_label(*result.body_part)) {
        throw violation("body part '" + *result.body_part + "' is not declared by " + manifest.source());
    }
    return result;
}

}  // namespace curator::annotator
