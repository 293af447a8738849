/**
 * @file config.cpp
 */

#include "curator/service/config.hpp"

#include "curator/common/error.hpp"
#include "curator/common/fileio.hpp"
#include "curator/common/text.hpp"

#include <cstdlib>

namespace curator::service {

namespace {

auto config_error(const std::string& msg) -> Error { return Error(ErrorCode::invalid_config, msg); }

auto to_int(const std::string& key, std::string_view value) -> long long {
    const auto v = text::parse_int(value);
    if (!v) throw config_error(key + ": expected an integer, got '" + std::string(value) + "'");
    return *v;
}

auto resolve(const std::filesystem::path& base, std::string_view value) -> std::filesystem::path {
    std::filesystem::path p{std::string(value)};
    if (p.is_relative() && !base.empty()) p = base / p;
    return p;
}

void set_bind(ServiceConfig& cfg, std::string_view value) {
    const auto colon = value.rfind(':');
    if (colon != std::string_view::npos && value.find(':') == colon) {
        cfg.bind = std::string(value.substr(0, colon));
        cfg.port = static_cast<int>(to_int("bind", value.substr(colon + 1)));
    } else {
        cfg.bind = std::string(value);
    }
}

}  // namespace

void ServiceConfig::validate() const {
    if (archive_dir.empty()) throw config_error("archive_dir is empty");
    if (data_dir.empty()) throw config_error("data_dir is empty");
    if (bind.empty()) throw config_error("bind address is empty");
    if (port < 0 || port > 65535) throw config_error("port out of range");
    if (thumb_edge < 32 || thumb_edge > 512) throw config_error("thumb_edge must be within 32..512");
    if (annotator_timeout.count() <= 0) throw config_error("annotator timeout must be positive");
    if (annotator_workers == 0 || annotator_workers > 64) throw config_error("annotator_workers must be within 1..64");
}

auto process_env() -> EnvLookup {
    return [](const std::string& name) -> std::optional<std::string> {
        const char* v = std::getenv(name.c_str());
        if (v == nullptr) return std::nullopt;
        return std::string(v);
    };
}

void apply_config_text(ServiceConfig& cfg, std::string_view body, const std::filesystem::path& base_dir) {
    int line_no = 0;
    for (const auto& raw : text::split(body, '\n')) {
        ++line_no;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw config_error("line " + std::to_string(line_no) + ": expected key = value");
        const auto key = text::to_lower(text::trim(line.substr(0, eq)));
        auto value = text::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key == "archive_dir") {
            cfg.archive_dir = resolve(base_dir, value);
        } else if (key == "data_dir") {
            cfg.data_dir = resolve(base_dir, value);
        } else if (key == "annotator_dir") {
            cfg.annotator_dir = resolve(base_dir, value);
        } else if (key == "static_dir") {
            cfg.static_dir = resolve(base_dir, value);
        } else if (key == "bind") {
            set_bind(cfg, value);
        } else if (key == "port") {
            cfg.port = static_cast<int>(to_int(key, value));
        } else if (key == "thumb_edge") {
            cfg.thumb_edge = static_cast<std::uint32_t>(to_int(key, value));
        } else if (key == "annotator_timeout_s") {
            cfg.annotator_timeout = std::chrono::seconds(to_int(key, value));
        } else if (key == "annotator_workers") {
            cfg.annotator_workers = static_cast<std::size_t>(to_int(key, value));
        } else {
            throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
}

void apply_env(ServiceConfig& cfg, const EnvLookup& env) {
    if (auto v = env("CURATOR_ARCHIVE_DIR")) cfg.archive_dir = *v;
    if (auto v = env("CURATOR_DATA_DIR")) cfg.data_dir = *v;
    if (auto v = env("CURATOR_BIND")) set_bind(cfg, *v);
    if (auto v = env("CURATOR_ANNOTATOR_DIR")) cfg.annotator_dir = *v;
    if (auto v = env("CURATOR_THUMB_EDGE")) cfg.thumb_edge = static_cast<std::uint32_t>(to_int("CURATOR_THUMB_EDGE", *v));
}

auto load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) -> ServiceConfig {
    ServiceConfig cfg;
    if (file) {
        std::error_code ec;
        if (!std::filesystem::is_regular_file(*file, ec)) throw Error(ErrorCode::path_not_found, "no config file " + file->string());
        apply_config_text(cfg, fileio::read_text(*file), file->parent_path());
    }
    apply_env(cfg, env);
    cfg.validate();
    return cfg;
}

}  // namespace curator::service
