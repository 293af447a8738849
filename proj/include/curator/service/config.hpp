/**
 * @file config.hpp
 * @brief Service configuration: `key = value` file plus CURATOR_* environment overrides
 */
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace curator::service {

struct ServiceConfig {
    std::filesystem::path archive_dir = "curator-data/archive";
    std::filesystem::path data_dir = "curator-data/state";
    std::filesystem::path annotator_dir;  ///< `*.manifest.json`; empty disables external annotators
    std::filesystem::path static_dir;     ///< built web UI served under `/`
    std::string bind = "127.0.0.1";
    int port = 8042;
    std::uint32_t thumb_edge = 128;
    std::chrono::milliseconds annotator_timeout{600'000};
    std::size_t annotator_workers = 2;

    /// @throws Error invalid_config
    void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
[[nodiscard]] auto process_env() -> EnvLookup;

/**
 * @brief Parses `key = value` lines (`#` comments, optional double quotes).
 *
 * Keys: archive_dir, data_dir, annotator_dir, static_dir, bind, port,
 * thumb_edge, annotator_timeout_s, annotator_workers. Relative paths resolve
 * against `base_dir`.
 *
 * @throws Error invalid_config
 */
void apply_config_text(ServiceConfig& cfg, std::string_view text, const std::filesystem::path& base_dir = {});

/// CURATOR_ARCHIVE_DIR, CURATOR_DATA_DIR, CURATOR_BIND (`host` or `host:port`), CURATOR_ANNOTATOR_DIR, CURATOR_THUMB_EDGE.
void apply_env(ServiceConfig& cfg, const EnvLookup& env);

/// Defaults, then the file (when given), then the environment; validated. @throws Error invalid_config, path_not_found
[[nodiscard]] auto load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) -> ServiceConfig;

}  // namespace curator::service
