/**
 * @file fileio.hpp
 * @brief File helpers: whole-file reads, atomic replace, append-only logs
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace curator::fileio {

[[nodiscard]] auto read_bytes(const std::filesystem::path& path) -> std::vector<std::uint8_t>;

[[nodiscard]] auto read_text(const std::filesystem::path& path) -> std::string;

/// Reads a gzip (or plain) file through zlib.
[[nodiscard]] auto read_gzip(const std::filesystem::path& path) -> std::vector<std::uint8_t>;

/// Writes to `<path>.tmp`, fsyncs, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Append-only line log. Each append is a single write(2) of the full line.
class AppendLog {
public:
    AppendLog() = default;
    explicit AppendLog(const std::filesystem::path& path);
    ~AppendLog();

    AppendLog(const AppendLog&) = delete;
    auto operator=(const AppendLog&) -> AppendLog& = delete;
    AppendLog(AppendLog&& other) noexcept;
    auto operator=(AppendLog&& other) noexcept -> AppendLog&;

    /// Appends `line` plus '\n'. Throws Error(storage_error) on failure.
    void append(std::string_view line, bool sync);
    void sync();
    /// Drops everything and writes `header` as the first line.
    void reset(std::string_view header);

    [[nodiscard]] auto size() const -> std::uint64_t { return size_; }
    [[nodiscard]] auto is_open() const -> bool { return fd_ >= 0; }

private:
    int fd_ = -1;
    std::uint64_t size_ = 0;
    std::filesystem::path path_;
};

/// Reads complete '\n'-terminated lines from `path`, calling `on_line` for
/// each until it returns false. Returns the byte offset just past the last
/// accepted line. A missing file yields 0.
auto scan_lines(const std::filesystem::path& path,
                const std::function<bool(std::string_view)>& on_line) -> std::uint64_t;

/// Truncates `path` to `size` bytes.
void truncate_file(const std::filesystem::path& path, std::uint64_t size);

/// Exclusive advisory lock on `<dir>/LOCK`, released on destruction.
class DirLock {
public:
    DirLock() = default;
    explicit DirLock(const std::filesystem::path& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    auto operator=(const DirLock&) -> DirLock& = delete;
    DirLock(DirLock&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    auto operator=(DirLock&& other) noexcept -> DirLock&;

private:
    int fd_ = -1;
};

/// Milliseconds since the Unix epoch.
[[nodiscard]] auto now_ms() -> std::int64_t;

/// `YYYY-MM-DDTHH:MM:SS.mmmZ`
[[nodiscard]] auto iso8601_utc(std::int64_t epoch_ms) -> std::string;

}  // namespace curator::fileio
