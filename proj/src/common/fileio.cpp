/**
 * @file fileio.cpp
 * @brief POSIX-backed file helpers
 */

#include "curator/common/fileio.hpp"

#include "curator/common/error.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

namespace curator::fileio {

namespace {

[[noreturn]] void fail(const std::string& what, const std::filesystem::path& path) {
    throw Error(ErrorCode::storage_error, what + " '" + path.string() + "': " + std::strerror(errno));
}

void write_all(int fd, const char* data, std::size_t len, const std::filesystem::path& path) {
    while (len > 0) {
        const auto n = ::write(fd, data, len);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("write failed", path);
        }
        data += n;
        len -= static_cast<std::size_t>(n);
    }
}

}  // namespace

auto read_bytes(const std::filesystem::path& path) -> std::vector<std::uint8_t> {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::path_not_found, "cannot open '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

auto read_text(const std::filesystem::path& path) -> std::string {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::path_not_found, "cannot open '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

auto read_gzip(const std::filesystem::path& path) -> std::vector<std::uint8_t> {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (gz == nullptr) {
        throw Error(ErrorCode::path_not_found, "cannot open '" + path.string() + "'");
    }
    std::vector<std::uint8_t> out;
    std::uint8_t buf[1 << 16];
    while (true) {
        const int n = gzread(gz, buf, sizeof(buf));
        if (n < 0) {
            gzclose(gz);
            throw Error(ErrorCode::storage_error, "corrupt gzip stream in '" + path.string() + "'");
        }
        if (n == 0) break;
        out.insert(out.end(), buf, buf + n);
    }
    gzclose(gz);
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) fail("cannot create", tmp);
    write_all(fd, contents.data(), contents.size(), tmp);
    if (::fsync(fd) != 0) {
        ::close(fd);
        fail("fsync failed", tmp);
    }
    ::close(fd);
    if (::rename(tmp.c_str(), path.c_str()) != 0) fail("rename failed", path);
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (dfd >= 0) {
        ::fsync(dfd);
        ::close(dfd);
    }
}

AppendLog::AppendLog(const std::filesystem::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) fail("cannot open log", path);
    struct stat st {};
    if (::fstat(fd_, &st) != 0) fail("stat failed", path);
    size_ = static_cast<std::uint64_t>(st.st_size);
}

AppendLog::~AppendLog() {
    if (fd_ >= 0) ::close(fd_);
}

AppendLog::AppendLog(AppendLog&& other) noexcept
    : fd_(other.fd_), size_(other.size_), path_(std::move(other.path_)) {
    other.fd_ = -1;
}

auto AppendLog::operator=(AppendLog&& other) noexcept -> AppendLog& {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = other.fd_;
        size_ = other.size_;
        path_ = std::move(other.path_);
        other.fd_ = -1;
    }
    return *this;
}

void AppendLog::append(std::string_view line, bool sync_now) {
    std::string buf;
    buf.reserve(line.size() + 1);
    buf.append(line);
    buf.push_back('\n');
    write_all(fd_, buf.data(), buf.size(), path_);
    size_ += buf.size();
    if (sync_now) sync();
}

void AppendLog::sync() {
    if (fd_ >= 0 && ::fdatasync(fd_) != 0) fail("fsync failed", path_);
}

void AppendLog::reset(std::string_view header) {
    std::string contents(header);
    contents.push_back('\n');
    write_atomic(path_, contents);
    if (fd_ >= 0) ::close(fd_);
    fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
    if (fd_ < 0) fail("cannot reopen log", path_);
    size_ = contents.size();
}

auto scan_lines(const std::filesystem::path& path,
                const std::function<bool(std::string_view)>& on_line) -> std::uint64_t {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return 0;
    }
    const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::uint64_t accepted = 0;
    std::size_t pos = 0;
    while (pos < data.size()) {
        const auto nl = data.find('\n', pos);
        if (nl == std::string::npos) {
            break;
        }
        if (!on_line(std::string_view(data).substr(pos, nl - pos))) {
            break;
        }
        pos = nl + 1;
        accepted = pos;
    }
    return accepted;
}

void truncate_file(const std::filesystem::path& path, std::uint64_t size) {
    if (::truncate(path.c_str(), static_cast<off_t>(size)) != 0) fail("truncate failed", path);
}

DirLock::DirLock(const std::filesystem::path& dir) {
    const auto path = dir / "LOCK";
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) fail("cannot open lock file", path);
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw Error(ErrorCode::data_dir_locked,
                    "data directory '" + dir.string() + "' is in use by another process");
    }
}

DirLock::~DirLock() {
    if (fd_ >= 0) ::close(fd_);
}

auto DirLock::operator=(DirLock&& other) noexcept -> DirLock& {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

auto now_ms() -> std::int64_t {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

auto iso8601_utc(std::int64_t epoch_ms) -> std::string {
    const std::time_t secs = static_cast<std::time_t>(epoch_ms / 1000);
    std::tm tm{};
    ::gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<int>(epoch_ms % 1000));
    return buf;
}

}  // namespace curator::fileio
