/**
 * @file common_test.cpp
 */

#include "curator/common/error.hpp"
#include "curator/common/fileio.hpp"
#include "curator/common/text.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <set>

namespace {

using namespace curator;

TEST(ErrorCodes, StringsRoundTripAndAreUnique) {
    std::set<std::string_view> seen;
    for (auto code : all_error_codes()) {
        const auto s = to_string(code);
        EXPECT_TRUE(seen.insert(s).second) << s;
        EXPECT_EQ(error_code_from_string(s), code);
        const int status = http_status(code);
        EXPECT_TRUE(status >= 400 && status < 600) << s;
    }
    EXPECT_EQ(http_status(ErrorCode::parse_error), 422);
    EXPECT_EQ(http_status(ErrorCode::unknown_series), 404);
    EXPECT_EQ(http_status(ErrorCode::duplicate_name), 409);
    EXPECT_EQ(http_status(ErrorCode::invalid_tag), 400);
    EXPECT_FALSE(error_code_from_string("nope").has_value());
}

TEST(Text, Basics) {
    EXPECT_EQ(text::to_lower("AbC\xC3\x84"), "abc\xC3\x84");
    EXPECT_TRUE(text::iequals("Liver", "LIVER"));
    EXPECT_EQ(text::trim("  x \t"), "x");
    EXPECT_EQ(text::split("a\\b\\", '\\'), (std::vector<std::string>{"a", "b", ""}));
    EXPECT_EQ(text::parse_double(" 2.5 "), 2.5);
    EXPECT_FALSE(text::parse_double("abc").has_value());
    EXPECT_FALSE(text::parse_double("1e999").has_value());
    EXPECT_EQ(text::format_number(3.0), "3");
    EXPECT_EQ(text::format_number(0.1), "0.1");
    EXPECT_EQ(text::latin1_to_utf8("\xFC"), "\xC3\xBC");
    EXPECT_EQ(text::utf8_to_latin1("\xC3\xBC"), "\xFC");
}

TEST(FileIo, AtomicWriteAndLogTail) {
    fixture::TempDir dir;
    const auto p = dir.path() / "a.txt";
    fileio::write_atomic(p, "hello");
    EXPECT_EQ(fileio::read_text(p), "hello");

    const auto log_path = dir.path() / "log";
    {
        fileio::AppendLog log(log_path);
        log.append("one", true);
        log.append("two", false);
    }
    {
        std::ofstream out(log_path, std::ios::app);
        out << "partial";
    }
    std::vector<std::string> lines;
    const auto end = fileio::scan_lines(log_path, [&](std::string_view l) {
        lines.emplace_back(l);
        return true;
    });
    EXPECT_EQ(lines, (std::vector<std::string>{"one", "two"}));
    EXPECT_EQ(end, 8U);
    fileio::truncate_file(log_path, end);
    EXPECT_EQ(fileio::read_text(log_path), "one\ntwo\n");
}

TEST(FileIo, DirLockIsExclusive) {
    fixture::TempDir dir;
    fileio::DirLock first(dir.path());
    try {
        fileio::DirLock second(dir.path());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::data_dir_locked);
    }
}

}  // namespace
