/**
 * @file cli.hpp
 * @brief The `curator` command line: ingest, serve, search, aggregate, thumbs, fsck, annotate
 *
 * Exit codes: 0 ok, 1 operational error, 2 usage error (including query syntax).
 * Data goes to `out`, diagnostics to `err`.
 */
#pragma once

#include "curator/service/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace curator::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
[[nodiscard]] auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                       const service::EnvLookup& env = service::process_env()) -> int;

/// Columns printed by `search` when `--cols` is not given.
[[nodiscard]] auto default_search_columns() -> const std::vector<std::string>&;

}  // namespace curator::cli
