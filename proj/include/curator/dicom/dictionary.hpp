/**
 * @file dictionary.hpp
 * @brief Bundled data dictionary of common public tags
 */
#pragma once

#include "curator/dicom/dataset.hpp"
#include "curator/dicom/tag.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace curator::dicom {

struct TagInfo {
    std::string keyword;
    Vr vr;

    auto operator==(const TagInfo&) const -> bool = default;
};

struct DictionaryEntry {
    DicomTag tag;
    std::string_view vr;
    std::string_view keyword;
};

/// Total: unknown tags yield `unknown_GGGG_EEEE` / UN. Group lengths are UL,
/// private creators (odd group, element 0x0010-0x00FF) are LO.
[[nodiscard]] auto lookup_tag(DicomTag tag) -> TagInfo;

/// Whether `tag` is in the bundled table.
[[nodiscard]] auto is_known_tag(DicomTag tag) -> bool;

[[nodiscard]] auto find_keyword(std::string_view keyword) -> std::optional<DicomTag>;

/// The bundled table, sorted by tag.
[[nodiscard]] auto dictionary_entries() -> std::span<const DictionaryEntry>;

}  // namespace curator::dicom
