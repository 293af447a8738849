/**
 * @file parser.hpp
 * @brief DICOM Part-10 reader and writer (Explicit and Implicit VR Little Endian)
 */
#pragma once

#include "curator/common/error.hpp"
#include "curator/dicom/dataset.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace curator::dicom {

/// Parse failure with the byte offset of the offending element.
class ParseFailure : public Error {
public:
    ParseFailure(ErrorCode code, const std::string& message, std::size_t offset)
        : Error(code, message + " at offset " + std::to_string(offset)), offset_(offset) {}

    [[nodiscard]] auto offset() const -> std::size_t { return offset_; }

private:
    std::size_t offset_;
};

/**
 * @brief Parse a DICOM Part-10 file.
 *
 * Files without the 128-byte preamble and "DICM" magic are accepted only when
 * the first element belongs to group 0002 or 0008. Pixel data is captured raw.
 * Transfer syntaxes other than Explicit/Implicit VR Little Endian produce a
 * metadata-only object with `unsupported_transfer_syntax` set.
 *
 * @throws ParseFailure (malformed_preamble, truncated_element, malformed_element)
 */
[[nodiscard]] auto parse_file(std::span<const std::uint8_t> bytes) -> DicomObject;

/**
 * @brief Serialize to Part-10 bytes.
 *
 * Sequences and items are written with undefined length. The file meta group
 * length is recomputed and the meta TransferSyntaxUID set to the syntax used.
 * Defaults to the object's own transfer syntax.
 */
[[nodiscard]] auto write_file(const DicomObject& obj, std::optional<TransferSyntax> syntax = std::nullopt)
    -> std::vector<std::uint8_t>;

}  // namespace curator::dicom
