/**
 * @file dataset.hpp
 * @brief In-memory DICOM object model: VR codes, data elements, parsed files
 */
#pragma once

#include "curator/dicom/tag.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace curator::dicom {

/// Two-letter value representation. Unknown codes are preserved verbatim.
struct Vr {
    std::array<char, 2> code{'U', 'N'};

    constexpr Vr() = default;
    constexpr Vr(char a, char b) : code{a, b} {}

    [[nodiscard]] static constexpr auto of(std::string_view s) -> Vr {
        return s.size() == 2 ? Vr{s[0], s[1]} : Vr{'U', 'N'};
    }

    constexpr auto operator==(const Vr&) const -> bool = default;

    [[nodiscard]] auto str() const -> std::string { return {code[0], code[1]}; }
    [[nodiscard]] auto is(std::string_view s) const -> bool {
        return s.size() == 2 && s[0] == code[0] && s[1] == code[1];
    }

    /// One of the VRs defined by the standard.
    [[nodiscard]] auto is_known() const -> bool;
    /// Character-string VRs (value decoded into a string list).
    [[nodiscard]] auto is_string() const -> bool;
    /// Text VRs whose value is never split on backslash.
    [[nodiscard]] auto is_unsplit_text() const -> bool;
    /// Text VRs affected by Specific Character Set.
    [[nodiscard]] auto is_charset_text() const -> bool;
    /// Explicit-VR encoding uses the 4-byte length form. Unknown VRs do too.
    [[nodiscard]] auto has_long_length() const -> bool;
};

namespace vr {
inline constexpr Vr AE{'A', 'E'}, AS{'A', 'S'}, AT{'A', 'T'}, CS{'C', 'S'}, DA{'D', 'A'},
    DS{'D', 'S'}, DT{'D', 'T'}, FD{'F', 'D'}, FL{'F', 'L'}, IS{'I', 'S'}, LO{'L', 'O'},
    LT{'L', 'T'}, OB{'O', 'B'}, OD{'O', 'D'}, OF{'O', 'F'}, OL{'O', 'L'}, OV{'O', 'V'},
    OW{'O', 'W'}, PN{'P', 'N'}, SH{'S', 'H'}, SL{'S', 'L'}, SQ{'S', 'Q'}, SS{'S', 'S'},
    ST{'S', 'T'}, SV{'S', 'V'}, TM{'T', 'M'}, UC{'U', 'C'}, UI{'U', 'I'}, UL{'U', 'L'},
    UN{'U', 'N'}, UR{'U', 'R'}, US{'U', 'S'}, UT{'U', 'T'}, UV{'U', 'V'};
}

struct DataElement;

using Strings = std::vector<std::string>;
using Ints = std::vector<std::int64_t>;
using Floats = std::vector<double>;
using Bytes = std::vector<std::uint8_t>;
using Item = std::vector<DataElement>;
using Sequence = std::vector<Item>;

/// Decoded payload. String VRs -> Strings; US/SS/UL/SL/SV/UV/AT -> Ints;
/// FL/FD -> Floats; SQ -> Sequence; everything else -> Bytes.
using Value = std::variant<std::monostate, Strings, Ints, Floats, Bytes, Sequence>;

struct DataElement {
    DicomTag tag;
    Vr vr;
    Value value;

    auto operator==(const DataElement&) const -> bool = default;

    [[nodiscard]] auto strings() const -> const Strings*;
    [[nodiscard]] auto ints() const -> const Ints*;
    [[nodiscard]] auto floats() const -> const Floats*;
    [[nodiscard]] auto bytes() const -> const Bytes*;
    [[nodiscard]] auto items() const -> const Sequence*;

    /// Number of values (items for SQ, bytes count as 1 when non-empty).
    [[nodiscard]] auto multiplicity() const -> std::size_t;
};

/// Finds `tag` in an element list sorted by tag.
[[nodiscard]] auto find_element(const std::vector<DataElement>& list, DicomTag tag) -> const DataElement*;

/// First string value, trimmed of surrounding spaces.
[[nodiscard]] auto get_string(const std::vector<DataElement>& list, DicomTag tag) -> std::optional<std::string>;

/// Numeric value `index` of a DS/IS string element or a binary numeric element.
[[nodiscard]] auto get_number(const std::vector<DataElement>& list, DicomTag tag, std::size_t index = 0)
    -> std::optional<double>;

/// All numeric values of a DS/IS/binary numeric element (unparseable entries skipped).
[[nodiscard]] auto get_numbers(const std::vector<DataElement>& list, DicomTag tag) -> std::vector<double>;

/// Items of a sequence element, or an empty span.
[[nodiscard]] auto get_items(const std::vector<DataElement>& list, DicomTag tag) -> const Sequence&;

/// Inserts or replaces, keeping the list sorted.
void set_element(std::vector<DataElement>& list, DataElement element);

enum class TransferSyntax : std::uint8_t { explicit_vr_little_endian, implicit_vr_little_endian };

inline constexpr std::string_view kExplicitVrLittleEndianUid = "1.2.840.10008.1.2.1";
inline constexpr std::string_view kImplicitVrLittleEndianUid = "1.2.840.10008.1.2";

[[nodiscard]] auto transfer_syntax_uid(TransferSyntax ts) -> std::string_view;

/// Raw pixel data element value, captured but not decoded.
struct PixelPayload {
    Vr vr = vr::OW;
    Bytes bytes;

    auto operator==(const PixelPayload&) const -> bool = default;
};

/// Image pixel module attributes describing a pixel payload.
struct PixelDescriptor {
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    std::uint32_t bits_allocated = 0;
    std::uint32_t samples_per_pixel = 1;
    std::string photometric;
    bool is_signed = false;
    std::uint32_t frames = 1;

    /// ceil(rows * columns * bits_allocated * samples_per_pixel * frames / 8)
    [[nodiscard]] auto expected_bytes() const -> std::uint64_t;
};

struct DicomObject {
    std::vector<DataElement> meta;      ///< group 0002, sorted
    std::vector<DataElement> elements;  ///< everything else except pixel data, sorted, unique
    TransferSyntax transfer_syntax = TransferSyntax::explicit_vr_little_endian;
    std::optional<PixelPayload> pixel_payload;
    /// Transfer syntax UID outside the supported pair; only metadata before pixel data was read.
    bool unsupported_transfer_syntax = false;
    /// Specific Character Set other than default / ISO_IR 100 / ISO_IR 192; strings passed through.
    bool charset_unverified = false;

    auto operator==(const DicomObject&) const -> bool = default;

    [[nodiscard]] auto find(DicomTag tag) const -> const DataElement* { return find_element(elements, tag); }
    [[nodiscard]] auto string(DicomTag tag) const -> std::optional<std::string> {
        return get_string(elements, tag);
    }
    [[nodiscard]] auto number(DicomTag tag, std::size_t index = 0) const -> std::optional<double> {
        return get_number(elements, tag, index);
    }
    [[nodiscard]] auto numbers(DicomTag tag) const -> std::vector<double> { return get_numbers(elements, tag); }
    [[nodiscard]] auto items(DicomTag tag) const -> const Sequence& { return get_items(elements, tag); }

    [[nodiscard]] auto pixel_descriptor() const -> PixelDescriptor;
    [[nodiscard]] auto has_pixel_data() const -> bool { return pixel_payload.has_value(); }
};

}  // namespace curator::dicom
