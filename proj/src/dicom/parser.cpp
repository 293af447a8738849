/**
 * @file parser.cpp
 * @brief DICOM Part-10 reader and writer
 */

#include "curator/dicom/parser.hpp"

#include "curator/common/text.hpp"
#include "curator/dicom/dictionary.hpp"

#include <algorithm>
#include <cstring>

namespace curator::dicom {

namespace {

constexpr std::uint32_t kUndefinedLength = 0xFFFFFFFF;
constexpr std::size_t kPreambleSize = 128;

enum class Charset { passthrough, latin1, unverified };

struct Reader {
    std::span<const std::uint8_t> data;
    std::size_t pos = 0;
    bool explicit_vr = true;

    [[nodiscard]] auto remaining() const -> std::size_t { return data.size() - pos; }

    void need(std::size_t n, std::size_t element_start) const {
        if (remaining() < n) {
            throw ParseFailure(ErrorCode::truncated_element, "element header exceeds remaining bytes", element_start);
        }
    }

    auto u16() -> std::uint16_t {
        const auto v = static_cast<std::uint16_t>(data[pos] | (data[pos + 1] << 8));
        pos += 2;
        return v;
    }

    auto u32() -> std::uint32_t {
        const auto v = static_cast<std::uint32_t>(data[pos]) | (static_cast<std::uint32_t>(data[pos + 1]) << 8) |
                       (static_cast<std::uint32_t>(data[pos + 2]) << 16) |
                       (static_cast<std::uint32_t>(data[pos + 3]) << 24);
        pos += 4;
        return v;
    }

    [[nodiscard]] auto peek_tag() const -> DicomTag {
        return {static_cast<std::uint16_t>(data[pos] | (data[pos + 1] << 8)),
                static_cast<std::uint16_t>(data[pos + 2] | (data[pos + 3] << 8))};
    }
};

auto is_vr_char(std::uint8_t c) -> bool { return c >= 'A' && c <= 'Z'; }

template <typename T>
auto read_le(const std::uint8_t* p) -> T {
    T v{};
    std::memcpy(&v, p, sizeof(T));
    return v;
}

auto strip_padding(std::string s, bool strip_nul) -> std::string {
    while (!s.empty() && (s.back() == ' ' || (strip_nul && s.back() == '\0'))) s.pop_back();
    return s;
}

auto decode_strings(Vr vr, std::span<const std::uint8_t> raw) -> Strings {
    if (raw.empty()) return {};
    std::string s(reinterpret_cast<const char*>(raw.data()), raw.size());
    Strings out;
    if (vr.is_unsplit_text()) {
        out.push_back(strip_padding(std::move(s), true));
    } else {
        for (auto& part : text::split(s, '\\')) out.push_back(strip_padding(std::move(part), true));
    }
    // a value of pure padding has no values
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

auto decode_value(Vr vr, DicomTag tag, std::span<const std::uint8_t> raw, std::size_t element_start) -> Value {
    const auto check_multiple = [&](std::size_t width) {
        if (raw.size() % width != 0) {
            throw ParseFailure(ErrorCode::malformed_element,
                               "value length of " + tag.to_string() + " not a multiple of " + std::to_string(width),
                               element_start);
        }
    };
    if (vr.is_string()) return decode_strings(vr, raw);
    if (vr == vr::US || vr == vr::SS) {
        check_multiple(2);
        Ints out;
        for (std::size_t i = 0; i < raw.size(); i += 2) {
            out.push_back(vr == vr::US ? read_le<std::uint16_t>(&raw[i]) : read_le<std::int16_t>(&raw[i]));
        }
        return out;
    }
    if (vr == vr::UL || vr == vr::SL) {
        check_multiple(4);
        Ints out;
        for (std::size_t i = 0; i < raw.size(); i += 4) {
            out.push_back(vr == vr::UL ? read_le<std::uint32_t>(&raw[i]) : read_le<std::int32_t>(&raw[i]));
        }
        return out;
    }
    if (vr == vr::SV || vr == vr::UV) {
        check_multiple(8);
        Ints out;
        for (std::size_t i = 0; i < raw.size(); i += 8) out.push_back(read_le<std::int64_t>(&raw[i]));
        return out;
    }
    if (vr == vr::AT) {
        check_multiple(4);
        Ints out;
        for (std::size_t i = 0; i < raw.size(); i += 4) {
            const auto g = read_le<std::uint16_t>(&raw[i]);
            const auto e = read_le<std::uint16_t>(&raw[i + 2]);
            out.push_back((static_cast<std::int64_t>(g) << 16) | e);
        }
        return out;
    }
    if (vr == vr::FL) {
        check_multiple(4);
        Floats out;
        for (std::size_t i = 0; i < raw.size(); i += 4) out.push_back(read_le<float>(&raw[i]));
        return out;
    }
    if (vr == vr::FD) {
        check_multiple(8);
        Floats out;
        for (std::size_t i = 0; i < raw.size(); i += 8) out.push_back(read_le<double>(&raw[i]));
        return out;
    }
    return Bytes(raw.begin(), raw.end());
}

void sort_unique(std::vector<DataElement>& list) {
    std::stable_sort(list.begin(), list.end(), [](const DataElement& a, const DataElement& b) { return a.tag < b.tag; });
    list.erase(std::unique(list.begin(), list.end(),
                           [](const DataElement& a, const DataElement& b) { return a.tag == b.tag; }),
               list.end());
}

class DatasetParser {
public:
    DatasetParser(std::span<const std::uint8_t> data, std::size_t start, bool explicit_vr) {
        reader_.data = data;
        reader_.pos = start;
        reader_.explicit_vr = explicit_vr;
    }

    /// Top-level parse. Stops at pixel data when `stop_at_pixels`.
    void parse_top_level(DicomObject& obj, bool stop_at_pixels) {
        while (reader_.remaining() > 0) {
            const auto start = reader_.pos;
            reader_.need(4, start);
            const auto tag = reader_.peek_tag();
            if (tag == tags::pixel_data && stop_at_pixels) {
                obj.unsupported_transfer_syntax = true;
                break;
            }
            auto element = read_element(reader_.explicit_vr, /*depth=*/0);
            if (element.tag == tags::dataset_trailing_padding) continue;
            if (element.tag == tags::pixel_data) {
                if (pixel_undefined_length_) {
                    // encapsulated pixel data in a native syntax; keep metadata only
                    obj.unsupported_transfer_syntax = true;
                    break;
                }
                auto* raw = std::get_if<Bytes>(&element.value);
                PixelPayload payload;
                payload.vr = element.vr;
                if (raw != nullptr) payload.bytes = std::move(*raw);
                obj.pixel_payload = std::move(payload);
                continue;
            }
            obj.elements.push_back(std::move(element));
        }
        sort_unique(obj.elements);
    }

    void parse_meta(DicomObject& obj) {
        while (reader_.remaining() >= 4 && reader_.peek_tag().group == 0x0002) {
            obj.meta.push_back(read_element(true, 0));
        }
        sort_unique(obj.meta);
    }

    [[nodiscard]] auto position() const -> std::size_t { return reader_.pos; }

private:
    auto read_header(bool explicit_vr, std::size_t start) -> std::tuple<DicomTag, Vr, std::uint32_t> {
        reader_.need(8, start);
        const DicomTag tag{reader_.u16(), reader_.u16()};
        if (tag.group == 0xFFFE) {
            return {tag, vr::UN, reader_.u32()};
        }
        if (!explicit_vr) {
            auto vr = lookup_tag(tag).vr;
            return {tag, vr, reader_.u32()};
        }
        const auto a = reader_.data[reader_.pos];
        const auto b = reader_.data[reader_.pos + 1];
        if (!is_vr_char(a) || !is_vr_char(b)) {
            throw ParseFailure(ErrorCode::malformed_element, "invalid VR bytes for " + tag.to_string(), start);
        }
        const Vr vr{static_cast<char>(a), static_cast<char>(b)};
        reader_.pos += 2;
        if (vr.has_long_length()) {
            reader_.need(6, start);
            reader_.pos += 2;
            return {tag, vr, reader_.u32()};
        }
        return {tag, vr, reader_.u16()};
    }

    auto read_element(bool explicit_vr, int depth) -> DataElement {
        const auto start = reader_.pos;
        auto [tag, vr, length] = read_header(explicit_vr, start);
        if (tag.group == 0xFFFE) {
            throw ParseFailure(ErrorCode::malformed_element, "unexpected item tag " + tag.to_string(), start);
        }
        if (length == kUndefinedLength) {
            if (tag == tags::pixel_data && depth == 0) {
                pixel_undefined_length_ = true;
                return DataElement{tag, vr, Bytes{}};
            }
            if (vr == vr::SQ || vr == vr::UN || !explicit_vr) {
                // UN with undefined length holds an implicit-VR sequence
                const bool nested_explicit = explicit_vr && vr == vr::SQ;
                return DataElement{tag, vr::SQ, read_sequence(nested_explicit, std::nullopt, depth + 1)};
            }
            throw ParseFailure(ErrorCode::malformed_element, "undefined length on non-sequence " + tag.to_string(),
                               start);
        }
        if (length > reader_.remaining()) {
            throw ParseFailure(ErrorCode::truncated_element,
                               "declared length " + std::to_string(length) + " of " + tag.to_string() +
                                   " exceeds remaining " + std::to_string(reader_.remaining()) + " bytes",
                               start);
        }
        if (vr == vr::SQ) {
            return DataElement{tag, vr, read_sequence(explicit_vr, reader_.pos + length, depth + 1)};
        }
        const auto raw = reader_.data.subspan(reader_.pos, length);
        reader_.pos += length;
        return DataElement{tag, vr, decode_value(vr, tag, raw, start)};
    }

    auto read_item_elements(bool explicit_vr, std::optional<std::size_t> end, int depth) -> Item {
        Item item;
        while (true) {
            if (end && reader_.pos >= *end) break;
            const auto start = reader_.pos;
            reader_.need(8, start);
            const auto tag = reader_.peek_tag();
            if (!end && tag == tags::item_delimitation) {
                reader_.pos += 8;
                break;
            }
            item.push_back(read_element(explicit_vr, depth));
        }
        if (end && reader_.pos != *end) {
            throw ParseFailure(ErrorCode::malformed_element, "item overruns its declared length", reader_.pos);
        }
        sort_unique(item);
        return item;
    }

    auto read_sequence(bool explicit_vr, std::optional<std::size_t> end, int depth) -> Sequence {
        if (depth > 64) {
            throw ParseFailure(ErrorCode::malformed_element, "sequence nesting too deep", reader_.pos);
        }
        Sequence seq;
        while (true) {
            if (end && reader_.pos >= *end) break;
            const auto start = reader_.pos;
            reader_.need(8, start);
            const DicomTag tag{reader_.u16(), reader_.u16()};
            const auto length = reader_.u32();
            if (tag == tags::sequence_delimitation) {
                if (end) {
                    throw ParseFailure(ErrorCode::malformed_element, "delimiter in defined-length sequence", start);
                }
                break;
            }
            if (tag != tags::item) {
                throw ParseFailure(ErrorCode::malformed_element, "expected item tag, found " + tag.to_string(), start);
            }
            if (length == kUndefinedLength) {
                seq.push_back(read_item_elements(explicit_vr, std::nullopt, depth));
            } else {
                if (length > reader_.remaining()) {
                    throw ParseFailure(ErrorCode::truncated_element, "item length exceeds remaining bytes", start);
                }
                seq.push_back(read_item_elements(explicit_vr, reader_.pos + length, depth));
            }
        }
        if (end && reader_.pos != *end) {
            throw ParseFailure(ErrorCode::malformed_element, "sequence overruns its declared length", reader_.pos);
        }
        return seq;
    }

    Reader reader_;
    bool pixel_undefined_length_ = false;
};

/// Guess explicit vs implicit from the first element header at `pos`.
auto looks_explicit(std::span<const std::uint8_t> data, std::size_t pos) -> bool {
    if (data.size() < pos + 6) return true;
    const Vr vr{static_cast<char>(data[pos + 4]), static_cast<char>(data[pos + 5])};
    return vr.is_known();
}

void transcode_items(std::vector<DataElement>& list, Charset charset, bool to_utf8) {
    for (auto& e : list) {
        if (auto* seq = std::get_if<Sequence>(&e.value)) {
            for (auto& item : *seq) transcode_items(item, charset, to_utf8);
        } else if (auto* s = std::get_if<Strings>(&e.value); s != nullptr && e.vr.is_charset_text()) {
            for (auto& v : *s) v = to_utf8 ? text::latin1_to_utf8(v) : text::utf8_to_latin1(v);
        }
    }
}

auto classify_charset(const std::vector<DataElement>& elements) -> Charset {
    const auto* e = find_element(elements, tags::specific_character_set);
    if (e == nullptr || e->strings() == nullptr || e->strings()->empty()) return Charset::passthrough;
    const auto& values = *e->strings();
    const auto first = std::string(text::trim(values[0]));
    if (values.size() == 1) {
        if (first.empty() || first == "ISO_IR 6" || first == "ISO_IR 192") return Charset::passthrough;
        if (first == "ISO_IR 100") return Charset::latin1;
    }
    return Charset::unverified;
}

// --- writer ------------------------------------------------------------------

struct Writer {
    std::vector<std::uint8_t> out;

    void u16(std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
    }
    template <typename T>
    void raw(T v) {
        std::uint8_t buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out.insert(out.end(), buf, buf + sizeof(T));
    }
};

auto encode_value(const DataElement& e) -> std::vector<std::uint8_t> {
    Writer w;
    const auto& vr = e.vr;
    if (vr.is_string() && (e.ints() != nullptr || e.floats() != nullptr)) {
        // numbers held for an IS/DS element are written as decimal strings
        Strings s;
        if (const auto* ints = e.ints()) {
            for (const auto v : *ints) s.push_back(std::to_string(v));
        } else {
            for (const auto v : *e.floats()) s.push_back(text::format_number(v));
        }
        return encode_value(DataElement{e.tag, vr, std::move(s)});
    }
    if (const auto* s = e.strings()) {
        const auto joined = text::join(*s, "\\");
        w.out.assign(joined.begin(), joined.end());
        if (w.out.size() % 2 != 0) w.out.push_back(vr == vr::UI ? '\0' : ' ');
    } else if (const auto* ints = e.ints()) {
        for (const auto v : *ints) {
            if (vr == vr::US || vr == vr::SS) {
                w.u16(static_cast<std::uint16_t>(v));
            } else if (vr == vr::UL || vr == vr::SL) {
                w.u32(static_cast<std::uint32_t>(v));
            } else if (vr == vr::AT) {
                w.u16(static_cast<std::uint16_t>(v >> 16));
                w.u16(static_cast<std::uint16_t>(v & 0xFFFF));
            } else {
                w.raw<std::int64_t>(v);
            }
        }
    } else if (const auto* f = e.floats()) {
        for (const auto v : *f) {
            if (vr == vr::FL) {
                w.raw<float>(static_cast<float>(v));
            } else {
                w.raw<double>(v);
            }
        }
    } else if (const auto* b = e.bytes()) {
        w.out = *b;
        if (w.out.size() % 2 != 0) w.out.push_back(0);
    }
    return w.out;
}

void write_elements(Writer& w, const std::vector<DataElement>& list, bool explicit_vr);

void write_header(Writer& w, DicomTag tag, Vr vr, std::uint32_t length, bool explicit_vr) {
    w.u16(tag.group);
    w.u16(tag.element);
    if (!explicit_vr) {
        w.u32(length);
        return;
    }
    w.out.push_back(static_cast<std::uint8_t>(vr.code[0]));
    w.out.push_back(static_cast<std::uint8_t>(vr.code[1]));
    if (vr.has_long_length()) {
        w.u16(0);
        w.u32(length);
    } else {
        if (length > 0xFFFF) {
            throw Error(ErrorCode::malformed_element,
                        "value of " + tag.to_string() + " too long for VR " + vr.str());
        }
        w.u16(static_cast<std::uint16_t>(length));
    }
}

void write_element(Writer& w, const DataElement& e, bool explicit_vr) {
    if (const auto* seq = e.items()) {
        write_header(w, e.tag, vr::SQ, kUndefinedLength, explicit_vr);
        for (const auto& item : *seq) {
            w.u16(tags::item.group);
            w.u16(tags::item.element);
            w.u32(kUndefinedLength);
            write_elements(w, item, explicit_vr);
            w.u16(tags::item_delimitation.group);
            w.u16(tags::item_delimitation.element);
            w.u32(0);
        }
        w.u16(tags::sequence_delimitation.group);
        w.u16(tags::sequence_delimitation.element);
        w.u32(0);
        return;
    }
    const auto value = encode_value(e);
    write_header(w, e.tag, e.vr, static_cast<std::uint32_t>(value.size()), explicit_vr);
    w.out.insert(w.out.end(), value.begin(), value.end());
}

void write_elements(Writer& w, const std::vector<DataElement>& list, bool explicit_vr) {
    for (const auto& e : list) write_element(w, e, explicit_vr);
}

}  // namespace

auto parse_file(std::span<const std::uint8_t> bytes) -> DicomObject {
    if (bytes.empty()) {
        throw ParseFailure(ErrorCode::malformed_preamble, "empty input", 0);
    }
    DicomObject obj;
    std::size_t pos = 0;
    const bool has_magic = bytes.size() >= kPreambleSize + 4 &&
                           std::memcmp(bytes.data() + kPreambleSize, "DICM", 4) == 0;
    if (has_magic) {
        pos = kPreambleSize + 4;
    } else {
        if (bytes.size() < 8) {
            throw ParseFailure(ErrorCode::malformed_preamble, "no DICM magic and too short for an element", 0);
        }
        const auto group = static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8));
        if (group != 0x0002 && group != 0x0008) {
            throw ParseFailure(ErrorCode::malformed_preamble,
                               "no DICM magic and first element is not in group 0002 or 0008", 0);
        }
    }

    {
        DatasetParser meta(bytes, pos, true);
        meta.parse_meta(obj);
        pos = meta.position();
    }

    bool explicit_vr = true;
    bool stop_at_pixels = false;
    bool skip_dataset = false;
    if (auto uid = get_string(obj.meta, tags::transfer_syntax_uid)) {
        if (*uid == kExplicitVrLittleEndianUid) {
            obj.transfer_syntax = TransferSyntax::explicit_vr_little_endian;
        } else if (*uid == kImplicitVrLittleEndianUid) {
            obj.transfer_syntax = TransferSyntax::implicit_vr_little_endian;
            explicit_vr = false;
        } else {
            obj.unsupported_transfer_syntax = true;
            // big endian and deflated bodies cannot be walked as little endian
            skip_dataset = *uid == "1.2.840.10008.1.2.2" || *uid == "1.2.840.10008.1.2.1.99";
            stop_at_pixels = true;
        }
    } else {
        explicit_vr = looks_explicit(bytes, pos);
        obj.transfer_syntax =
            explicit_vr ? TransferSyntax::explicit_vr_little_endian : TransferSyntax::implicit_vr_little_endian;
    }

    if (!skip_dataset) {
        DatasetParser body(bytes, pos, explicit_vr);
        if (obj.unsupported_transfer_syntax) {
            try {
                body.parse_top_level(obj, true);
            } catch (const ParseFailure&) {
                // metadata-only parse: keep what was read so far
                sort_unique(obj.elements);
            }
        } else {
            body.parse_top_level(obj, stop_at_pixels);
        }
    }

    switch (classify_charset(obj.elements)) {
        case Charset::latin1:
            transcode_items(obj.elements, Charset::latin1, true);
            break;
        case Charset::unverified:
            obj.charset_unverified = true;
            break;
        case Charset::passthrough:
            break;
    }

    if (obj.pixel_payload) {
        const auto expected = obj.pixel_descriptor().expected_bytes();
        auto& raw = obj.pixel_payload->bytes;
        if (expected > 0 && raw.size() == expected + 1) raw.pop_back();
    }
    return obj;
}

auto write_file(const DicomObject& obj, std::optional<TransferSyntax> syntax) -> std::vector<std::uint8_t> {
    const auto ts = syntax.value_or(obj.transfer_syntax);
    Writer w;
    w.out.assign(kPreambleSize, 0);
    w.out.insert(w.out.end(), {'D', 'I', 'C', 'M'});

    auto meta = obj.meta;
    if (find_element(meta, tags::transfer_syntax_uid) != nullptr) {
        set_element(meta, DataElement{tags::transfer_syntax_uid, vr::UI, Strings{std::string(transfer_syntax_uid(ts))}});
    }
    if (find_element(meta, tags::file_meta_group_length) != nullptr) {
        std::vector<DataElement> rest(meta.begin() + 1, meta.end());
        Writer body;
        write_elements(body, rest, true);
        set_element(meta, DataElement{tags::file_meta_group_length, vr::UL,
                                      Ints{static_cast<std::int64_t>(body.out.size())}});
    }
    write_elements(w, meta, true);

    auto elements = obj.elements;
    if (classify_charset(elements) == Charset::latin1) {
        transcode_items(elements, Charset::latin1, false);
    }
    if (obj.pixel_payload) {
        set_element(elements, DataElement{tags::pixel_data, obj.pixel_payload->vr, obj.pixel_payload->bytes});
    }
    write_elements(w, elements, ts == TransferSyntax::explicit_vr_little_endian);
    return w.out;
}

}  // namespace curator::dicom
