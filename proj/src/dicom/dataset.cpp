/**
 * @file dataset.cpp
 * @brief DICOM object model helpers
 */

#include "curator/dicom/dataset.hpp"

#include "curator/common/text.hpp"

#include <algorithm>
#include <cstdio>

namespace curator::dicom {

namespace {

constexpr std::array<std::string_view, 34> kKnownVrs = {
    "AE", "AS", "AT", "CS", "DA", "DS", "DT", "FD", "FL", "IS", "LO", "LT", "OB", "OD", "OF", "OL", "OV",
    "OW", "PN", "SH", "SL", "SQ", "SS", "ST", "SV", "TM", "UC", "UI", "UL", "UN", "UR", "US", "UT", "UV"};

auto in(const Vr& v, std::initializer_list<std::string_view> list) -> bool {
    return std::any_of(list.begin(), list.end(), [&](std::string_view s) { return v.is(s); });
}

const Sequence kEmptySequence;

}  // namespace

auto DicomTag::to_string() const -> std::string {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "(%04X,%04X)", group, element);
    return buf;
}

auto DicomTag::parse(std::string_view text) -> std::optional<DicomTag> {
    std::string hex;
    for (const char c : text) {
        if (c == '(' || c == ')' || c == ',' || c == ' ') continue;
        hex.push_back(c);
    }
    if (hex.size() != 8) return std::nullopt;
    std::uint32_t v = 0;
    for (const char c : hex) {
        v <<= 4;
        if (c >= '0' && c <= '9') v |= static_cast<std::uint32_t>(c - '0');
        else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint32_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint32_t>(c - 'A' + 10);
        else return std::nullopt;
    }
    return DicomTag{static_cast<std::uint16_t>(v >> 16), static_cast<std::uint16_t>(v & 0xFFFF)};
}

auto Vr::is_known() const -> bool {
    return std::any_of(kKnownVrs.begin(), kKnownVrs.end(), [&](std::string_view s) { return is(s); });
}

auto Vr::is_string() const -> bool {
    return in(*this, {"AE", "AS", "CS", "DA", "DS", "DT", "IS", "LO", "LT", "PN", "SH", "ST", "TM", "UC", "UI",
                      "UR", "UT"});
}

auto Vr::is_unsplit_text() const -> bool { return in(*this, {"LT", "ST", "UT", "UR"}); }

auto Vr::is_charset_text() const -> bool { return in(*this, {"SH", "LO", "ST", "LT", "PN", "UT", "UC"}); }

auto Vr::has_long_length() const -> bool {
    if (!is_known()) return true;
    return in(*this, {"OB", "OD", "OF", "OL", "OV", "OW", "SQ", "SV", "UC", "UN", "UR", "UT", "UV"});
}

auto DataElement::strings() const -> const Strings* { return std::get_if<Strings>(&value); }
auto DataElement::ints() const -> const Ints* { return std::get_if<Ints>(&value); }
auto DataElement::floats() const -> const Floats* { return std::get_if<Floats>(&value); }
auto DataElement::bytes() const -> const Bytes* { return std::get_if<Bytes>(&value); }
auto DataElement::items() const -> const Sequence* { return std::get_if<Sequence>(&value); }

auto DataElement::multiplicity() const -> std::size_t {
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return 0;
            } else if constexpr (std::is_same_v<T, Bytes>) {
                return v.empty() ? 0 : 1;
            } else {
                return v.size();
            }
        },
        value);
}

auto find_element(const std::vector<DataElement>& list, DicomTag tag) -> const DataElement* {
    const auto it = std::lower_bound(list.begin(), list.end(), tag,
                                     [](const DataElement& e, DicomTag t) { return e.tag < t; });
    if (it != list.end() && it->tag == tag) {
        return &*it;
    }
    return nullptr;
}

auto get_string(const std::vector<DataElement>& list, DicomTag tag) -> std::optional<std::string> {
    const auto* e = find_element(list, tag);
    if (e == nullptr) return std::nullopt;
    const auto* s = e->strings();
    if (s == nullptr || s->empty()) return std::nullopt;
    return std::string(text::trim((*s)[0]));
}

auto get_number(const std::vector<DataElement>& list, DicomTag tag, std::size_t index) -> std::optional<double> {
    const auto* e = find_element(list, tag);
    if (e == nullptr) return std::nullopt;
    if (const auto* s = e->strings()) {
        if (index < s->size()) return text::parse_double((*s)[index]);
        return std::nullopt;
    }
    if (const auto* i = e->ints()) {
        if (index < i->size()) return static_cast<double>((*i)[index]);
        return std::nullopt;
    }
    if (const auto* f = e->floats()) {
        if (index < f->size()) return (*f)[index];
    }
    return std::nullopt;
}

auto get_numbers(const std::vector<DataElement>& list, DicomTag tag) -> std::vector<double> {
    std::vector<double> out;
    const auto* e = find_element(list, tag);
    if (e == nullptr) return out;
    if (const auto* s = e->strings()) {
        for (const auto& v : *s) {
            if (auto d = text::parse_double(v)) out.push_back(*d);
        }
    } else if (const auto* i = e->ints()) {
        for (const auto v : *i) out.push_back(static_cast<double>(v));
    } else if (const auto* f = e->floats()) {
        out = *f;
    }
    return out;
}

auto get_items(const std::vector<DataElement>& list, DicomTag tag) -> const Sequence& {
    const auto* e = find_element(list, tag);
    if (e == nullptr) return kEmptySequence;
    const auto* seq = e->items();
    return seq != nullptr ? *seq : kEmptySequence;
}

void set_element(std::vector<DataElement>& list, DataElement element) {
    const auto it = std::lower_bound(list.begin(), list.end(), element.tag,
                                     [](const DataElement& e, DicomTag t) { return e.tag < t; });
    if (it != list.end() && it->tag == element.tag) {
        *it = std::move(element);
    } else {
        list.insert(it, std::move(element));
    }
}

auto transfer_syntax_uid(TransferSyntax ts) -> std::string_view {
    return ts == TransferSyntax::explicit_vr_little_endian ? kExplicitVrLittleEndianUid
                                                           : kImplicitVrLittleEndianUid;
}

auto PixelDescriptor::expected_bytes() const -> std::uint64_t {
    const std::uint64_t bits = static_cast<std::uint64_t>(rows) * columns * bits_allocated * samples_per_pixel * frames;
    return (bits + 7) / 8;
}

auto DicomObject::pixel_descriptor() const -> PixelDescriptor {
    PixelDescriptor d;
    d.rows = static_cast<std::uint32_t>(number(tags::rows).value_or(0));
    d.columns = static_cast<std::uint32_t>(number(tags::columns).value_or(0));
    d.bits_allocated = static_cast<std::uint32_t>(number(tags::bits_allocated).value_or(0));
    d.samples_per_pixel = static_cast<std::uint32_t>(number(tags::samples_per_pixel).value_or(1));
    d.photometric = string(tags::photometric_interpretation).value_or("");
    d.is_signed = number(tags::pixel_representation).value_or(0) == 1;
    const auto frames = number(tags::number_of_frames).value_or(1);
    d.frames = frames >= 1 ? static_cast<std::uint32_t>(frames) : 1;
    return d;
}

}  // namespace curator::dicom
