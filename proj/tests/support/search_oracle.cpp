/**
 * @file search_oracle.cpp
 */

#include "search_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>

namespace curator::fixture {

using index::Field;
using index::FieldType;
using index::NodeKind;
using index::QueryAst;
using index::SeriesDocument;

namespace {

const std::vector<std::string> kModalities = {"CT", "CT", "CT", "MR", "CR", "PT", "SEG", "RTSTRUCT"};
const std::vector<std::string> kManufacturers = {"SIEMENS", "GE MEDICAL SYSTEMS", "Philips", "TOSHIBA", "Agfa"};
const std::vector<std::string> kKernels = {"B30f", "B70f", "FC03", "STANDARD", "LUNG"};
const std::vector<std::string> kImageTypes = {"ORIGINAL", "DERIVED", "PRIMARY", "SECONDARY", "AXIAL", "LOCALIZER"};
const std::vector<std::string> kWords = {"chest", "abdomen", "liver", "lung", "CT", "contrast", "with",
                                         "without", "pelvis", "head", "protocol", "follow-up", "low", "dose"};
const std::vector<std::string> kFamilies = {"Muller", "Mueller", "Miller", "Smith", "Doe", "Ng"};
const std::vector<std::string> kGiven = {"John", "Jane", "Anna", "Li"};
const std::vector<double> kThickness = {0.5, 1, 1.25, 2.5, 3, 5};
const std::vector<std::string> kTags = {"reviewed", "qc:pass", "qc:fail", "teaching"};
const std::vector<std::string> kStructures = {"liver", "lung_left", "lung_right", "spleen", "kidney_left"};
const std::vector<std::string> kBodyParts = {"CHEST", "ABDOMEN", "HEAD", "PELVIS"};

template <typename T>
auto pick(std::mt19937_64& rng, const std::vector<T>& v) -> const T& {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

auto chance(std::mt19937_64& rng, double p) -> bool { return std::bernoulli_distribution(p)(rng); }

auto subset(std::mt19937_64& rng, const std::vector<std::string>& pool, double p) -> std::vector<std::string> {
    std::vector<std::string> out;
    for (const auto& v : pool) {
        if (chance(rng, p)) out.push_back(v);
    }
    return out;
}

auto lower(std::string s) -> std::string {
    for (auto& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return s;
}

auto same_ci(const std::string& a, const std::string& b) -> bool { return lower(a) == lower(b); }

auto fmt_num(double v) -> std::string {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

auto to_num(const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

/// Splits on anything that is not an ASCII letter or digit.
auto words_of(const std::string& s) -> std::vector<std::string> {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        const auto u = static_cast<unsigned char>(c);
        const bool keep = (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
        if (keep) {
            cur.push_back(c);
        } else if (!cur.empty()) {
            out.push_back(lower(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(lower(cur));
    return out;
}

auto iso_date(std::string s) -> std::optional<std::string> {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(0, 1);
    std::string digits;
    if (s.size() == 8) {
        digits = s;
    } else if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
        digits = s.substr(0, 4) + s.substr(5, 2) + s.substr(8, 2);
    } else {
        return std::nullopt;
    }
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{std::stoi(digits.substr(0, 4))},
                                          std::chrono::month{static_cast<unsigned>(std::stoi(digits.substr(4, 2)))},
                                          std::chrono::day{static_cast<unsigned>(std::stoi(digits.substr(6, 2)))}};
    if (!ymd.ok()) return std::nullopt;
    return digits.substr(0, 4) + "-" + digits.substr(4, 2) + "-" + digits.substr(6, 2);
}

auto is_texty(FieldType t) -> bool { return t == FieldType::text || t == FieldType::name; }
auto is_keywordy(FieldType t) -> bool { return t == FieldType::keyword || t == FieldType::name; }

/// Every field of `doc`, curation fields included.
auto all_fields(const SeriesDocument& doc) -> std::vector<std::pair<std::string, Field>> {
    std::vector<std::pair<std::string, Field>> out(doc.fields.begin(), doc.fields.end());
    out.emplace_back("tags", Field{FieldType::keyword, doc.tags, {}});
    out.emplace_back("anatomical_structures", Field{FieldType::keyword, doc.anatomical_structures, {}});
    out.emplace_back("body_part", Field{FieldType::keyword, doc.body_part ? std::vector{*doc.body_part}
                                                                          : std::vector<std::string>{},
                                        {}});
    out.emplace_back("instance_count", Field{FieldType::number, {}, {static_cast<double>(doc.instance_count)}});
    return out;
}

auto find_field(const SeriesDocument& doc, const std::string& name) -> std::optional<Field> {
    for (auto& [n, f] : all_fields(doc)) {
        if (same_ci(n, name) && !f.empty()) return f;
    }
    return std::nullopt;
}

auto has_wild(const std::string& s) -> bool { return s.find_first_of("*?") != std::string::npos; }

auto contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) -> bool {
    if (needle.empty()) return false;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool all = true;
        for (std::size_t k = 0; k < needle.size() && all; ++k) all = hay[i + k] == needle[k];
        if (all) return true;
    }
    return false;
}

auto match_term(const SeriesDocument& doc, const std::string& t) -> bool {
    auto hit = [&](const std::string& candidate) {
        return has_wild(t) ? naive_wildcard(t, candidate) : lower(candidate) == lower(t);
    };
    for (const auto& [name, f] : all_fields(doc)) {
        for (const auto& v : f.values) {
            if (is_keywordy(f.type) && hit(lower(v))) return true;
            if (is_texty(f.type)) {
                for (const auto& w : words_of(v)) {
                    if (hit(w)) return true;
                }
            }
        }
    }
    return false;
}

auto match_phrase(const SeriesDocument& doc, const std::string& text) -> bool {
    const auto needle = words_of(text);
    for (const auto& [name, f] : all_fields(doc)) {
        for (const auto& v : f.values) {
            if (is_keywordy(f.type) && same_ci(v, text)) return true;
            if (is_texty(f.type) && contains_run(words_of(v), needle)) return true;
        }
    }
    return false;
}

auto match_field(const SeriesDocument& doc, const index::QueryNode& q) -> bool {
    const auto f = find_field(doc, q.field);
    if (!f) return false;
    const bool wild = !q.quoted && has_wild(q.text);
    if (f->type == FieldType::number) {
        const auto n = (wild || q.quoted) ? std::nullopt : to_num(q.text);
        for (double v : f->numbers) {
            if (n ? v == *n : (wild ? naive_wildcard(q.text, fmt_num(v)) : same_ci(q.text, fmt_num(v)))) return true;
        }
        return false;
    }
    for (const auto& v : f->values) {
        if (f->type == FieldType::date && !wild) {
            const auto iso = iso_date(q.text);
            if (lower(v) == (iso ? *iso : lower(q.text))) return true;
            continue;
        }
        if (wild) {
            if (naive_wildcard(q.text, v)) return true;
            if (is_texty(f->type)) {
                for (const auto& w : words_of(v)) {
                    if (naive_wildcard(q.text, w)) return true;
                }
            }
            continue;
        }
        if (same_ci(v, q.text)) return true;
        if (is_texty(f->type)) {
            const auto words = words_of(v);
            if (q.quoted ? contains_run(words, words_of(q.text))
                         : std::find(words.begin(), words.end(), lower(q.text)) != words.end()) {
                return true;
            }
        }
    }
    return false;
}

template <typename T>
auto in_range(const T& v, const std::optional<T>& lo, const std::optional<T>& hi, bool lo_inc, bool hi_inc) -> bool {
    if (lo && (lo_inc ? v < *lo : v <= *lo)) return false;
    if (hi && (hi_inc ? v > *hi : v >= *hi)) return false;
    return true;
}

auto match_range(const SeriesDocument& doc, const index::QueryNode& q) -> bool {
    const auto f = find_field(doc, q.field);
    if (!f) return false;
    if (f->type == FieldType::number) {
        std::optional<double> lo;
        std::optional<double> hi;
        if (q.lo && !(lo = to_num(*q.lo))) return false;
        if (q.hi && !(hi = to_num(*q.hi))) return false;
        return std::any_of(f->numbers.begin(), f->numbers.end(),
                           [&](double v) { return in_range(v, lo, hi, q.lo_inclusive, q.hi_inclusive); });
    }
    std::optional<std::string> lo;
    std::optional<std::string> hi;
    if (f->type == FieldType::date) {
        if (q.lo && !(lo = iso_date(*q.lo))) return false;
        if (q.hi && !(hi = iso_date(*q.hi))) return false;
    } else {
        if (q.lo) lo = lower(*q.lo);
        if (q.hi) hi = lower(*q.hi);
    }
    return std::any_of(f->values.begin(), f->values.end(),
                       [&](const std::string& v) { return in_range(lower(v), lo, hi, q.lo_inclusive, q.hi_inclusive); });
}

// --- query generation ------------------------------------------------------

auto wildcardify(std::mt19937_64& rng, const std::string& s) -> std::string {
    if (s.size() < 2) return s;
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
        case 0: return s.substr(0, 1 + rng() % (s.size() - 1)) + "*";
        case 1: {
            auto out = s;
            out[rng() % out.size()] = '?';
            return out;
        }
        case 2: return "*" + s.substr(1 + rng() % (s.size() - 1));
        case 3: return s.substr(0, 1) + "*" + s.substr(s.size() - 1);
        default: return s;
    }
}

auto random_case(std::mt19937_64& rng, std::string s) -> std::string {
    if (chance(rng, 0.5)) return s;
    for (auto& c : s) {
        if (chance(rng, 0.5)) c = static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : (c >= 'A' && c <= 'Z' ? c + 32 : c));
    }
    return s;
}

auto random_date(std::mt19937_64& rng) -> std::string {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d%02d%02d", 2015 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 12),
                  1 + static_cast<int>(rng() % 28));
    return buf;
}

auto dashed(const std::string& d) -> std::string { return d.substr(0, 4) + "-" + d.substr(4, 2) + "-" + d.substr(6, 2); }

auto random_leaf(std::mt19937_64& rng) -> QueryAst {
    switch (std::uniform_int_distribution<int>(0, 13)(rng)) {
        case 0: return index::make_term(random_case(rng, pick(rng, kWords)));
        case 1: return index::make_term(wildcardify(rng, lower(pick(rng, kWords))));
        case 2: return index::make_term(random_case(rng, pick(rng, kKernels)));
        case 3: {
            const auto i = rng() % (kWords.size() - 1);
            return index::make_phrase(kWords[i] + " " + kWords[i + 1]);
        }
        case 4: return index::make_phrase(pick(rng, kManufacturers));
        case 5: return index::make_field_match("Modality", wildcardify(rng, random_case(rng, pick(rng, kModalities))));
        case 6: {
            static const std::vector<std::string> keyword_fields = {"ConvolutionKernel", "ImageType", "tags",
                                                                    "anatomical_structures", "body_part"};
            const auto& field = pick(rng, keyword_fields);
            const auto& pool = field == "ConvolutionKernel" ? kKernels
                               : field == "ImageType"       ? kImageTypes
                               : field == "tags"            ? kTags
                               : field == "body_part"       ? kBodyParts
                                                            : kStructures;
            return index::make_field_match(chance(rng, 0.2) ? lower(field) : field, wildcardify(rng, pick(rng, pool)));
        }
        case 7: {
            const auto family = pick(rng, kFamilies);
            if (chance(rng, 0.3)) return index::make_field_match("PatientName", family + "^" + pick(rng, kGiven), true);
            return index::make_field_match("PatientName", wildcardify(rng, family));
        }
        case 8: {
            const auto w = pick(rng, kWords);
            if (chance(rng, 0.4)) {
                const auto i = rng() % (kWords.size() - 1);
                return index::make_field_match("StudyDescription", kWords[i] + " " + kWords[i + 1], true);
            }
            return index::make_field_match("StudyDescription", wildcardify(rng, w));
        }
        case 9: {
            if (chance(rng, 0.3)) return index::make_field_match("SliceThickness", wildcardify(rng, fmt_num(pick(rng, kThickness))));
            return index::make_field_match("SliceThickness", fmt_num(pick(rng, kThickness)));
        }
        case 10: {
            auto a = fmt_num(pick(rng, kThickness));
            auto b = fmt_num(pick(rng, kThickness));
            if (to_num(a) > to_num(b)) std::swap(a, b);
            std::optional<std::string> lo = chance(rng, 0.15) ? std::nullopt : std::optional(a);
            std::optional<std::string> hi = chance(rng, 0.15) ? std::nullopt : std::optional(b);
            return index::make_range(chance(rng, 0.5) ? "SliceThickness" : "instance_count", lo, hi, chance(rng, 0.6),
                                     chance(rng, 0.6));
        }
        case 11: {
            auto a = random_date(rng);
            auto b = random_date(rng);
            if (a > b) std::swap(a, b);
            if (chance(rng, 0.5)) b = dashed(b);
            if (chance(rng, 0.3)) return index::make_field_match("StudyDate", chance(rng, 0.5) ? a : dashed(a));
            if (chance(rng, 0.1)) return index::make_field_match("StudyDate", dashed(a).substr(0, 8) + "*");
            return index::make_range("StudyDate", chance(rng, 0.1) ? std::nullopt : std::optional(a), b,
                                     chance(rng, 0.7), chance(rng, 0.7));
        }
        case 12: {
            auto a = lower(pick(rng, kManufacturers)).substr(0, 1 + rng() % 3);
            auto b = lower(pick(rng, kManufacturers)).substr(0, 1 + rng() % 3);
            if (a > b) std::swap(a, b);
            return index::make_range("Manufacturer", a, b, chance(rng, 0.5), chance(rng, 0.5));
        }
        default: {
            if (chance(rng, 0.5)) return index::make_field_match("NoSuchField", "x*");
            return index::make_field_match("Manufacturer", wildcardify(rng, pick(rng, kManufacturers)), chance(rng, 0.3));
        }
    }
}

}  // namespace

auto naive_wildcard(const std::string& pattern, const std::string& value) -> bool {
    if (pattern.empty()) return value.empty();
    if (pattern[0] == '*') {
        for (std::size_t skip = 0; skip <= value.size(); ++skip) {
            if (naive_wildcard(pattern.substr(1), value.substr(skip))) return true;
        }
        return false;
    }
    if (value.empty()) return false;
    if (pattern[0] != '?' && lower(pattern.substr(0, 1)) != lower(value.substr(0, 1))) return false;
    return naive_wildcard(pattern.substr(1), value.substr(1));
}

auto random_corpus(std::mt19937_64& rng, std::size_t n) -> std::vector<SeriesDocument> {
    std::vector<SeriesDocument> docs;
    docs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SeriesDocument d;
        d.series_uid = "1.2.826.0.1.3680043.10.1." + std::to_string(rng() % 1000000) + "." + std::to_string(i);
        d.study_uid = "1.2.3." + std::to_string(i / 3);
        d.patient_id = "P" + std::to_string(i % 97);
        d.modality = pick(rng, kModalities);
        d.instance_count = 1 + rng() % 300;
        d.ingest_time = 1700000000000 + static_cast<std::int64_t>(rng() % 40) * 1000;
        d.fields["Modality"] = {FieldType::keyword, {d.modality}, {}};
        d.fields["PatientID"] = {FieldType::keyword, {d.patient_id}, {}};
        d.fields["Manufacturer"] = {FieldType::keyword, {pick(rng, kManufacturers)}, {}};
        if (chance(rng, 0.85)) d.fields["ConvolutionKernel"] = {FieldType::keyword, {pick(rng, kKernels)}, {}};
        if (auto it = subset(rng, kImageTypes, 0.35); !it.empty()) d.fields["ImageType"] = {FieldType::keyword, it, {}};
        std::string desc;
        for (int w = 0, words = 1 + static_cast<int>(rng() % 5); w < words; ++w) {
            desc += (w ? " " : "") + random_case(rng, pick(rng, kWords));
        }
        if (chance(rng, 0.9)) d.fields["StudyDescription"] = {FieldType::text, {desc}, {}};
        d.fields["PatientName"] = {FieldType::name, {pick(rng, kFamilies) + "^" + pick(rng, kGiven)}, {}};
        if (chance(rng, 0.9)) d.fields["StudyDate"] = {FieldType::date, {dashed(random_date(rng))}, {}};
        if (chance(rng, 0.8)) d.fields["SliceThickness"] = {FieldType::number, {}, {pick(rng, kThickness)}};
        d.fields["Rows"] = {FieldType::number, {}, {chance(rng, 0.7) ? 512.0 : 256.0}};
        d.tags = subset(rng, kTags, 0.25);
        d.anatomical_structures = subset(rng, kStructures, 0.2);
        if (chance(rng, 0.6)) d.body_part = pick(rng, kBodyParts);
        docs.push_back(std::move(d));
    }
    return docs;
}

auto random_query(std::mt19937_64& rng, int depth) -> QueryAst {
    if (depth <= 0 || chance(rng, 0.35)) return random_leaf(rng);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: {
            std::vector<QueryAst> kids;
            for (int i = 0, k = 2 + static_cast<int>(rng() % 2); i < k; ++i) kids.push_back(random_query(rng, depth - 1));
            return index::make_and(std::move(kids));
        }
        case 1: {
            std::vector<QueryAst> kids;
            for (int i = 0, k = 2 + static_cast<int>(rng() % 2); i < k; ++i) kids.push_back(random_query(rng, depth - 1));
            return index::make_or(std::move(kids));
        }
        default: return index::make_not(random_query(rng, depth - 1));
    }
}

auto oracle_matches(const SeriesDocument& doc, const QueryAst& ast) -> bool {
    switch (ast->kind) {
        case NodeKind::match_all: return true;
        case NodeKind::and_:
            return std::all_of(ast->children.begin(), ast->children.end(),
                               [&](const QueryAst& c) { return oracle_matches(doc, c); });
        case NodeKind::or_:
            return std::any_of(ast->children.begin(), ast->children.end(),
                               [&](const QueryAst& c) { return oracle_matches(doc, c); });
        case NodeKind::not_: return !oracle_matches(doc, ast->children.front());
        case NodeKind::term: return match_term(doc, ast->text);
        case NodeKind::phrase: return match_phrase(doc, ast->text);
        case NodeKind::field_match: return match_field(doc, *ast);
        case NodeKind::range: return match_range(doc, *ast);
    }
    return false;
}

auto oracle_search(const std::vector<SeriesDocument>& docs, const QueryAst& ast, const std::optional<std::string>& sort)
    -> std::vector<std::string> {
    std::vector<const SeriesDocument*> hits;
    for (const auto& d : docs) {
        if (oracle_matches(d, ast)) hits.push_back(&d);
    }
    if (!sort) {
        std::sort(hits.begin(), hits.end(), [](auto* a, auto* b) {
            return a->ingest_time != b->ingest_time ? a->ingest_time > b->ingest_time : a->series_uid < b->series_uid;
        });
    } else {
        const bool desc = !sort->empty() && sort->front() == '-';
        const auto name = desc ? sort->substr(1) : *sort;
        auto key = [&](const SeriesDocument* d) -> std::optional<std::pair<double, std::string>> {
            const auto f = find_field(*d, name);
            if (!f) return std::nullopt;
            if (f->type == FieldType::number) return std::pair{f->numbers.front(), std::string{}};
            return std::pair{0.0, lower(f->values.front())};
        };
        std::sort(hits.begin(), hits.end(), [&](auto* a, auto* b) {
            const auto ka = key(a);
            const auto kb = key(b);
            if (ka.has_value() != kb.has_value()) return ka.has_value();
            if (ka && *ka != *kb) return desc ? *kb < *ka : *ka < *kb;
            return a->series_uid < b->series_uid;
        });
    }
    std::vector<std::string> out;
    for (auto* d : hits) out.push_back(d->series_uid);
    return out;
}

auto oracle_facet(const std::vector<SeriesDocument>& docs, const QueryAst& ast, const std::string& field)
    -> index::FieldFacet {
    index::FieldFacet out;
    out.field = field;
    std::map<std::string, std::uint64_t> counts;
    std::map<std::string, double> numeric;
    for (const auto& d : docs) {
        if (!oracle_matches(d, ast)) continue;
        const auto f = find_field(d, field);
        if (!f) {
            ++out.missing_count;
            continue;
        }
        std::set<std::string> seen;
        for (const auto& v : f->values) seen.insert(v);
        for (double v : f->numbers) {
            seen.insert(fmt_num(v));
            numeric[fmt_num(v)] = v;
        }
        for (const auto& v : seen) ++counts[v];
    }
    for (const auto& [v, c] : counts) out.buckets.push_back({v, c});
    std::sort(out.buckets.begin(), out.buckets.end(), [&](const auto& a, const auto& b) {
        if (a.count != b.count) return a.count > b.count;
        if (!numeric.empty()) return numeric[a.value] < numeric[b.value];
        return a.value < b.value;
    });
    return out;
}

auto oracle_autocomplete(const std::vector<SeriesDocument>& docs, const std::string& field, const std::string& prefix,
                         std::size_t limit) -> std::vector<index::Suggestion> {
    const auto facet = oracle_facet(docs, index::make_match_all(), field);
    std::vector<index::Suggestion> out;
    for (const auto& b : facet.buckets) {
        if (lower(b.value).rfind(lower(prefix), 0) == 0) out.push_back({b.value, b.count});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.doc_count != b.doc_count ? a.doc_count > b.doc_count : a.value < b.value;
    });
    if (out.size() > limit) out.resize(limit);
    return out;
}

auto corpus_facet_fields() -> const std::vector<std::string>& {
    static const std::vector<std::string> fields = {"Modality",      "Manufacturer", "ConvolutionKernel",
                                                    "ImageType",     "PatientName",  "StudyDate",
                                                    "SliceThickness", "Rows",        "tags",
                                                    "anatomical_structures", "body_part", "StudyDescription"};
    return fields;
}

}  // namespace curator::fixture
