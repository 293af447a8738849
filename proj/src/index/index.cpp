/**
 * @file index.cpp
 * @brief Postings-based evaluation of query ASTs, facets and autocomplete
 */

#include "curator/index/index.hpp"

#include "curator/common/error.hpp"
#include "curator/common/fileio.hpp"
#include "curator/common/text.hpp"
#include "curator/index/json_codec.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

namespace curator::index {

namespace {

using Postings = std::vector<std::uint32_t>;
using Bitmap = std::vector<char>;

void posting_add(Postings& p, std::uint32_t id) {
    const auto it = std::lower_bound(p.begin(), p.end(), id);
    if (it == p.end() || *it != id) p.insert(it, id);
}

template <typename Map, typename Key>
void posting_remove(Map& map, const Key& key, std::uint32_t id) {
    auto it = map.find(key);
    if (it == map.end()) return;
    auto& p = it->second;
    const auto pos = std::lower_bound(p.begin(), p.end(), id);
    if (pos != p.end() && *pos == id) p.erase(pos);
    if (p.empty()) map.erase(it);
}

void mark(Bitmap& bits, const Postings& p) {
    for (auto id : p) bits[id] = 1;
}

template <typename Map>
void mark_key(Bitmap& bits, const Map& map, const typename Map::key_type& key) {
    if (auto it = map.find(key); it != map.end()) mark(bits, it->second);
}

/// Keys of `map` matching `pattern`, scanning only the literal-prefix range.
template <typename Fn>
void scan_pattern(const std::map<std::string, Postings>& map, const std::string& pattern, Fn&& on_match) {
    const auto prefix = literal_prefix(pattern);
    for (auto it = map.lower_bound(prefix); it != map.end(); ++it) {
        if (it->first.compare(0, prefix.size(), prefix) != 0) break;
        if (wildcard_match(pattern, it->first)) on_match(it->second);
    }
}

auto contains_sequence(const std::vector<std::string>& hay, const std::vector<std::string>& needle) -> bool {
    if (needle.empty() || needle.size() > hay.size()) return false;
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

auto distinct_numbers(const Field& f) -> std::vector<double> {
    std::vector<double> out = f.numbers;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

auto distinct_values(const Field& f) -> std::vector<std::string> {
    std::vector<std::string> out = f.values;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

auto is_texty(FieldType t) -> bool { return t == FieldType::text || t == FieldType::name; }
auto is_keywordy(FieldType t) -> bool { return t == FieldType::keyword || t == FieldType::name; }

struct FieldIndex {
    std::string name;
    FieldType type = FieldType::keyword;
    std::map<std::string, Postings> values;  ///< lowercased whole values
    std::map<std::string, Postings> tokens;  ///< text and name fields
    std::map<double, Postings> numbers;
    std::map<std::string, std::uint64_t> exact;  ///< stored value (numbers formatted) -> doc count
    std::uint64_t doc_count = 0;
};

auto dedupe_tags(std::vector<std::string> in) -> std::vector<std::string> {
    std::vector<std::string> out;
    for (auto& t : in) {
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

auto virtual_fields(const SeriesDocument& doc) -> std::vector<std::pair<std::string, Field>> {
    std::vector<std::pair<std::string, Field>> out;
    out.emplace_back("tags", Field{FieldType::keyword, doc.tags, {}});
    out.emplace_back("anatomical_structures", Field{FieldType::keyword, doc.anatomical_structures, {}});
    Field body{FieldType::keyword, {}, {}};
    if (doc.body_part) body.values.push_back(*doc.body_part);
    out.emplace_back("body_part", std::move(body));
    out.emplace_back("instance_count", Field{FieldType::number, {}, {static_cast<double>(doc.instance_count)}});
    return out;
}

struct MetadataIndex::Impl {
    std::vector<SeriesDocument> docs;
    std::unordered_map<std::string, std::uint32_t> ids;
    std::map<std::string, FieldIndex> fields;  ///< keyed by lowercased name
    std::map<std::string, Postings> term_values;
    std::map<std::string, Postings> term_tokens;
    std::optional<std::filesystem::path> journal_path;
    std::unique_ptr<fileio::AppendLog> journal;

    // --- maintenance ---------------------------------------------------------

    template <typename Fn>
    static void for_each_field(const SeriesDocument& doc, Fn&& fn) {
        for (const auto& [name, f] : doc.fields) fn(name, f);
        for (const auto& [name, f] : virtual_fields(doc)) fn(name, f);
    }

    void index_doc(std::uint32_t id) {
        for_each_field(docs[id], [&](const std::string& name, const Field& f) {
            if (f.empty()) return;
            auto& fi = fields[text::to_lower(name)];
            if (fi.name.empty()) {
                fi.name = name;
                fi.type = f.type;
            }
            ++fi.doc_count;
            if (f.type == FieldType::number) {
                for (double n : distinct_numbers(f)) {
                    posting_add(fi.numbers[n], id);
                    ++fi.exact[text::format_number(n)];
                }
                return;
            }
            for (const auto& v : distinct_values(f)) {
                const auto lv = text::to_lower(v);
                posting_add(fi.values[lv], id);
                ++fi.exact[v];
                if (is_keywordy(f.type)) posting_add(term_values[lv], id);
                if (is_texty(f.type)) {
                    for (const auto& t : tokenize(v)) {
                        posting_add(fi.tokens[t], id);
                        posting_add(term_tokens[t], id);
                    }
                }
            }
        });
    }

    void unindex_doc(std::uint32_t id) {
        for_each_field(docs[id], [&](const std::string& name, const Field& f) {
            if (f.empty()) return;
            auto fit = fields.find(text::to_lower(name));
            if (fit == fields.end()) return;
            auto& fi = fit->second;
            --fi.doc_count;
            auto drop_exact = [&](const std::string& key) {
                if (auto e = fi.exact.find(key); e != fi.exact.end() && --e->second == 0) fi.exact.erase(e);
            };
            if (f.type == FieldType::number) {
                for (double n : distinct_numbers(f)) {
                    posting_remove(fi.numbers, n, id);
                    drop_exact(text::format_number(n));
                }
                return;
            }
            for (const auto& v : distinct_values(f)) {
                const auto lv = text::to_lower(v);
                posting_remove(fi.values, lv, id);
                drop_exact(v);
                if (is_keywordy(f.type)) posting_remove(term_values, lv, id);
                if (is_texty(f.type)) {
                    for (const auto& t : tokenize(v)) {
                        posting_remove(fi.tokens, t, id);
                        posting_remove(term_tokens, t, id);
                    }
                }
            }
        });
    }

    auto put(SeriesDocument doc) -> UpsertOutcome {
        if (auto it = ids.find(doc.series_uid); it != ids.end()) {
            unindex_doc(it->second);
            docs[it->second] = std::move(doc);
            index_doc(it->second);
            return UpsertOutcome::updated;
        }
        const auto id = static_cast<std::uint32_t>(docs.size());
        ids.emplace(doc.series_uid, id);
        docs.push_back(std::move(doc));
        index_doc(id);
        return UpsertOutcome::created;
    }

    void log(const SeriesDocument& doc) {
        if (journal) journal->append(document_to_json(doc).dump(), false);
    }

    // --- evaluation ----------------------------------------------------------

    [[nodiscard]] auto resolve(const std::string& name) const -> const FieldIndex* {
        auto it = fields.find(text::to_lower(name));
        return it == fields.end() ? nullptr : &it->second;
    }

    [[nodiscard]] auto field_of(const SeriesDocument& doc, const FieldIndex& fi) const -> std::optional<Field> {
        if (auto it = doc.fields.find(fi.name); it != doc.fields.end()) return it->second;
        for (auto& [name, f] : virtual_fields(doc)) {
            if (name == fi.name) return f;
        }
        // canonical spelling may differ in case between documents
        for (const auto& [name, f] : doc.fields) {
            if (text::iequals(name, fi.name)) return f;
        }
        return std::nullopt;
    }

    /// Candidates must contain every token; verify adjacency per value.
    void phrase_in_field(Bitmap& out, const FieldIndex& fi, const std::vector<std::string>& toks) const {
        if (toks.empty()) return;
        Bitmap candidates(docs.size(), 1);
        for (const auto& t : toks) {
            Bitmap has(docs.size(), 0);
            mark_key(has, fi.tokens, t);
            for (std::size_t i = 0; i < docs.size(); ++i) candidates[i] = static_cast<char>(candidates[i] && has[i]);
        }
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (!candidates[i] || out[i]) continue;
            const auto f = field_of(docs[i], fi);
            if (!f) continue;
            for (const auto& v : f->values) {
                if (contains_sequence(tokenize(v), toks)) {
                    out[i] = 1;
                    break;
                }
            }
        }
    }

    auto eval(const QueryAst& ast, std::vector<std::string>& warnings) const -> Bitmap {
        const auto n = docs.size();
        switch (ast->kind) {
            case NodeKind::match_all: return Bitmap(n, 1);
            case NodeKind::and_: {
                auto acc = eval(ast->children.front(), warnings);
                for (std::size_t c = 1; c < ast->children.size(); ++c) {
                    const auto next = eval(ast->children[c], warnings);
                    for (std::size_t i = 0; i < n; ++i) acc[i] = static_cast<char>(acc[i] && next[i]);
                }
                return acc;
            }
            case NodeKind::or_: {
                Bitmap acc(n, 0);
                for (const auto& child : ast->children) {
                    const auto next = eval(child, warnings);
                    for (std::size_t i = 0; i < n; ++i) acc[i] = static_cast<char>(acc[i] || next[i]);
                }
                return acc;
            }
            case NodeKind::not_: {
                auto acc = eval(ast->children.front(), warnings);
                for (auto& b : acc) b = static_cast<char>(!b);
                return acc;
            }
            case NodeKind::term: return eval_term(ast->text);
            case NodeKind::phrase: return eval_phrase(ast->text);
            case NodeKind::field_match: return eval_field_match(*ast, warnings);
            case NodeKind::range: return eval_range(*ast, warnings);
        }
        return Bitmap(n, 0);
    }

    [[nodiscard]] auto eval_term(const std::string& text) const -> Bitmap {
        Bitmap out(docs.size(), 0);
        if (has_wildcards(text)) {
            auto m = [&](const Postings& p) { mark(out, p); };
            scan_pattern(term_values, text, m);
            scan_pattern(term_tokens, text, m);
            return out;
        }
        const auto lt = text::to_lower(text);
        mark_key(out, term_values, lt);
        mark_key(out, term_tokens, lt);
        return out;
    }

    [[nodiscard]] auto eval_phrase(const std::string& text) const -> Bitmap {
        Bitmap out(docs.size(), 0);
        mark_key(out, term_values, text::to_lower(text));
        const auto toks = tokenize(text);
        for (const auto& [key, fi] : fields) {
            if (is_texty(fi.type)) phrase_in_field(out, fi, toks);
        }
        return out;
    }

    auto eval_field_match(const QueryNode& q, std::vector<std::string>& warnings) const -> Bitmap {
        Bitmap out(docs.size(), 0);
        const auto* fi = resolve(q.field);
        if (fi == nullptr) {
            warnings.push_back("unknown field '" + q.field + "'");
            return out;
        }
        const bool wild = !q.quoted && has_wildcards(q.text);
        if (fi->type == FieldType::number) {
            if (!wild && !q.quoted) {
                if (auto v = text::parse_double(q.text)) {
                    mark_key(out, fi->numbers, *v);
                    return out;
                }
            }
            for (const auto& [v, p] : fi->numbers) {
                const auto s = text::format_number(v);
                if (wild ? wildcard_match(q.text, s) : text::iequals(q.text, s)) mark(out, p);
            }
            return out;
        }
        if (fi->type == FieldType::date && !wild) {
            const auto iso = normalize_date(text::trim(q.text));
            mark_key(out, fi->values, iso ? *iso : text::to_lower(q.text));
            return out;
        }
        auto m = [&](const Postings& p) { mark(out, p); };
        if (wild) {
            scan_pattern(fi->values, q.text, m);
            if (is_texty(fi->type)) scan_pattern(fi->tokens, q.text, m);
            return out;
        }
        const auto lv = text::to_lower(q.text);
        mark_key(out, fi->values, lv);
        if (is_texty(fi->type)) {
            if (q.quoted) {
                phrase_in_field(out, *fi, tokenize(q.text));
            } else {
                mark_key(out, fi->tokens, lv);
            }
        }
        return out;
    }

    auto eval_range(const QueryNode& q, std::vector<std::string>& warnings) const -> Bitmap {
        Bitmap out(docs.size(), 0);
        const auto* fi = resolve(q.field);
        if (fi == nullptr) {
            warnings.push_back("unknown field '" + q.field + "'");
            return out;
        }
        if (fi->type == FieldType::number) {
            std::optional<double> lo;
            std::optional<double> hi;
            if (q.lo && !(lo = text::parse_double(*q.lo))) {
                warnings.push_back("range bound '" + *q.lo + "' is not a number");
                return out;
            }
            if (q.hi && !(hi = text::parse_double(*q.hi))) {
                warnings.push_back("range bound '" + *q.hi + "' is not a number");
                return out;
            }
            for (auto it = lo ? fi->numbers.lower_bound(*lo) : fi->numbers.begin(); it != fi->numbers.end(); ++it) {
                const double v = it->first;
                if (lo && !q.lo_inclusive && v == *lo) continue;
                if (hi && (v > *hi || (!q.hi_inclusive && v == *hi))) break;
                mark(out, it->second);
            }
            return out;
        }
        std::optional<std::string> lo;
        std::optional<std::string> hi;
        auto bound = [&](const std::optional<std::string>& b, std::optional<std::string>& dst) {
            if (!b) return true;
            if (fi->type == FieldType::date) {
                dst = normalize_date(text::trim(*b));
                if (!dst) warnings.push_back("range bound '" + *b + "' is not a date");
                return dst.has_value();
            }
            dst = text::to_lower(*b);
            return true;
        };
        if (!bound(q.lo, lo) || !bound(q.hi, hi)) return out;
        for (auto it = lo ? fi->values.lower_bound(*lo) : fi->values.begin(); it != fi->values.end(); ++it) {
            const auto& v = it->first;
            if (lo && !q.lo_inclusive && v == *lo) continue;
            if (hi && (v > *hi || (!q.hi_inclusive && v == *hi))) break;
            mark(out, it->second);
        }
        return out;
    }

    // --- ordering ------------------------------------------------------------

    struct SortKey {
        bool missing = true;
        double number = 0;
        std::string text;
    };

    [[nodiscard]] auto sort_key(const SeriesDocument& doc, const std::string& field, const FieldIndex* fi) const
        -> SortKey {
        SortKey k;
        if (field == "series_uid") {
            k.missing = false;
            k.text = doc.series_uid;
        } else if (field == "ingest_time") {
            k.missing = false;
            k.number = static_cast<double>(doc.ingest_time);
        } else if (fi != nullptr) {
            if (auto f = field_of(doc, *fi); f && !f->empty()) {
                k.missing = false;
                if (f->type == FieldType::number) {
                    k.number = f->numbers.front();
                } else {
                    k.text = text::to_lower(f->values.front());
                }
            }
        }
        return k;
    }

    auto ordered(const Bitmap& bits, const std::optional<std::string>& sort, std::vector<std::string>& warnings) const
        -> std::vector<std::uint32_t> {
        std::vector<std::uint32_t> ids_out;
        for (std::uint32_t i = 0; i < bits.size(); ++i) {
            if (bits[i]) ids_out.push_back(i);
        }
        std::string field;
        bool descending = false;
        if (sort && !sort->empty()) {
            field = *sort;
            if (field.front() == '-') {
                descending = true;
                field.erase(0, 1);
            }
        }
        const FieldIndex* fi = nullptr;
        if (!field.empty() && field != "series_uid" && field != "ingest_time") {
            fi = resolve(field);
            if (fi == nullptr) {
                warnings.push_back("unknown sort field '" + field + "', using default order");
                field.clear();
            }
        }
        if (field.empty()) {
            std::sort(ids_out.begin(), ids_out.end(), [&](std::uint32_t a, std::uint32_t b) {
                const auto& da = docs[a];
                const auto& db = docs[b];
                if (da.ingest_time != db.ingest_time) return da.ingest_time > db.ingest_time;
                return da.series_uid < db.series_uid;
            });
            return ids_out;
        }
        std::vector<std::pair<SortKey, std::uint32_t>> keyed;
        keyed.reserve(ids_out.size());
        for (auto id : ids_out) keyed.emplace_back(sort_key(docs[id], field, fi), id);
        const bool numeric = field == "ingest_time" || (fi != nullptr && fi->type == FieldType::number);
        std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
            if (a.first.missing != b.first.missing) return !a.first.missing;
            if (!a.first.missing) {
                if (numeric && a.first.number != b.first.number) {
                    return descending ? a.first.number > b.first.number : a.first.number < b.first.number;
                }
                if (!numeric && a.first.text != b.first.text) {
                    return descending ? a.first.text > b.first.text : a.first.text < b.first.text;
                }
            }
            return docs[a.second].series_uid < docs[b.second].series_uid;
        });
        for (std::size_t i = 0; i < keyed.size(); ++i) ids_out[i] = keyed[i].second;
        return ids_out;
    }

    // --- facets --------------------------------------------------------------

    auto facet(const Bitmap& bits, std::uint64_t total, const std::string& name, std::vector<std::string>& warnings) const
        -> FieldFacet {
        FieldFacet out;
        out.field = name;
        const auto* fi = resolve(name);
        if (fi == nullptr) {
            warnings.push_back("unknown field '" + name + "'");
            out.missing_count = total;
            return out;
        }
        out.field = fi->name;
        if (fi->type == FieldType::number) {
            std::vector<std::vector<double>> per_doc;
            std::set<double> distinct;
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (!bits[i]) continue;
                const auto f = field_of(docs[i], *fi);
                if (!f || f->numbers.empty()) {
                    ++out.missing_count;
                    continue;
                }
                per_doc.push_back(distinct_numbers(*f));
                distinct.insert(per_doc.back().begin(), per_doc.back().end());
            }
            std::vector<std::pair<double, FacetBucket>> keyed;
            if (distinct.size() <= kExactFacetLimit) {
                std::map<double, std::uint64_t> counts;
                for (const auto& values : per_doc) {
                    for (double v : values) ++counts[v];
                }
                for (const auto& [v, c] : counts) keyed.push_back({v, FacetBucket{text::format_number(v), c}});
            } else {
                out.binned = true;
                const double lo = *distinct.begin();
                const double hi = *distinct.rbegin();
                const double span = hi - lo;
                const auto bins = static_cast<double>(kFacetBins);
                std::vector<std::uint64_t> counts(kFacetBins, 0);
                for (const auto& values : per_doc) {
                    std::set<std::size_t> seen;
                    for (double v : values) {
                        auto b = static_cast<std::size_t>(std::floor((v - lo) * bins / span));
                        seen.insert(std::min(b, kFacetBins - 1));
                    }
                    for (auto b : seen) ++counts[b];
                }
                for (std::size_t b = 0; b < kFacetBins; ++b) {
                    if (counts[b] == 0) continue;
                    const double a = lo + span * static_cast<double>(b) / bins;
                    const double z = lo + span * static_cast<double>(b + 1) / bins;
                    keyed.push_back(
                        {a, FacetBucket{"[" + text::format_number(a) + ".." + text::format_number(z) + ")", counts[b]}});
                }
            }
            std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
                if (x.second.count != y.second.count) return x.second.count > y.second.count;
                return x.first < y.first;
            });
            for (auto& [k, bucket] : keyed) out.buckets.push_back(std::move(bucket));
            return out;
        }
        std::map<std::string, std::uint64_t> counts;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (!bits[i]) continue;
            const auto f = field_of(docs[i], *fi);
            if (!f || f->values.empty()) {
                ++out.missing_count;
                continue;
            }
            for (const auto& v : distinct_values(*f)) ++counts[v];
        }
        for (const auto& [v, c] : counts) out.buckets.push_back({v, c});
        std::stable_sort(out.buckets.begin(), out.buckets.end(),
                         [](const FacetBucket& x, const FacetBucket& y) { return x.count > y.count; });
        return out;
    }
};

MetadataIndex::MetadataIndex() : impl_(std::make_unique<Impl>()) {}

MetadataIndex::MetadataIndex(const std::filesystem::path& journal) : impl_(std::make_unique<Impl>()) {
    impl_->journal_path = journal;
    std::map<std::string, SeriesDocument> latest;
    std::vector<std::string> order;
    const auto accepted = fileio::scan_lines(journal, [&](std::string_view line) {
        if (line.empty()) return false;
        try {
            auto doc = document_from_json(nlohmann::json::parse(line));
            ++replay_.lines;
            auto [it, inserted] = latest.insert_or_assign(doc.series_uid, std::move(doc));
            if (inserted) order.push_back(it->first);
            return true;
        } catch (const std::exception&) {
            return false;
        }
    });
    std::error_code ec;
    const auto size = std::filesystem::exists(journal, ec) ? std::filesystem::file_size(journal, ec) : 0;
    if (size > accepted) {
        replay_.truncated_bytes = size - accepted;
        fileio::truncate_file(journal, accepted);
    }
    for (const auto& uid : order) impl_->put(std::move(latest[uid]));
    replay_.documents = impl_->docs.size();
    impl_->journal = std::make_unique<fileio::AppendLog>(journal);
    if (replay_.lines > 2 * replay_.documents + 64) compact();
}

MetadataIndex::~MetadataIndex() = default;

auto MetadataIndex::upsert(SeriesDocument doc) -> UpsertOutcome {
    if (doc.series_uid.empty()) throw Error(ErrorCode::missing_series_uid, "document has no series_uid");
    doc.tags = dedupe_tags(std::move(doc.tags));
    doc.anatomical_structures = dedupe_tags(std::move(doc.anatomical_structures));
    std::unique_lock lock(mutex_);
    impl_->log(doc);
    return impl_->put(std::move(doc));
}

auto MetadataIndex::set_tags(const std::string& series_uid, std::vector<std::string> tags) -> std::vector<std::string> {
    std::unique_lock lock(mutex_);
    auto it = impl_->ids.find(series_uid);
    if (it == impl_->ids.end()) throw Error(ErrorCode::unknown_series, "unknown series '" + series_uid + "'");
    auto doc = impl_->docs[it->second];
    auto previous = doc.tags;
    doc.tags = dedupe_tags(std::move(tags));
    impl_->log(doc);
    impl_->put(std::move(doc));
    return previous;
}

auto MetadataIndex::set_anatomical_structures(const std::string& series_uid, std::vector<std::string> structures)
    -> std::vector<std::string> {
    std::unique_lock lock(mutex_);
    auto it = impl_->ids.find(series_uid);
    if (it == impl_->ids.end()) throw Error(ErrorCode::unknown_series, "unknown series '" + series_uid + "'");
    auto doc = impl_->docs[it->second];
    auto previous = doc.anatomical_structures;
    doc.anatomical_structures = dedupe_tags(std::move(structures));
    impl_->log(doc);
    impl_->put(std::move(doc));
    return previous;
}

auto MetadataIndex::get(const std::string& series_uid) const -> std::optional<SeriesDocument> {
    std::shared_lock lock(mutex_);
    auto it = impl_->ids.find(series_uid);
    if (it == impl_->ids.end()) return std::nullopt;
    return impl_->docs[it->second];
}

auto MetadataIndex::contains(const std::string& series_uid) const -> bool {
    std::shared_lock lock(mutex_);
    return impl_->ids.count(series_uid) != 0;
}

auto MetadataIndex::size() const -> std::size_t {
    std::shared_lock lock(mutex_);
    return impl_->docs.size();
}

auto MetadataIndex::series_uids() const -> std::vector<std::string> {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    out.reserve(impl_->docs.size());
    for (const auto& d : impl_->docs) out.push_back(d.series_uid);
    std::sort(out.begin(), out.end());
    return out;
}

auto MetadataIndex::fields() const -> std::vector<FieldInfo> {
    std::shared_lock lock(mutex_);
    std::vector<FieldInfo> out;
    for (const auto& [key, fi] : impl_->fields) out.push_back({fi.name, fi.type, fi.doc_count});
    return out;
}

auto MetadataIndex::search(const QueryAst& ast, std::size_t from, std::size_t size,
                           const std::optional<std::string>& sort) const -> SearchResults {
    if (size > kMaxPageSize) {
        throw Error(ErrorCode::bad_request, "size " + std::to_string(size) + " exceeds " + std::to_string(kMaxPageSize));
    }
    std::shared_lock lock(mutex_);
    SearchResults out;
    out.from = from;
    out.size = size;
    const auto bits = impl_->eval(ast, out.warnings);
    const auto ids = impl_->ordered(bits, sort, out.warnings);
    out.total = ids.size();
    for (std::size_t i = from; i < ids.size() && i < from + size; ++i) {
        out.hits.push_back({impl_->docs[ids[i]].series_uid, 1.0});
    }
    return out;
}

auto MetadataIndex::match_all_uids(const QueryAst& ast) const -> std::vector<std::string> {
    std::shared_lock lock(mutex_);
    std::vector<std::string> warnings;
    const auto ids = impl_->ordered(impl_->eval(ast, warnings), std::nullopt, warnings);
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(impl_->docs[id].series_uid);
    return out;
}

auto MetadataIndex::aggregate(const QueryAst& ast, const std::vector<std::string>& fields) const -> FacetDistribution {
    std::shared_lock lock(mutex_);
    FacetDistribution out;
    const auto bits = impl_->eval(ast, out.warnings);
    out.total = static_cast<std::uint64_t>(std::count(bits.begin(), bits.end(), 1));
    for (const auto& f : fields) out.fields.push_back(impl_->facet(bits, out.total, f, out.warnings));
    return out;
}

auto MetadataIndex::autocomplete(const std::string& field, const std::string& prefix, std::size_t limit) const
    -> std::vector<Suggestion> {
    std::shared_lock lock(mutex_);
    std::vector<Suggestion> out;
    const auto* fi = impl_->resolve(field);
    if (fi == nullptr || limit == 0) return out;
    for (const auto& [value, count] : fi->exact) {
        if (text::starts_with_icase(value, prefix)) out.push_back({value, count});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Suggestion& a, const Suggestion& b) { return a.doc_count > b.doc_count; });
    if (out.size() > limit) out.resize(limit);
    return out;
}

void MetadataIndex::flush() {
    std::unique_lock lock(mutex_);
    if (impl_->journal) impl_->journal->sync();
}

void MetadataIndex::compact() {
    if (!impl_->journal_path) return;
    std::string contents;
    for (const auto& d : impl_->docs) {
        contents += document_to_json(d).dump();
        contents.push_back('\n');
    }
    impl_->journal.reset();
    fileio::write_atomic(*impl_->journal_path, contents);
    impl_->journal = std::make_unique<fileio::AppendLog>(*impl_->journal_path);
}

auto export_csv(const FacetDistribution& dist, const std::string& field) -> std::string {
    const auto it = std::find_if(dist.fields.begin(), dist.fields.end(),
                                 [&](const FieldFacet& f) { return text::iequals(f.field, field); });
    if (it == dist.fields.end()) {
        throw Error(ErrorCode::field_not_in_distribution, "field '" + field + "' is not in the distribution");
    }
    auto cell = [](const std::string& v) {
        if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
        std::string out = "\"";
        for (char c : v) {
            if (c == '"') out.push_back('"');
            out.push_back(c);
        }
        out.push_back('"');
        return out;
    };
    std::string out = "value,count\n";
    for (const auto& b : it->buckets) out += cell(b.value) + "," + std::to_string(b.count) + "\n";
    if (it->missing_count > 0) out += "__missing__," + std::to_string(it->missing_count) + "\n";
    return out;
}

}  // namespace curator::index
