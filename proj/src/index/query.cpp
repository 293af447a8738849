/**
 * @file query.cpp
 * @brief Recursive-descent query parser and canonical printer
 */

#include "curator/index/query.hpp"

#include "curator/common/text.hpp"

#include <algorithm>

namespace curator::index {

namespace {

auto is_space(char c) -> bool { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

auto is_special(char c) -> bool {
    return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ':' || c == '"' ||
           c == '\\' || is_space(c);
}

auto node(NodeKind kind) -> std::shared_ptr<QueryNode> {
    auto n = std::make_shared<QueryNode>();
    n->kind = kind;
    return n;
}

auto lower_ascii(char c) -> char { return c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c; }

enum class TokKind { end, lparen, rparen, lbracket, rbracket, lbrace, rbrace, colon, quoted, word };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;
    bool escaped = false;  ///< word contained an escape, so it is never an operator
    std::size_t pos = 0;
    std::size_t end = 0;

    [[nodiscard]] auto is_op(std::string_view op) const -> bool {
        return kind == TokKind::word && !escaped && text == op;
    }
};

auto describe(const Token& t) -> std::string {
    switch (t.kind) {
        case TokKind::end: return "end of input";
        case TokKind::quoted: return "\"" + t.text + "\"";
        case TokKind::word: return "'" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

class Parser {
public:
    explicit Parser(std::string_view input) : in_(input) {}

    auto parse() -> QueryAst {
        skip_space();
        if (pos_ >= in_.size()) return make_match_all();
        auto result = parse_or();
        const auto t = peek();
        if (t.kind != TokKind::end) fail(t, {"end of input"});
        return result;
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const Token& at, std::vector<std::string> expected) const {
        throw QueryParseError(at.pos, std::move(expected), describe(at));
    }

    void skip_space() {
        while (pos_ < in_.size() && is_space(in_[pos_])) ++pos_;
    }

    /// Lexes the token at the cursor. `value_mode` lets ':' continue a word.
    auto lex(bool value_mode) -> Token {
        skip_space();
        Token t;
        t.pos = pos_;
        if (pos_ >= in_.size()) {
            t.end = pos_;
            return t;
        }
        const char c = in_[pos_];
        auto single = [&](TokKind k) {
            t.kind = k;
            t.text = std::string(1, c);
            t.end = pos_ + 1;
            return t;
        };
        switch (c) {
            case '(': return single(TokKind::lparen);
            case ')': return single(TokKind::rparen);
            case '[': return single(TokKind::lbracket);
            case ']': return single(TokKind::rbracket);
            case '{': return single(TokKind::lbrace);
            case '}': return single(TokKind::rbrace);
            case ':':
                if (!value_mode) return single(TokKind::colon);
                break;
            case '"': {
                t.kind = TokKind::quoted;
                std::size_t i = pos_ + 1;
                while (true) {
                    if (i >= in_.size()) {
                        Token end_tok;
                        end_tok.pos = in_.size();
                        fail(end_tok, {"\""});
                    }
                    if (in_[i] == '\\' && i + 1 < in_.size()) {
                        t.text.push_back(in_[i + 1]);
                        i += 2;
                        continue;
                    }
                    if (in_[i] == '"') break;
                    t.text.push_back(in_[i++]);
                }
                t.end = i + 1;
                return t;
            }
            default: break;
        }
        t.kind = TokKind::word;
        std::size_t i = pos_;
        while (i < in_.size()) {
            const char ch = in_[i];
            if (ch == '\\') {
                if (i + 1 < in_.size()) {
                    t.text.push_back(in_[i + 1]);
                    i += 2;
                } else {
                    t.text.push_back('\\');
                    ++i;
                }
                t.escaped = true;
                continue;
            }
            if (ch == ':' && value_mode) {
                t.text.push_back(ch);
                ++i;
                continue;
            }
            if (is_special(ch)) break;
            t.text.push_back(ch);
            ++i;
        }
        t.end = i;
        return t;
    }

    auto peek(bool value_mode = false) -> Token {
        const auto save = pos_;
        auto t = lex(value_mode);
        pos_ = save;
        return t;
    }

    auto next(bool value_mode = false) -> Token {
        auto t = lex(value_mode);
        pos_ = t.end;
        return t;
    }

    auto starts_unary(const Token& t) const -> bool {
        if (t.kind == TokKind::lparen || t.kind == TokKind::quoted) return true;
        if (t.kind != TokKind::word) return false;
        return !t.is_op("AND") && !t.is_op("OR");
    }

    auto parse_or() -> QueryAst {
        std::vector<QueryAst> parts{parse_and()};
        while (peek().is_op("OR")) {
            next();
            parts.push_back(parse_and());
        }
        return make_or(std::move(parts));
    }

    auto parse_and() -> QueryAst {
        std::vector<QueryAst> parts{parse_unary()};
        while (true) {
            const auto t = peek();
            if (t.is_op("AND")) {
                next();
                parts.push_back(parse_unary());
            } else if (starts_unary(t)) {
                parts.push_back(parse_unary());
            } else {
                break;
            }
        }
        return make_and(std::move(parts));
    }

    auto parse_unary() -> QueryAst {
        if (peek().is_op("NOT")) {
            next();
            return make_not(parse_unary());
        }
        return parse_primary();
    }

    auto parse_primary() -> QueryAst {
        const auto t = peek();
        if (t.kind == TokKind::lparen) {
            next();
            auto inner = parse_or();
            const auto close = peek();
            if (close.kind != TokKind::rparen) fail(close, {")"});
            next();
            return inner;
        }
        if (t.kind == TokKind::quoted) {
            next();
            return make_phrase(t.text);
        }
        if (t.kind != TokKind::word || t.is_op("AND") || t.is_op("OR") || t.text.empty()) {
            fail(t, {"(", "\"", "term", "field:"});
        }
        next();
        if (pos_ < in_.size() && in_[pos_] == ':') {
            ++pos_;
            return parse_field_value(t);
        }
        return make_term(t.text);
    }

    auto parse_field_value(const Token& field) -> QueryAst {
        if (pos_ < in_.size() && is_space(in_[pos_])) {
            Token at;
            at.pos = pos_;
            fail(at, {"\"", "[", "{", "pattern"});
        }
        const auto t = peek(true);
        if (t.kind == TokKind::quoted) {
            next(true);
            return make_field_match(field.text, t.text, true);
        }
        if (t.kind == TokKind::lbracket || t.kind == TokKind::lbrace) {
            next(true);
            const bool lo_inc = t.kind == TokKind::lbracket;
            auto lo = parse_bound();
            const auto to = next();
            if (!to.is_op("TO")) fail(to, {"TO"});
            auto hi = parse_bound();
            const auto close = peek();
            if (close.kind != TokKind::rbracket && close.kind != TokKind::rbrace) fail(close, {"]", "}"});
            next();
            return make_range(field.text, std::move(lo), std::move(hi), lo_inc, close.kind == TokKind::rbracket);
        }
        if (t.kind != TokKind::word || t.text.empty()) fail(t, {"\"", "[", "{", "pattern"});
        next(true);
        return make_field_match(field.text, t.text, false);
    }

    auto parse_bound() -> std::optional<std::string> {
        const auto t = peek(true);
        if (t.kind == TokKind::quoted) {
            next(true);
            return t.text;
        }
        if (t.kind != TokKind::word || t.is_op("TO") || t.text.empty()) fail(t, {"bound"});
        next(true);
        if (t.text == "*" && !t.escaped) return std::nullopt;
        return t.text;
    }
};

auto escape_word(std::string_view s, bool allow_colon) -> std::string {
    std::string out;
    if (s == "AND" || s == "OR" || s == "NOT" || s == "TO") out.push_back('\\');
    for (const char c : s) {
        if (is_special(c) && !(allow_colon && c == ':')) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

auto quote(std::string_view s) -> std::string {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

auto print_bound(const std::optional<std::string>& b) -> std::string {
    if (!b) return "*";
    if (b->empty() || *b == "*" || *b == "TO") return quote(*b);
    return escape_word(*b, true);
}

auto print_child(const QueryAst& child) -> std::string {
    const auto s = print_query(child);
    if (child->kind == NodeKind::and_ || child->kind == NodeKind::or_) return "(" + s + ")";
    return s;
}

}  // namespace

auto operator==(const QueryNode& a, const QueryNode& b) -> bool {
    if (a.kind != b.kind || a.field != b.field || a.text != b.text || a.quoted != b.quoted || a.lo != b.lo ||
        a.hi != b.hi || a.lo_inclusive != b.lo_inclusive || a.hi_inclusive != b.hi_inclusive ||
        a.children.size() != b.children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!ast_equal(a.children[i], b.children[i])) return false;
    }
    return true;
}

auto ast_equal(const QueryAst& a, const QueryAst& b) -> bool {
    if (!a || !b) return a == b;
    return *a == *b;
}

auto make_match_all() -> QueryAst { return node(NodeKind::match_all); }

namespace {
auto make_nary(NodeKind kind, std::vector<QueryAst> children) -> QueryAst {
    std::vector<QueryAst> flat;
    for (auto& c : children) {
        if (c->kind == kind) {
            flat.insert(flat.end(), c->children.begin(), c->children.end());
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.size() == 1) return flat.front();
    auto n = node(kind);
    n->children = std::move(flat);
    return n;
}
}  // namespace

auto make_and(std::vector<QueryAst> children) -> QueryAst { return make_nary(NodeKind::and_, std::move(children)); }
auto make_or(std::vector<QueryAst> children) -> QueryAst { return make_nary(NodeKind::or_, std::move(children)); }

auto make_not(QueryAst child) -> QueryAst {
    auto n = node(NodeKind::not_);
    n->children.push_back(std::move(child));
    return n;
}

auto make_term(std::string text) -> QueryAst {
    auto n = node(NodeKind::term);
    n->text = std::move(text);
    return n;
}

auto make_phrase(std::string text) -> QueryAst {
    auto n = node(NodeKind::phrase);
    n->text = std::move(text);
    return n;
}

auto make_field_match(std::string field, std::string pattern, bool quoted) -> QueryAst {
    auto n = node(NodeKind::field_match);
    n->field = std::move(field);
    n->text = std::move(pattern);
    n->quoted = quoted;
    return n;
}

auto make_range(std::string field, std::optional<std::string> lo, std::optional<std::string> hi, bool lo_inclusive,
                bool hi_inclusive) -> QueryAst {
    auto n = node(NodeKind::range);
    n->field = std::move(field);
    n->lo = std::move(lo);
    n->hi = std::move(hi);
    n->lo_inclusive = lo_inclusive;
    n->hi_inclusive = hi_inclusive;
    return n;
}

QueryParseError::QueryParseError(std::size_t position, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorCode::parse_error, "parse error at position " + std::to_string(position) + ": expected " +
                                        text::join(expected, " or ") + ", found " + found),
      position_(position),
      expected_(std::move(expected)) {}

auto parse_query(std::string_view q) -> QueryAst { return Parser(q).parse(); }

auto print_query(const QueryAst& ast) -> std::string {
    switch (ast->kind) {
        case NodeKind::match_all: return "";
        case NodeKind::term: return escape_word(ast->text, false);
        case NodeKind::phrase: return quote(ast->text);
        case NodeKind::field_match:
            return escape_word(ast->field, false) + ":" +
                   (ast->quoted || ast->text.empty() ? quote(ast->text) : escape_word(ast->text, true));
        case NodeKind::range:
            return escape_word(ast->field, false) + ":" + (ast->lo_inclusive ? "[" : "{") + print_bound(ast->lo) +
                   " TO " + print_bound(ast->hi) + (ast->hi_inclusive ? "]" : "}");
        case NodeKind::not_: return "NOT " + print_child(ast->children.front());
        case NodeKind::and_:
        case NodeKind::or_: {
            std::vector<std::string> parts;
            for (const auto& c : ast->children) parts.push_back(print_child(c));
            return text::join(parts, ast->kind == NodeKind::and_ ? " AND " : " OR ");
        }
    }
    return "";
}

auto has_wildcards(std::string_view pattern) -> bool {
    return pattern.find_first_of("*?") != std::string_view::npos;
}

auto literal_prefix(std::string_view pattern) -> std::string {
    std::string out;
    for (const char c : pattern) {
        if (c == '*' || c == '?') break;
        out.push_back(lower_ascii(c));
    }
    return out;
}

auto wildcard_match(std::string_view pattern, std::string_view value) -> bool {
    // iterative matcher with single-star backtracking, O(|p|*|v|) worst case
    std::size_t p = 0;
    std::size_t v = 0;
    std::size_t star = std::string_view::npos;
    std::size_t mark = 0;
    while (v < value.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || lower_ascii(pattern[p]) == lower_ascii(value[v]))) {
            ++p;
            ++v;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = v;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            v = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

}  // namespace curator::index
