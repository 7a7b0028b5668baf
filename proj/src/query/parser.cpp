// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

#include "polyhub/query/parser.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "polyhub/text.hpp"

namespace polyhub::query {

namespace {

constexpr std::array keywords{"SELECT", "FROM", "WHERE", "AND", "LIMIT", "CAST", "SCAN",
                              "ROWS",   "COLS", "SUB",   "REL", "KV",    "ARR"};

bool is_keyword(std::string_view upper)
{
    for (auto k : keywords)
        if (upper == k) return true;
    return false;
}

enum class Tok { ident, keyword, number, string, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text; // keyword: upper-cased; string: decoded contents
    std::size_t pos = 0; // 1-based
};

std::string describe(const Token& t)
{
    switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::string: return "string '" + t.text + "'";
    default: return "'" + t.text + "'";
    }
}

std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto at = [&](std::size_t k) { return k < src.size() ? src[k] : '\0'; };
    auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i + 1;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            auto start = i;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            std::string word(src.substr(start, i - start));
            auto upper = text::to_upper(word);
            if (is_keyword(upper)) {
                t.kind = Tok::keyword;
                t.text = upper;
            } else {
                t.kind = Tok::ident;
                t.text = std::move(word);
            }
        } else if (digit(c) || (c == '-' && (digit(at(i + 1)) || (at(i + 1) == '.' && digit(at(i + 2)))))
                   || (c == '.' && digit(at(i + 1)))) {
            auto start = i;
            if (c == '-') ++i;
            while (digit(at(i))) ++i;
            if (at(i) == '.') {
                ++i;
                while (digit(at(i))) ++i;
            }
            if ((at(i) == 'e' || at(i) == 'E')
                && (digit(at(i + 1)) || ((at(i + 1) == '+' || at(i + 1) == '-') && digit(at(i + 2))))) {
                i += 2;
                while (digit(at(i))) ++i;
            }
            t.kind = Tok::number;
            t.text = std::string(src.substr(start, i - start));
        } else if (c == '\'' || c == '"') {
            char quote = c;
            ++i;
            std::string value;
            while (true) {
                if (i >= src.size()) throw ParseError("unterminated string literal", t.pos);
                if (src[i] == quote) {
                    if (at(i + 1) == quote) {
                        value += quote;
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                value += src[i++];
            }
            t.kind = Tok::string;
            t.text = std::move(value);
        } else {
            t.kind = Tok::punct;
            if ((c == '!' || c == '<' || c == '>') && at(i + 1) == '=') {
                t.text = std::string(src.substr(i, 2));
                i += 2;
            } else if (std::string_view("(),*[]:=<>").find(c) != std::string_view::npos) {
                t.text = std::string(1, c);
                ++i;
            } else {
                throw ParseError("unexpected character '" + std::string(1, c) + "'", t.pos);
            }
        }
        out.push_back(std::move(t));
    }
    out.push_back(Token{Tok::end, "", src.size() + 1});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    QueryAst parse_top()
    {
        auto ast = parse_query();
        if (peek().kind != Tok::end) fail("unexpected " + describe(peek()) + " after query");
        return ast;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, peek().pos); }

    bool at_keyword(std::string_view kw) const { return peek().kind == Tok::keyword && peek().text == kw; }
    bool at_punct(std::string_view p) const { return peek().kind == Tok::punct && peek().text == p; }

    void expect_keyword(std::string_view kw)
    {
        if (!at_keyword(kw)) fail("expected " + std::string(kw) + ", got " + describe(peek()));
        next();
    }

    void expect_punct(std::string_view p, std::string_view context)
    {
        if (!at_punct(p)) fail("expected '" + std::string(p) + "' " + std::string(context) + ", got " + describe(peek()));
        next();
    }

    std::string expect_ident(std::string_view context)
    {
        if (peek().kind != Tok::ident) {
            if (at_keyword("CAST")) fail("CAST is only allowed as a REL source");
            fail("expected identifier " + std::string(context));
        }
        return next().text;
    }

    std::uint64_t expect_uint(std::string_view context)
    {
        if (peek().kind != Tok::number) fail("expected unsigned integer " + std::string(context));
        auto v = text::parse_int64(peek().text);
        if (!v || *v < 0) fail("expected unsigned integer " + std::string(context) + ", got " + describe(peek()));
        next();
        return static_cast<std::uint64_t>(*v);
    }

    IslandTag parse_tag()
    {
        const auto& t = peek();
        if (t.kind == Tok::keyword) {
            if (t.text == "REL") return next(), IslandTag::REL;
            if (t.text == "KV") return next(), IslandTag::KV;
            if (t.text == "ARR") return next(), IslandTag::ARR;
            if (t.text == "CAST") fail("CAST is only allowed as a REL source");
        }
        if (t.kind == Tok::ident) fail("unknown island tag '" + t.text + "'");
        fail("expected island tag, got " + describe(t));
    }

    QueryAst parse_query()
    {
        auto tag = parse_tag();
        expect_punct("(", "after island tag");
        ScopedExpr expr{tag, SelectNode{}};
        switch (tag) {
        case IslandTag::REL: expr.query = parse_select(); break;
        case IslandTag::KV: expr.query = parse_scan(); break;
        case IslandTag::ARR: expr.query = parse_sub(); break;
        }
        expect_punct(")", "to close " + std::string(islands::to_string(tag)) + " scope");
        return expr;
    }

    SelectNode parse_select()
    {
        expect_keyword("SELECT");
        SelectNode node;
        if (at_punct("*")) {
            next();
        } else {
            node.columns.push_back(expect_ident("in SELECT list"));
            while (at_punct(",")) {
                next();
                node.columns.push_back(expect_ident("in SELECT list"));
            }
        }
        expect_keyword("FROM");
        if (at_keyword("CAST")) {
            next();
            expect_punct("(", "after CAST");
            auto inner = parse_query();
            expect_punct(",", "in CAST");
            auto target = parse_tag();
            expect_punct(")", "to close CAST");
            node.source = CastExpr{std::move(inner), target};
        } else {
            node.source = expect_ident("after FROM");
        }
        if (at_keyword("WHERE")) {
            next();
            node.where.push_back(parse_comparison());
            while (at_keyword("AND")) {
                next();
                node.where.push_back(parse_comparison());
            }
        }
        if (at_keyword("LIMIT")) {
            next();
            node.limit = static_cast<std::size_t>(expect_uint("after LIMIT"));
        }
        return node;
    }

    engines::Comparison parse_comparison()
    {
        engines::Comparison cmp;
        cmp.column = expect_ident("in WHERE");
        if (peek().kind != Tok::punct) fail("expected comparison operator, got " + describe(peek()));
        auto op = engines::compare_op_from_string(peek().text);
        if (!op) fail("expected comparison operator, got " + describe(peek()));
        next();
        cmp.op = *op;
        const auto& lit = peek();
        if (lit.kind == Tok::string) {
            cmp.literal = lit.text;
        } else if (lit.kind == Tok::number) {
            if (lit.text.find_first_of(".eE") == std::string::npos) {
                auto v = text::parse_int64(lit.text);
                if (!v) fail("integer literal out of range");
                cmp.literal = *v;
            } else {
                auto v = text::parse_double(lit.text);
                if (!v) fail("bad numeric literal " + describe(lit));
                cmp.literal = *v;
            }
        } else {
            fail("expected literal, got " + describe(lit));
        }
        next();
        return cmp;
    }

    std::string parse_key()
    {
        const auto& t = peek();
        if (t.kind == Tok::ident || t.kind == Tok::string || t.kind == Tok::number) return next().text;
        fail("expected row key, got " + describe(t));
    }

    ScanNode parse_scan()
    {
        expect_keyword("SCAN");
        ScanNode node;
        node.table = expect_ident("after SCAN");
        if (at_keyword("ROWS")) {
            next();
            engines::RowRange range;
            range.start = parse_key();
            expect_punct(":", "in ROWS range");
            range.end = parse_key();
            node.rows = std::move(range);
        }
        if (at_keyword("COLS")) {
            next();
            std::vector<std::string> cols{expect_ident("after COLS")};
            while (at_punct(",")) {
                next();
                cols.push_back(expect_ident("in COLS list"));
            }
            node.columns = std::move(cols);
        }
        return node;
    }

    SubNode parse_sub()
    {
        expect_keyword("SUB");
        SubNode node;
        node.array = expect_ident("after SUB");
        expect_punct("[", "after array name");
        while (true) {
            engines::IndexRange r;
            r.lo = expect_uint("as range start");
            expect_punct(":", "in range");
            r.hi = expect_uint("as range end");
            node.ranges.push_back(r);
            if (!at_punct(",")) break;
            next();
        }
        expect_punct("]", "to close ranges");
        return node;
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

std::string quote(std::string_view s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

std::string render_literal(const engines::Scalar& v)
{
    if (auto* s = std::get_if<std::string>(&v)) return quote(*s);
    if (auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    auto out = text::format_double(std::get<double>(v));
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
}

std::string render_key(const std::string& key)
{
    bool digits = !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) { return std::isdigit(c); });
    if (digits || (text::is_identifier(key) && !is_keyword(text::to_upper(key)))) return key;
    return quote(key);
}

void render_into(const ScopedExpr& expr, std::string& out)
{
    out += islands::to_string(expr.tag);
    out += '(';
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SelectNode>) {
                out += "SELECT ";
                out += node.columns.empty() ? std::string("*") : text::join(node.columns, ", ");
                out += " FROM ";
                if (auto* table = std::get_if<std::string>(&node.source)) {
                    out += *table;
                } else {
                    const auto& cast = std::get<CastExpr>(node.source);
                    out += "CAST(";
                    render_into(*cast.inner, out);
                    out += ", ";
                    out += islands::to_string(cast.target);
                    out += ')';
                }
                for (std::size_t i = 0; i < node.where.size(); ++i) {
                    const auto& c = node.where[i];
                    out += i == 0 ? " WHERE " : " AND ";
                    out += c.column + " " + std::string(engines::to_string(c.op)) + " " + render_literal(c.literal);
                }
                if (node.limit) out += " LIMIT " + std::to_string(*node.limit);
            } else if constexpr (std::is_same_v<T, ScanNode>) {
                out += "SCAN " + node.table;
                if (node.rows) out += " ROWS " + render_key(node.rows->start) + ":" + render_key(node.rows->end);
                if (node.columns) out += " COLS " + text::join(*node.columns, ", ");
            } else {
                out += "SUB " + node.array + "[";
                for (std::size_t i = 0; i < node.ranges.size(); ++i) {
                    if (i) out += ", ";
                    out += std::to_string(node.ranges[i].lo) + ":" + std::to_string(node.ranges[i].hi);
                }
                out += "]";
            }
        },
        expr.query);
    out += ')';
}

} // namespace

QueryAst parse(std::string_view text)
{
    return Parser(lex(text)).parse_top();
}

std::string render(const QueryAst& ast)
{
    std::string out;
    render_into(ast, out);
    return out;
}

std::string normalize(std::string_view text)
{
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string signature(std::string_view text)
{
    std::uint64_t hash = 14695981039346656037ull;
    for (char c : normalize(text)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::vector<ObjectRef> referenced_objects(const QueryAst& ast)
{
    std::vector<ObjectRef> out;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SelectNode>) {
                if (auto* table = std::get_if<std::string>(&node.source)) {
                    out.push_back({ast.tag, *table});
                } else {
                    auto inner = referenced_objects(*std::get<CastExpr>(node.source).inner);
                    out.insert(out.end(), inner.begin(), inner.end());
                }
            } else if constexpr (std::is_same_v<T, ScanNode>) {
                out.push_back({ast.tag, node.table});
            } else {
                out.push_back({ast.tag, node.array});
            }
        },
        ast.query);
    return out;
}

std::vector<IslandTag> scoped_islands(const QueryAst& ast)
{
    std::vector<IslandTag> out{ast.tag};
    if (auto* select = std::get_if<SelectNode>(&ast.query)) {
        if (auto* cast = std::get_if<CastExpr>(&select->source)) {
            auto inner = scoped_islands(*cast->inner);
            out.insert(out.end(), inner.begin(), inner.end());
        }
    }
    return out;
}

} // namespace polyhub::query
