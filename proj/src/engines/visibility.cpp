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

#include "polyhub/engines/visibility.hpp"

#include <algorithm>
#include <cctype>

#include "polyhub/error.hpp"

namespace polyhub::engines {

namespace {

bool token_char(char c)
{
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_';
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    VisibilityExpr::Node parse_all()
    {
        auto node = parse_or();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return node;
    }

private:
    using Node = VisibilityExpr::Node;

    Node parse_or()
    {
        Node first = parse_and();
        if (!peek('|')) return first;
        Node node{VisibilityExpr::Kind::any_of, {}, {}};
        node.children.push_back(std::move(first));
        while (peek('|')) {
            ++pos_;
            node.children.push_back(parse_and());
        }
        return node;
    }

    Node parse_and()
    {
        Node first = parse_factor();
        if (!peek('&')) return first;
        Node node{VisibilityExpr::Kind::all_of, {}, {}};
        node.children.push_back(std::move(first));
        while (peek('&')) {
            ++pos_;
            node.children.push_back(parse_factor());
        }
        return node;
    }

    Node parse_factor()
    {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        if (src_[pos_] == '(') {
            ++pos_;
            Node inner = parse_or();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return inner;
        }
        auto start = pos_;
        while (pos_ < src_.size() && token_char(src_[pos_])) ++pos_;
        if (start == pos_) fail("expected token");
        return Node{VisibilityExpr::Kind::token, std::string(src_.substr(start, pos_ - start)), {}};
    }

    bool peek(char c)
    {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(Errc::visibility_syntax, "visibility '" + std::string(src_) + "': " + what + " at offset "
                                                 + std::to_string(pos_));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

bool eval(const VisibilityExpr::Node& node, const AuthSet& auths)
{
    switch (node.kind) {
    case VisibilityExpr::Kind::token: return auths.contains(node.token);
    case VisibilityExpr::Kind::all_of:
        return std::all_of(node.children.begin(), node.children.end(),
                           [&](const auto& child) { return eval(child, auths); });
    case VisibilityExpr::Kind::any_of:
        return std::any_of(node.children.begin(), node.children.end(),
                           [&](const auto& child) { return eval(child, auths); });
    }
    return false;
}

void render(const VisibilityExpr::Node& node, std::string& out, bool nested)
{
    if (node.kind == VisibilityExpr::Kind::token) {
        out += node.token;
        return;
    }
    if (nested) out += '(';
    char sep = node.kind == VisibilityExpr::Kind::all_of ? '&' : '|';
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += sep;
        render(node.children[i], out, true);
    }
    if (nested) out += ')';
}

void collect(const VisibilityExpr::Node& node, AuthSet& out)
{
    if (node.kind == VisibilityExpr::Kind::token) out.insert(node.token);
    for (const auto& child : node.children) collect(child, out);
}

} // namespace

VisibilityExpr VisibilityExpr::parse(std::string_view source)
{
    VisibilityExpr expr;
    bool blank = std::all_of(source.begin(), source.end(),
                             [](unsigned char c) { return std::isspace(c); });
    if (blank) return expr;
    expr.root_ = std::make_shared<const Node>(Parser(source).parse_all());
    return expr;
}

bool VisibilityExpr::evaluate(const AuthSet& auths) const
{
    return !root_ || eval(*root_, auths);
}

std::string VisibilityExpr::render() const
{
    std::string out;
    if (root_) engines::render(*root_, out, false);
    return out;
}

AuthSet VisibilityExpr::tokens() const
{
    AuthSet out;
    if (root_) collect(*root_, out);
    return out;
}

bool visibility_eval(const VisibilityExpr& expr, const AuthSet& auths)
{
    return expr.evaluate(auths);
}

bool is_visibility_token(std::string_view token) noexcept
{
    return !token.empty() && std::all_of(token.begin(), token.end(), token_char);
}

} // namespace polyhub::engines
