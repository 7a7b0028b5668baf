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

#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace polyhub::engines {

using AuthSet = std::set<std::string, std::less<>>;

/// Boolean label over authorization tokens attached to a key-value cell.
///
/// Grammar (whitespace ignored between tokens):
///   expr   := term ('|' term)*
///   term   := factor ('&' factor)*
///   factor := TOKEN | '(' expr ')'
///   TOKEN  := [A-Za-z0-9_]+
/// The empty string is valid and is visible to every principal.
class VisibilityExpr {
public:
    enum class Kind { token, all_of, any_of };

    struct Node {
        Kind kind = Kind::token;
        std::string token;
        std::vector<Node> children;
    };

    VisibilityExpr() = default;

    /// Throws Errc::visibility_syntax with the offending position.
    static VisibilityExpr parse(std::string_view source);

    bool empty() const noexcept { return !root_; }
    bool evaluate(const AuthSet& auths) const;
    /// Canonical text: fully parenthesised nested groups, no whitespace.
    std::string render() const;
    /// Tokens mentioned anywhere in the expression.
    AuthSet tokens() const;
    const Node* root() const noexcept { return root_.get(); }

private:
    std::shared_ptr<const Node> root_;
};

/// Parse-and-evaluate convenience used by scans.
bool visibility_eval(const VisibilityExpr& expr, const AuthSet& auths);

bool is_visibility_token(std::string_view token) noexcept;

} // namespace polyhub::engines
