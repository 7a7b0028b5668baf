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

#include <string>
#include <string_view>

#include "polyhub/error.hpp"
#include "polyhub/query/ast.hpp"

namespace polyhub::query {

/// Parse failure; position() is the 1-based character column of the
/// offending token (one past the end of input for premature EOF).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(Errc::parse_error, what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Grammar (keywords case-insensitive, identifiers [A-Za-z_][A-Za-z0-9_]*):
///
///   query := TAG '(' inner ')'                     TAG in {REL, KV, ARR}
///   REL   := SELECT ('*' | ident (',' ident)*)
///            FROM (ident | CAST '(' query ',' TAG ')')
///            [WHERE cmp (AND cmp)*] [LIMIT uint]
///   KV    := SCAN ident [ROWS key ':' key] [COLS ident (',' ident)*]
///   ARR   := SUB ident '[' uint ':' uint (',' uint ':' uint)* ']'
///   cmp   := ident ('=' | '!=' | '<' | '<=' | '>' | '>=') literal
///   literal := number | 'text' | "text"          (quote doubled to escape)
///   key   := ident | uint | 'text' | "text"
QueryAst parse(std::string_view text);

/// Canonical text form; parse(render(ast)) == ast.
std::string render(const QueryAst& ast);

/// Whitespace runs collapsed to one space, trimmed, lower-cased.
std::string normalize(std::string_view text);
/// 64-bit FNV-1a of normalize(text), as 16 lowercase hex digits.
std::string signature(std::string_view text);

} // namespace polyhub::query
