#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codeorigin::stylometry {

enum class TokenKind {
    identifier,
    keyword,
    number,
    string,
    comment,
    punctuation,
    newline,
    indent_space,
    indent_tab,
};

const char* to_string(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t line; // 1-based line the token starts on
};

/// Which comment syntaxes the lexer recognises.
struct CommentRules {
    bool hash = true;     // `#` to end of line; triple-quoted strings
    bool c_family = true; // `//`, `/* */`; `#word` preprocessor directives
};

/// `#` for python/shell-like tags, `//` and `/* */` for C-family tags, both
/// for anything else (including no tag).
CommentRules comment_rules_for(const std::optional<std::string>& language);

struct TokenStream {
    std::vector<Token> tokens;
    /// Unterminated strings and block comments seen; each still yields a
    /// token running to end of input.
    std::size_t lexer_warnings = 0;
};

/// Lightweight multi-language lexer. Never fails: malformed input degrades to
/// warnings. Whitespace other than line-leading indentation is skipped, so
/// the token texts cover every non-whitespace byte exactly once.
TokenStream tokenize(std::string_view code, const std::optional<std::string>& language = std::nullopt);

/// Union of Python, C/C++, Java/JavaScript and Go reserved words.
bool is_keyword(std::string_view word);

} // namespace codeorigin::stylometry
