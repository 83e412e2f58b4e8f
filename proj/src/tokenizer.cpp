#include "codeorigin/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace codeorigin::stylometry {

namespace {

const std::unordered_set<std::string_view>& keyword_table()
{
    static const std::unordered_set<std::string_view> table = {
        // Python
        "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class",
        "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global",
        "if", "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return",
        "try", "while", "with", "yield",
        // C / C++
        "auto", "bool", "case", "catch", "char", "const", "constexpr", "default", "delete", "do",
        "double", "enum", "explicit", "extern", "float", "friend", "goto", "inline", "int", "long",
        "namespace", "new", "noexcept", "nullptr", "operator", "private", "protected", "public",
        "register", "short", "signed", "sizeof", "static", "struct", "switch", "template", "this",
        "throw", "typedef", "typename", "union", "unsigned", "using", "virtual", "void", "volatile",
        // Java / JavaScript
        "abstract", "boolean", "byte", "extends", "final", "implements", "instanceof", "interface",
        "let", "native", "package", "super", "synchronized", "throws", "transient", "var",
        "function", "typeof", "undefined", "null", "true", "false", "export",
        // Go
        "chan", "defer", "fallthrough", "func", "go", "map", "range", "select", "type",
        // Rust-style imports
        "use",
    };
    return table;
}

const std::unordered_set<std::string_view>& directive_table()
{
    static const std::unordered_set<std::string_view> table = {
        "include", "define", "undef", "if", "ifdef", "ifndef", "elif", "else", "endif",
        "pragma", "error", "warning", "line", "import",
    };
    return table;
}

// Longest match first within each length class.
constexpr std::array<std::string_view, 4> three_char_ops = {"<<=", ">>=", "...", "**="};
constexpr std::array<std::string_view, 27> two_char_ops = {
    "&&", "||", "==", "!=", "<=", ">=", "->", "=>", "::", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "<<", ">>", "++", "--", "**", "//", ":=", "?.", "??", "<>",
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_quote(char c) { return c == '"' || c == '\'' || c == '`'; }

bool is_string_prefix(std::string_view word)
{
    if (word == "L" || word == "u8")
        return true;
    if (word.empty() || word.size() > 2)
        return false;
    return std::all_of(word.begin(), word.end(), [](char c) {
        const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return lower == 'r' || lower == 'b' || lower == 'f' || lower == 'u';
    });
}

std::size_t utf8_length(unsigned char lead)
{
    if (lead >= 0xF0) return 4;
    if (lead >= 0xE0) return 3;
    if (lead >= 0xC0) return 2;
    return 1;
}

class Lexer {
public:
    Lexer(std::string_view code, CommentRules rules) : src_(code), rules_(rules) {}

    TokenStream run()
    {
        while (pos_ < src_.size()) {
            if (at_line_start_) {
                lex_indent();
                continue;
            }
            const char c = src_[pos_];
            if (c == '\n') {
                emit(TokenKind::newline, pos_, pos_ + 1);
                ++line_;
                at_line_start_ = true;
                line_has_token_ = false;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
                continue;
            }
            if (rules_.c_family && starts_with("//")) {
                lex_line_comment();
            } else if (rules_.c_family && starts_with("/*")) {
                lex_block_comment();
            } else if (c == '#') {
                lex_hash();
            } else if (is_quote(c)) {
                lex_string(pos_);
            } else if (is_ident_start(static_cast<unsigned char>(c))) {
                lex_word();
            } else if (is_digit(static_cast<unsigned char>(c)) ||
                       (c == '.' && pos_ + 1 < src_.size() && is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                lex_number();
            } else {
                lex_punctuation();
            }
        }
        return std::move(out_);
    }

private:
    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void emit(TokenKind kind, std::size_t begin, std::size_t end)
    {
        out_.tokens.push_back(Token{kind, std::string(src_.substr(begin, end - begin)), line_});
        if (kind != TokenKind::newline && kind != TokenKind::indent_space && kind != TokenKind::indent_tab)
            line_has_token_ = true;
        pos_ = end;
    }

    // Token whose text may span lines: line numbers advance past its body.
    void emit_multiline(TokenKind kind, std::size_t begin, std::size_t end)
    {
        const std::size_t start_line = line_;
        emit(kind, begin, end);
        out_.tokens.back().line = start_line;
        line_ += static_cast<std::size_t>(std::count(src_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                     src_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
    }

    void lex_indent()
    {
        at_line_start_ = false;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t') {
                std::size_t end = pos_;
                while (end < src_.size() && src_[end] == c)
                    ++end;
                emit(c == ' ' ? TokenKind::indent_space : TokenKind::indent_tab, pos_, end);
            } else if (c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    void lex_line_comment()
    {
        std::size_t end = src_.find('\n', pos_);
        if (end == std::string_view::npos)
            end = src_.size();
        emit(TokenKind::comment, pos_, end);
    }

    void lex_block_comment()
    {
        std::size_t close = src_.find("*/", pos_ + 2);
        std::size_t end;
        if (close == std::string_view::npos) {
            ++out_.lexer_warnings;
            end = src_.size();
        } else {
            end = close + 2;
        }
        emit_multiline(TokenKind::comment, pos_, end);
    }

    void lex_hash()
    {
        if (rules_.c_family && !line_has_token_) {
            std::size_t word_end = pos_ + 1;
            while (word_end < src_.size() && is_ident_char(static_cast<unsigned char>(src_[word_end])))
                ++word_end;
            const auto word = src_.substr(pos_ + 1, word_end - pos_ - 1);
            if (directive_table().count(word)) {
                emit(TokenKind::keyword, pos_, word_end);
                return;
            }
        }
        if (rules_.hash) {
            lex_line_comment();
            return;
        }
        emit(TokenKind::punctuation, pos_, pos_ + 1);
    }

    void lex_string(std::size_t begin)
    {
        const char quote = src_[pos_];
        std::string_view closer(&src_[pos_], 1);
        if (rules_.hash && quote != '`' && pos_ + 2 < src_.size() && src_[pos_ + 1] == quote &&
            src_[pos_ + 2] == quote)
            closer = src_.substr(pos_, 3);

        std::size_t i = pos_ + closer.size();
        while (i < src_.size()) {
            if (src_[i] == '\\') {
                i += 2;
                continue;
            }
            if (src_.substr(i, closer.size()) == closer) {
                emit_multiline(TokenKind::string, begin, i + closer.size());
                return;
            }
            ++i;
        }
        ++out_.lexer_warnings;
        emit_multiline(TokenKind::string, begin, src_.size());
    }

    void lex_word()
    {
        std::size_t end = pos_;
        while (end < src_.size() && is_ident_char(static_cast<unsigned char>(src_[end])))
            ++end;
        const auto word = src_.substr(pos_, end - pos_);
        if (end < src_.size() && is_quote(src_[end]) && is_string_prefix(word)) {
            const std::size_t begin = pos_;
            pos_ = end;
            lex_string(begin);
            return;
        }
        emit(is_keyword(word) ? TokenKind::keyword : TokenKind::identifier, pos_, end);
    }

    void lex_number()
    {
        std::size_t end = pos_ + 1;
        while (end < src_.size()) {
            const auto c = static_cast<unsigned char>(src_[end]);
            if (is_ident_char(c) || c == '.') {
                ++end;
                continue;
            }
            // exponent sign, decimal literals only
            const char prev = src_[end - 1];
            if ((c == '+' || c == '-') && (prev == 'e' || prev == 'E') &&
                !(src_.size() > pos_ + 1 && src_[pos_] == '0' && (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X'))) {
                ++end;
                continue;
            }
            break;
        }
        emit(TokenKind::number, pos_, end);
    }

    void lex_punctuation()
    {
        for (auto op : three_char_ops)
            if (starts_with(op)) {
                emit(TokenKind::punctuation, pos_, pos_ + 3);
                return;
            }
        for (auto op : two_char_ops)
            if (starts_with(op)) {
                emit(TokenKind::punctuation, pos_, pos_ + 2);
                return;
            }
        const std::size_t len = utf8_length(static_cast<unsigned char>(src_[pos_]));
        emit(TokenKind::punctuation, pos_, std::min(src_.size(), pos_ + len));
    }

    std::string_view src_;
    CommentRules rules_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    bool at_line_start_ = true;
    bool line_has_token_ = false;
    TokenStream out_;
};

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

const char* to_string(TokenKind kind)
{
    switch (kind) {
    case TokenKind::identifier: return "identifier";
    case TokenKind::keyword: return "keyword";
    case TokenKind::number: return "number";
    case TokenKind::string: return "string";
    case TokenKind::comment: return "comment";
    case TokenKind::punctuation: return "punctuation";
    case TokenKind::newline: return "newline";
    case TokenKind::indent_space: return "indent_space";
    case TokenKind::indent_tab: return "indent_tab";
    }
    return "unknown";
}

bool is_keyword(std::string_view word)
{
    return keyword_table().count(word) != 0;
}

CommentRules comment_rules_for(const std::optional<std::string>& language)
{
    if (!language)
        return {};
    static const std::unordered_set<std::string> hash_languages = {
        "python", "py", "python3", "shell", "sh", "bash", "zsh", "ruby", "rb", "perl", "r", "yaml",
        "toml", "makefile", "cmake", "powershell",
    };
    static const std::unordered_set<std::string> c_languages = {
        "c", "cpp", "c++", "cxx", "cc", "h", "hpp", "java", "javascript", "js", "typescript", "ts",
        "go", "golang", "rust", "rs", "c#", "csharp", "cs", "kotlin", "kt", "swift", "scala",
        "dart", "php", "objective-c", "objc",
    };
    const std::string tag = lowercase(*language);
    if (hash_languages.count(tag))
        return {true, false};
    if (c_languages.count(tag))
        return {false, true};
    return {};
}

TokenStream tokenize(std::string_view code, const std::optional<std::string>& language)
{
    return Lexer(code, comment_rules_for(language)).run();
}

} // namespace codeorigin::stylometry
