#include "codeorigin/stylometry.hpp"

#include "codeorigin/format.hpp"
#include "codeorigin/parallel.hpp"
#include "codeorigin/tokenizer.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <unordered_set>

#include <json.hpp>

namespace codeorigin::stylometry {

namespace {

constexpr std::array<FeatureInfo, kFeatureCount> kSchema = {{
    {"line_count", FeatureKind::count},
    {"char_count", FeatureKind::count},
    {"avg_line_length", FeatureKind::real},
    {"blank_line_ratio", FeatureKind::ratio},
    {"comment_line_ratio", FeatureKind::ratio},
    {"has_docstring", FeatureKind::flag},
    {"avg_leading_spaces", FeatureKind::real},
    {"avg_leading_tabs", FeatureKind::real},
    {"identifier_count", FeatureKind::count},
    {"avg_identifier_length", FeatureKind::real},
    {"snake_case_ratio", FeatureKind::ratio},
    {"camel_case_ratio", FeatureKind::ratio},
    {"identifier_entropy", FeatureKind::real},
    {"identifier_uniqueness", FeatureKind::ratio},
    {"est_ast_depth", FeatureKind::count},
    {"loop_count", FeatureKind::count},
    {"conditional_count", FeatureKind::count},
    {"import_count", FeatureKind::count},
    {"comprehension_count", FeatureKind::count},
    {"cyclomatic_complexity", FeatureKind::count},
}};

struct LineStats {
    std::size_t length = 0; // code points, newline excluded
    bool blank = true;
    std::size_t leading_spaces = 0;
    std::size_t leading_tabs = 0;
};

std::vector<LineStats> scan_lines(std::string_view code)
{
    std::vector<LineStats> lines;
    std::size_t begin = 0;
    while (begin < code.size()) {
        std::size_t end = code.find('\n', begin);
        if (end == std::string_view::npos)
            end = code.size();
        const auto text = code.substr(begin, end - begin);

        LineStats stats;
        bool in_indent = true;
        for (char ch : text) {
            const auto c = static_cast<unsigned char>(ch);
            if ((c & 0xC0) != 0x80)
                ++stats.length;
            if (in_indent && c == ' ') {
                ++stats.leading_spaces;
            } else if (in_indent && c == '\t') {
                ++stats.leading_tabs;
            } else {
                in_indent = false;
            }
            if (c != ' ' && c != '\t' && c != '\r' && c != '\f' && c != '\v')
                stats.blank = false;
        }
        lines.push_back(stats);
        begin = end + 1;
    }
    return lines;
}

bool is_snake_case(std::string_view id)
{
    auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    for (std::size_t i = 1; i + 1 < id.size(); ++i)
        if (id[i] == '_' && alnum(id[i - 1]) && alnum(id[i + 1]))
            return true;
    return false;
}

bool is_camel_case(std::string_view id)
{
    for (std::size_t i = 1; i < id.size(); ++i)
        if (std::islower(static_cast<unsigned char>(id[i - 1])) && std::isupper(static_cast<unsigned char>(id[i])))
            return true;
    return false;
}

bool is_opener(std::string_view t) { return t == "(" || t == "[" || t == "{"; }
bool is_closer(std::string_view t) { return t == ")" || t == "]" || t == "}"; }

bool is_layout(TokenKind k)
{
    return k == TokenKind::newline || k == TokenKind::indent_space || k == TokenKind::indent_tab;
}

bool is_significant(TokenKind k) { return !is_layout(k) && k != TokenKind::comment; }

bool is_triple_quoted(std::string_view text)
{
    const auto quote = text.find_first_of("\"'");
    if (quote == std::string_view::npos || text.size() < quote + 3)
        return false;
    return text[quote + 1] == text[quote] && text[quote + 2] == text[quote];
}

} // namespace

const char* to_string(FeatureKind kind)
{
    switch (kind) {
    case FeatureKind::count: return "count";
    case FeatureKind::ratio: return "ratio";
    case FeatureKind::flag: return "flag";
    case FeatureKind::real: return "real";
    }
    return "real";
}

std::span<const FeatureInfo, kFeatureCount> feature_schema()
{
    return kSchema;
}

std::string feature_schema_json()
{
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        features.push_back({{"name", kSchema[i].name}, {"index", i}, {"kind", to_string(kSchema[i].kind)}});
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["features"] = std::move(features);
    return doc.dump(2) + "\n";
}

FeatureVector extract_features(std::string_view code, const std::optional<std::string>& language)
{
    FeatureVector fv;
    auto& v = fv.values;

    // Surface statistics from the raw lines.
    const auto lines = scan_lines(code);
    std::size_t chars = 0;
    std::size_t content_chars = 0;
    std::size_t blank = 0;
    std::size_t spaces = 0;
    std::size_t tabs = 0;
    for (const auto& line : lines) {
        content_chars += line.length;
        if (line.blank) {
            ++blank;
        } else {
            spaces += line.leading_spaces;
            tabs += line.leading_tabs;
        }
    }
    for (char ch : code)
        if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80)
            ++chars;

    const auto n_lines = static_cast<double>(lines.size());
    const std::size_t non_blank = lines.size() - blank;
    v[line_count] = n_lines;
    v[char_count] = static_cast<double>(chars);
    v[avg_line_length] = lines.empty() ? 0.0 : static_cast<double>(content_chars) / n_lines;
    v[blank_line_ratio] = lines.empty() ? 0.0 : static_cast<double>(blank) / n_lines;
    v[avg_leading_spaces] = non_blank == 0 ? 0.0 : static_cast<double>(spaces) / static_cast<double>(non_blank);
    v[avg_leading_tabs] = non_blank == 0 ? 0.0 : static_cast<double>(tabs) / static_cast<double>(non_blank);

    const auto stream = tokenize(code, language);
    const auto& tokens = stream.tokens;

    // Per-line first and last code tokens (token lines are 1-based).
    const std::size_t line_slots = lines.size() + 2;
    std::vector<const Token*> first_on_line(line_slots, nullptr);
    std::vector<const Token*> last_code_on_line(line_slots, nullptr);
    for (const auto& tok : tokens) {
        if (is_layout(tok.kind) || tok.line >= line_slots)
            continue;
        if (!first_on_line[tok.line])
            first_on_line[tok.line] = &tok;
        if (tok.kind != TokenKind::comment)
            last_code_on_line[tok.line] = &tok;
    }

    std::size_t comment_lines = 0;
    std::size_t imports = 0;
    for (std::size_t ln = 1; ln <= lines.size(); ++ln) {
        const Token* first = first_on_line[ln];
        if (!first)
            continue;
        if (first->kind == TokenKind::comment)
            ++comment_lines;
        const auto& t = first->text;
        if (t == "import" || t == "from" || t == "#include" || t == "use" || t == "using")
            ++imports;
    }
    v[comment_line_ratio] = lines.empty() ? 0.0 : static_cast<double>(comment_lines) / n_lines;
    v[import_count] = static_cast<double>(imports);

    auto block_indent = [&](std::size_t ln) -> std::size_t {
        if (ln == 0 || ln > lines.size())
            return 0;
        const Token* last = last_code_on_line[ln];
        if (!last || last->kind != TokenKind::punctuation || last->text != ":")
            return 0;
        return (lines[ln - 1].leading_spaces + 4 * lines[ln - 1].leading_tabs) / 4;
    };

    std::map<std::string, std::size_t> identifier_freq;
    std::size_t identifiers = 0;
    std::size_t identifier_chars = 0;
    std::size_t snake = 0;
    std::size_t camel = 0;
    std::size_t loops = 0;
    std::size_t conditionals = 0;
    std::size_t decisions = 0;
    std::size_t comprehensions = 0;
    std::size_t max_depth = 0;
    std::vector<std::string_view> brackets;

    // Docstring tracking: a def/class header whose `:` has been reached at
    // bracket depth 0 makes the next code token a docstring candidate.
    bool docstring = false;
    bool in_header = false;
    bool expect_docstring = false;
    bool first_code_token = true;

    for (const auto& tok : tokens) {
        if (!is_significant(tok.kind))
            continue;
        const std::string_view text = tok.text;

        if (first_code_token || expect_docstring) {
            if (tok.kind == TokenKind::string && is_triple_quoted(text))
                docstring = true;
            first_code_token = false;
            expect_docstring = false;
        }

        std::size_t enclosing = brackets.size();
        if (tok.kind == TokenKind::punctuation && is_closer(text) && !brackets.empty()) {
            brackets.pop_back();
            enclosing = brackets.size();
        }
        max_depth = std::max(max_depth, enclosing + block_indent(tok.line));

        switch (tok.kind) {
        case TokenKind::identifier: {
            ++identifiers;
            identifier_chars += text.size();
            if (is_snake_case(text))
                ++snake;
            if (is_camel_case(text))
                ++camel;
            ++identifier_freq[tok.text];
            break;
        }
        case TokenKind::keyword: {
            if (text == "for" || text == "while" || text == "do")
                ++loops;
            if (text == "if" || text == "elif" || text == "switch" || text == "case")
                ++conditionals;
            if (text == "if" || text == "elif" || text == "for" || text == "while" || text == "case" ||
                text == "catch" || text == "except" || text == "and" || text == "or")
                ++decisions;
            if (text == "for" && !brackets.empty()) {
                const bool leads_line = first_on_line[tok.line] == &tok;
                if (brackets.back() != "{" || !leads_line)
                    ++comprehensions;
            }
            if ((text == "def" || text == "class") && brackets.empty())
                in_header = true;
            break;
        }
        case TokenKind::punctuation: {
            if (text == "?") {
                ++conditionals;
                ++decisions;
            } else if (text == "&&" || text == "||") {
                ++decisions;
            } else if (text == ":" && in_header && brackets.empty()) {
                in_header = false;
                expect_docstring = true;
            }
            if (is_opener(text))
                brackets.push_back(text);
            break;
        }
        default:
            break;
        }
    }

    v[has_docstring] = docstring ? 1.0 : 0.0;
    v[identifier_count] = static_cast<double>(identifiers);
    if (identifiers > 0) {
        const auto n = static_cast<double>(identifiers);
        v[avg_identifier_length] = static_cast<double>(identifier_chars) / n;
        v[snake_case_ratio] = static_cast<double>(snake) / n;
        v[camel_case_ratio] = static_cast<double>(camel) / n;
        double entropy = 0.0;
        for (const auto& [name, count] : identifier_freq) {
            const double p = static_cast<double>(count) / n;
            entropy -= p * std::log2(p);
        }
        v[identifier_entropy] = entropy == 0.0 ? 0.0 : entropy; // no -0
        v[identifier_uniqueness] = static_cast<double>(identifier_freq.size()) / n;
    }
    v[est_ast_depth] = static_cast<double>(max_depth);
    v[loop_count] = static_cast<double>(loops);
    v[conditional_count] = static_cast<double>(conditionals);
    v[comprehension_count] = static_cast<double>(comprehensions);
    v[cyclomatic_complexity] = 1.0 + static_cast<double>(decisions);
    return fv;
}

FeatureMatrix featurize_corpus(const corpus::Dataset& data)
{
    FeatureMatrix out{Matrix(data.size(), kFeatureCount), std::vector<int>(data.size(), 0)};
    parallel_for(data.size(), [&](std::size_t i) {
        const auto fv = extract_features(data[i].code, data[i].language);
        auto row = out.features.row(i);
        std::copy(fv.values.begin(), fv.values.end(), row.begin());
        out.labels[i] = static_cast<int>(data[i].label);
    });
    return out;
}

std::string feature_csv(const FeatureMatrix& matrix)
{
    std::string out;
    for (const auto& info : kSchema) {
        out += info.name;
        out += ',';
    }
    out += "label\n";
    for (std::size_t r = 0; r < matrix.features.rows(); ++r) {
        for (double value : matrix.features.row(r)) {
            out += format_double(value);
            out += ',';
        }
        out += std::to_string(matrix.labels[r]);
        out += '\n';
    }
    return out;
}

} // namespace codeorigin::stylometry
