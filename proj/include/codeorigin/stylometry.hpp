#pragma once

#include "codeorigin/corpus.hpp"
#include "codeorigin/matrix.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codeorigin::stylometry {

inline constexpr std::size_t kFeatureCount = 20;

/// Bumped whenever the definition of any feature changes.
inline constexpr std::string_view kSchemaVersion = "stylometry-v1";

enum class FeatureKind { count, ratio, flag, real };

const char* to_string(FeatureKind kind);

struct FeatureInfo {
    std::string_view name;
    FeatureKind kind;
};

/// Feature indices, in vector order.
enum Feature : std::size_t {
    line_count,
    char_count,
    avg_line_length,
    blank_line_ratio,
    comment_line_ratio,
    has_docstring,
    avg_leading_spaces,
    avg_leading_tabs,
    identifier_count,
    avg_identifier_length,
    snake_case_ratio,
    camel_case_ratio,
    identifier_entropy,
    identifier_uniqueness,
    est_ast_depth,
    loop_count,
    conditional_count,
    import_count,
    comprehension_count,
    cyclomatic_complexity,
};

std::span<const FeatureInfo, kFeatureCount> feature_schema();

/// [{"name", "index", "kind"}, ...] plus the schema version.
std::string feature_schema_json();

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::string schema_version{kSchemaVersion};

    double operator[](Feature f) const { return values[f]; }
};

/// Handcrafted style and structure metrics of one snippet.
///
/// Lines are the `\n`-separated pieces of the text, not counting the empty
/// piece after a trailing newline. Character counts are in code points.
/// Leading whitespace is the run of spaces and tabs opening a line.
/// est_ast_depth is the largest, over all tokens, of the number of enclosing
/// brackets plus floor(indent / 4) when the token's line opens an indented
/// block (its last code token is `:`); a tab counts as 4 columns.
/// Empty input yields zeros except cyclomatic_complexity = 1.
FeatureVector extract_features(std::string_view code, const std::optional<std::string>& language = std::nullopt);

struct FeatureMatrix {
    Matrix features;            // n x kFeatureCount
    std::vector<int> labels;    // 0/1 per row
};

/// Row i is extract_features(data[i]); rows are computed in parallel.
FeatureMatrix featurize_corpus(const corpus::Dataset& data);

/// Header = feature names + `label`; doubles printed with round-trip precision.
std::string feature_csv(const FeatureMatrix& matrix);

} // namespace codeorigin::stylometry
