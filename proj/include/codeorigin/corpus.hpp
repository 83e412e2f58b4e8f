#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace codeorigin::corpus {

/// 0 = human-written, 1 = machine-generated.
enum class Label : std::uint8_t { human = 0, machine = 1 };

struct LabeledSnippet {
    std::string id;
    std::string code;
    Label label = Label::human;
    std::optional<std::string> language;
    std::optional<std::string> generator;
};

using Dataset = std::vector<LabeledSnippet>;

struct LoadOptions {
    /// When false, records without a `label` field are accepted and given
    /// Label::human; used when scoring unlabeled input.
    bool require_label = true;
};

/// Reads a JSON-Lines corpus. Whitespace-only lines are skipped. Any bad
/// record aborts the whole load with an Error naming its line number.
Dataset load_jsonl(const std::filesystem::path& path, const LoadOptions& options = {});

/// Same as load_jsonl, for in-memory text. `source` names the input in errors.
Dataset parse_jsonl(const std::string& text, const std::string& source = "<memory>",
                    const LoadOptions& options = {});

struct ClassBalance {
    std::size_t human = 0;
    std::size_t machine = 0;
};

ClassBalance class_balance(const Dataset& data);

/// Indices into the dataset the split was drawn from, both in input order.
struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::uint64_t seed = 0;
    double val_ratio = 0.0;
};

/// Per-class validation size: round-half-to-even of count * val_ratio,
/// raised to 1 when the class has at least two samples.
std::size_t validation_quota(std::size_t class_count, double val_ratio);

/// Class-stratified split. Shuffling within each class is driven by `seed`.
DatasetSplit stratified_split(const Dataset& data, double val_ratio, std::uint64_t seed);

Dataset select(const Dataset& data, const std::vector<std::size_t>& indices);

/// Manifest JSON: {"seed", "val_ratio", "train": [ids], "validation": [ids]}.
std::string manifest_json(const Dataset& data, const DatasetSplit& split);

/// Rebuilds a split from manifest text against `data`. Every listed id must
/// exist in `data`.
DatasetSplit split_from_manifest(const Dataset& data, const std::string& manifest_text);

} // namespace codeorigin::corpus
