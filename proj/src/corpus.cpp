#include "codeorigin/corpus.hpp"

#include "codeorigin/error.hpp"
#include "codeorigin/random.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace codeorigin::corpus {

using nlohmann::json;

namespace {

bool is_blank(const std::string& line)
{
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r')
            return false;
    return true;
}

std::string where(const std::string& source, std::size_t line_no)
{
    return source + ":" + std::to_string(line_no);
}

std::optional<std::string> optional_string(const json& record, const char* key,
                                           const std::string& location)
{
    auto it = record.find(key);
    if (it == record.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        fail_input(location + ": field '" + key + "' must be a string");
    return it->get<std::string>();
}

LabeledSnippet parse_record(const std::string& line, const std::string& source,
                            std::size_t line_no, const LoadOptions& options)
{
    const std::string location = where(source, line_no);
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error& e) {
        fail_input(location + ": malformed JSON (" + e.what() + ")");
    }
    if (!record.is_object())
        fail_input(location + ": record is not a JSON object");

    LabeledSnippet snippet;
    if (auto id = optional_string(record, "id", location))
        snippet.id = *id;
    else
        snippet.id = "line-" + std::to_string(line_no);

    auto code = record.find("code");
    if (code == record.end() || code->is_null())
        fail_input(location + ": record '" + snippet.id + "' is missing field 'code'");
    if (!code->is_string())
        fail_input(location + ": record '" + snippet.id + "' has a non-string 'code'");
    snippet.code = code->get<std::string>();
    if (snippet.code.empty())
        fail_input(location + ": record '" + snippet.id + "' has empty code");

    auto label = record.find("label");
    if (label == record.end() || label->is_null()) {
        if (options.require_label)
            fail_input(location + ": record '" + snippet.id + "' is missing field 'label'");
    } else {
        if (!label->is_number_integer())
            fail_input(location + ": record '" + snippet.id + "' label must be the integer 0 or 1");
        const auto value = label->get<std::int64_t>();
        if (value != 0 && value != 1)
            fail_input(location + ": record '" + snippet.id + "' label " + std::to_string(value) +
                       " is outside {0, 1}");
        snippet.label = value == 1 ? Label::machine : Label::human;
    }

    snippet.language = optional_string(record, "language", location);
    snippet.generator = optional_string(record, "generator", location);
    return snippet;
}

} // namespace

Dataset parse_jsonl(const std::string& text, const std::string& source, const LoadOptions& options)
{
    Dataset data;
    std::unordered_map<std::string, std::size_t> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line))
            continue;
        LabeledSnippet snippet = parse_record(line, source, line_no, options);
        auto [it, inserted] = seen.emplace(snippet.id, line_no);
        if (!inserted)
            fail_input(where(source, line_no) + ": duplicate id '" + snippet.id +
                       "' (first seen on line " + std::to_string(it->second) + ")");
        data.push_back(std::move(snippet));
    }
    return data;
}

Dataset load_jsonl(const std::filesystem::path& path, const LoadOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail_input("cannot open corpus file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_jsonl(buffer.str(), path.string(), options);
}

ClassBalance class_balance(const Dataset& data)
{
    ClassBalance balance;
    for (const auto& snippet : data) {
        if (snippet.label == Label::machine)
            ++balance.machine;
        else
            ++balance.human;
    }
    return balance;
}

std::size_t validation_quota(std::size_t class_count, double val_ratio)
{
    // std::nearbyint honours the default FE_TONEAREST mode: ties go to even.
    auto quota = static_cast<std::size_t>(std::nearbyint(static_cast<double>(class_count) * val_ratio));
    if (class_count >= 2 && quota == 0)
        quota = 1;
    return quota;
}

DatasetSplit stratified_split(const Dataset& data, double val_ratio, std::uint64_t seed)
{
    if (!(val_ratio > 0.0 && val_ratio < 1.0))
        fail_input("val_ratio must lie strictly between 0 and 1");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < data.size(); ++i)
        by_class[static_cast<int>(data[i].label)].push_back(i);
    if (by_class[0].empty() || by_class[1].empty())
        fail_input("stratified split needs both classes; dataset has " +
                   std::to_string(by_class[0].size()) + " human and " +
                   std::to_string(by_class[1].size()) + " machine samples");

    std::vector<bool> in_validation(data.size(), false);
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        auto members = by_class[c];
        rng.shuffle(members);
        const std::size_t quota = validation_quota(members.size(), val_ratio);
        for (std::size_t k = 0; k < quota; ++k)
            in_validation[members[k]] = true;
    }

    DatasetSplit split;
    split.seed = seed;
    split.val_ratio = val_ratio;
    for (std::size_t i = 0; i < data.size(); ++i)
        (in_validation[i] ? split.validation : split.train).push_back(i);
    return split;
}

Dataset select(const Dataset& data, const std::vector<std::size_t>& indices)
{
    Dataset out;
    out.reserve(indices.size());
    for (auto i : indices)
        out.push_back(data.at(i));
    return out;
}

std::string manifest_json(const Dataset& data, const DatasetSplit& split)
{
    json train = json::array();
    json validation = json::array();
    for (auto i : split.train)
        train.push_back(data.at(i).id);
    for (auto i : split.validation)
        validation.push_back(data.at(i).id);

    json manifest;
    manifest["seed"] = split.seed;
    manifest["val_ratio"] = split.val_ratio;
    manifest["train"] = std::move(train);
    manifest["validation"] = std::move(validation);
    return manifest.dump(2) + "\n";
}

DatasetSplit split_from_manifest(const Dataset& data, const std::string& manifest_text)
{
    json manifest;
    try {
        manifest = json::parse(manifest_text);
    } catch (const json::parse_error& e) {
        fail_input(std::string("malformed split manifest: ") + e.what());
    }

    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < data.size(); ++i)
        index_of.emplace(data[i].id, i);

    auto resolve = [&](const char* key) {
        if (!manifest.contains(key) || !manifest[key].is_array())
            fail_input(std::string("split manifest lacks the '") + key + "' id list");
        std::vector<std::size_t> indices;
        for (const auto& id : manifest[key]) {
            if (!id.is_string())
                fail_input(std::string("split manifest '") + key + "' holds a non-string id");
            auto it = index_of.find(id.get<std::string>());
            if (it == index_of.end())
                fail_input("split manifest id '" + id.get<std::string>() + "' is not in the corpus");
            indices.push_back(it->second);
        }
        return indices;
    };

    DatasetSplit split;
    split.train = resolve("train");
    split.validation = resolve("validation");
    split.seed = manifest.value("seed", std::uint64_t{0});
    split.val_ratio = manifest.value("val_ratio", 0.0);

    std::unordered_set<std::size_t> overlap(split.train.begin(), split.train.end());
    for (auto i : split.validation)
        if (overlap.count(i))
            fail_input("split manifest lists id '" + data[i].id + "' in both train and validation");
    return split;
}

} // namespace codeorigin::corpus
