#include "synthetic.hpp"

#include "codeorigin/random.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <stdexcept>

namespace testsupport {
namespace {

using codeorigin::Rng;

template <std::size_t N>
const char* pick(Rng& rng, const std::array<const char*, N>& items)
{
    return items[rng.below(N)];
}

std::string noisy_name(Rng& rng)
{
    static constexpr std::array<const char*, 14> stems = {"tmp", "x",   "val", "res",  "foo", "n",   "buf",
                                                          "cnt", "acc", "it",  "data", "q",   "obj", "blah"};
    std::string name = pick(rng, stems);
    switch (rng.below(4)) {
    case 0:
        name += std::to_string(rng.below(100));
        break;
    case 1: { // camelCase tail
        static constexpr std::array<const char*, 6> tails = {"Val", "List", "Tmp", "Idx", "Out", "X"};
        name += pick(rng, tails);
        break;
    }
    case 2:
        name += static_cast<char>('a' + rng.below(26));
        name += static_cast<char>('a' + rng.below(26));
        break;
    default:
        name += "_";
        name += static_cast<char>('a' + rng.below(26));
        break;
    }
    return name;
}

std::string tidy_name(Rng& rng)
{
    static constexpr std::array<const char*, 10> verbs = {"compute", "process", "validate", "calculate", "parse",
                                                          "load",    "build",   "filter",   "update",    "format"};
    static constexpr std::array<const char*, 10> nouns = {"result", "values", "items", "records", "total",
                                                          "config", "output", "input", "entries", "data"};
    return std::string(pick(rng, verbs)) + "_" + pick(rng, nouns);
}

std::string tidy_noun(Rng& rng)
{
    static constexpr std::array<const char*, 8> nouns = {"result", "value", "item", "record",
                                                         "total",  "count", "index", "entry"};
    return pick(rng, nouns);
}

} // namespace

std::string human_snippet(std::uint64_t seed)
{
    Rng rng(seed);
    // Indent unit: tab, 2 or 3 spaces, occasionally 4, sometimes mixed line to line.
    const std::uint64_t style = rng.below(10);
    auto indent = [&](int level) {
        std::string unit;
        std::uint64_t s = style;
        if (style >= 8)
            s = rng.below(4); // mixed
        switch (s) {
        case 0:
        case 1:
        case 2:
            unit = "\t";
            break;
        case 3:
        case 4:
        case 5:
            unit = "  ";
            break;
        case 6:
            unit = "   ";
            break;
        default:
            unit = "    ";
            break;
        }
        std::string out;
        for (int i = 0; i < level; ++i)
            out += unit;
        return out;
    };
    auto blanks = [&] {
        std::string out;
        const auto k = rng.below(5); // 0..4, ragged
        for (std::uint64_t i = 0; i + 2 < k; ++i)
            out += (rng.below(3) == 0) ? " \n" : "\n";
        return out;
    };

    std::string code;
    if (rng.below(3) == 0)
        code += "import os,sys\n";
    const auto functions = 1 + rng.below(3);
    for (std::uint64_t f = 0; f < functions; ++f) {
        const std::string fn = noisy_name(rng);
        const std::string a = noisy_name(rng);
        const std::string b = noisy_name(rng);
        code += "def " + fn + "(" + a + "," + b + "):\n";
        if (rng.below(10) < 3)
            code += indent(1) + "\"\"\"" + (rng.below(2) ? "does the thing" : "Helper.") + "\"\"\"\n";
        if (rng.below(4) == 0)
            code += indent(1) + "# " + (rng.below(2) ? "hack" : "TODO fix this later") + "\n";
        const auto statements = 1 + rng.below(5);
        for (std::uint64_t s = 0; s < statements; ++s) {
            const std::string v = noisy_name(rng);
            switch (rng.below(4)) {
            case 0:
                code += indent(1) + v + "=" + a + "+" + std::to_string(rng.below(50)) + "\n";
                break;
            case 1:
                code += indent(1) + "for " + v + " in " + b + ":\n";
                code += indent(2) + a + "+=" + v + "\n";
                break;
            case 2:
                code += indent(1) + "if " + a + ">" + b + ": " + v + "=" + a + "\n";
                break;
            default:
                code += indent(1) + v + " = [" + a + " for " + a + " in range(" + std::to_string(rng.below(9)) +
                        ")]\n";
                break;
            }
            code += blanks();
        }
        code += indent(1) + "return " + a + "\n";
        code += blanks();
    }
    return code;
}

std::string machine_snippet(std::uint64_t seed)
{
    Rng rng(seed);
    std::string code;
    if (rng.below(2) == 0)
        code += "import math\n\n\n";
    const auto functions = 1 + rng.below(2);
    for (std::uint64_t f = 0; f < functions; ++f) {
        if (f > 0)
            code += "\n\n";
        const std::string fn = tidy_name(rng);
        const std::string arg = tidy_noun(rng) + "s";
        code += "def " + fn + "(" + arg + "):\n";
        if (rng.below(10) < 3)
            code += "    \"\"\"" + std::string(rng.below(2) ? "Return the processed values." : "Compute the result.") +
                    "\"\"\"\n";
        code += "    result = []\n";
        const auto statements = 1 + rng.below(3);
        for (std::uint64_t s = 0; s < statements; ++s) {
            const std::string item = tidy_noun(rng);
            switch (rng.below(3)) {
            case 0:
                code += "    for " + item + " in " + arg + ":\n";
                code += "        if " + item + " is not None:\n";
                code += "            result.append(" + item + ")\n";
                break;
            case 1:
                code += "    total_" + item + " = len(" + arg + ")\n";
                break;
            default:
                if (rng.below(4) == 0)
                    code += "    # Accumulate each " + item + "\n";
                code += "    for index, " + item + " in enumerate(" + arg + "):\n";
                code += "        result.append(index * " + item + ")\n";
                break;
            }
        }
        code += "    return result\n";
    }
    return code;
}

codeorigin::corpus::Dataset synthetic_corpus(std::size_t per_class, std::uint64_t seed)
{
    codeorigin::corpus::Dataset data;
    data.reserve(2 * per_class);
    Rng rng(seed);
    for (std::size_t i = 0; i < per_class; ++i) {
        codeorigin::corpus::LabeledSnippet h;
        h.id = "h" + std::to_string(i);
        h.code = human_snippet(rng.next());
        h.label = codeorigin::corpus::Label::human;
        h.language = "python";
        data.push_back(std::move(h));

        codeorigin::corpus::LabeledSnippet m;
        m.id = "m" + std::to_string(i);
        m.code = machine_snippet(rng.next());
        m.label = codeorigin::corpus::Label::machine;
        m.language = "python";
        m.generator = "template";
        data.push_back(std::move(m));
    }
    return data;
}

void write_jsonl(const codeorigin::corpus::Dataset& data, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    for (const auto& s : data) {
        nlohmann::json row;
        row["id"] = s.id;
        row["code"] = s.code;
        row["label"] = static_cast<int>(s.label);
        if (s.language)
            row["language"] = *s.language;
        if (s.generator)
            row["generator"] = *s.generator;
        out << row.dump() << "\n";
    }
}

} // namespace testsupport
