// codeorigin: command-line front end over the C API.
//
//   codeorigin split      --input all.jsonl --val-ratio 0.2 --seed 42 --out-manifest split.json
//   codeorigin featurize  --input all.jsonl --out features.csv
//   codeorigin train      --train all.jsonl --manifest split.json --model rf --out-model rf.json
//   codeorigin evaluate   --model rf.json --test test.jsonl
//   codeorigin predict    --model rf.json --input new.jsonl --out predictions.jsonl
//   codeorigin importance --model rf.json --out-svg importance.svg --out-csv importance.csv
//   codeorigin compare    --reports a.json b.json
//
// Exit codes: 0 success, 1 training failure, 2 input or usage error.

#include "codeorigin/codeorigin.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitTraining = 1;
constexpr int kExitInput = 2;

/// Carries a C status out of a command so main can pick the exit code.
struct CommandError : std::runtime_error {
    CommandError(co_status status, const std::string& message) : std::runtime_error(message), status(status) {}
    co_status status;
};

void check(co_status status, const std::string& context)
{
    if (status != CO_OK)
        throw CommandError(status, context + ": " + co_last_error());
}

[[noreturn]] void input_error(const std::string& message)
{
    throw CommandError(CO_ERR_INPUT, message);
}

struct StringDeleter {
    void operator()(char* p) const { co_string_free(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct DatasetDeleter {
    void operator()(co_dataset* p) const { co_dataset_free(p); }
};
using Dataset = std::unique_ptr<co_dataset, DatasetDeleter>;

struct EmbeddingsDeleter {
    void operator()(co_embeddings* p) const { co_embeddings_free(p); }
};
using Embeddings = std::unique_ptr<co_embeddings, EmbeddingsDeleter>;

struct ModelDeleter {
    void operator()(co_model* p) const { co_model_free(p); }
};
using Model = std::unique_ptr<co_model, ModelDeleter>;

struct OptionsDeleter {
    void operator()(co_train_options* p) const { co_train_options_free(p); }
};
using Options = std::unique_ptr<co_train_options, OptionsDeleter>;

std::string take(char* raw)
{
    CString owned(raw);
    return owned ? std::string(owned.get()) : std::string();
}

Dataset load_dataset(const std::string& path, bool require_label = true)
{
    co_dataset* raw = nullptr;
    check(co_dataset_load(path.c_str(), require_label ? 1 : 0, &raw), "loading " + path);
    Dataset data(raw);
    if (require_label) {
        size_t human = 0, machine = 0;
        co_dataset_class_balance(data.get(), &human, &machine);
        std::cerr << path << ": " << co_dataset_size(data.get()) << " records (" << human << " human, " << machine
                  << " machine)\n";
    }
    return data;
}

Embeddings load_embeddings(const std::string& path)
{
    co_embeddings* raw = nullptr;
    check(co_embeddings_load(path.c_str(), &raw), "loading embeddings " + path);
    Embeddings emb(raw);
    if (const size_t fixed = co_embeddings_renormalized(emb.get()))
        std::cerr << "warning: " << fixed << " embedding rows were not unit length and were re-normalized\n";
    return emb;
}

Model load_model(const std::string& path)
{
    co_model* raw = nullptr;
    check(co_model_load(path.c_str(), &raw), "loading model " + path);
    return Model(raw);
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        input_error("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        input_error("cannot write " + path);
    out << text;
    if (!out)
        input_error("failed writing " + path);
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text(path, text);
}

/// Reproducibility record: the command and every resolved option.
struct RunRecord {
    std::string command;
    json options = json::object();
    std::string path; // explicit --run-json, else next to the primary output

    void write(const std::string& primary_output) const
    {
        std::string target = path;
        if (target.empty()) {
            fs::path base = (primary_output.empty() || primary_output == "-") ? fs::path(".")
                                                                              : fs::path(primary_output).parent_path();
            if (base.empty())
                base = ".";
            target = (base / "run.json").string();
        }
        json doc;
        doc["command"] = command;
        doc["version"] = co_version();
        doc["options"] = options;
        write_text(target, doc.dump(2) + "\n");
    }
};

Embeddings embeddings_for(const co_model* model, const std::string& path)
{
    const bool needs = std::string(co_model_representation(model)) == "embeddings";
    if (needs && path.empty())
        input_error("model " + std::string(co_model_id(model)) + " consumes embeddings; pass --embeddings-file");
    return path.empty() ? Embeddings() : load_embeddings(path);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Human vs machine-generated source code detection"};
    app.require_subcommand(1);
    std::string run_json;
    app.add_option("--run-json", run_json, "Where to write the run record (default: next to the main output)");

    RunRecord record;
    std::function<void()> action;

    // split
    auto* split = app.add_subcommand("split", "Stratified train/validation split manifest");
    std::string split_input, split_out;
    double val_ratio = 0.2;
    std::uint64_t split_seed = 42;
    split->add_option("--input", split_input, "Labeled JSONL corpus")->required()->check(CLI::ExistingFile);
    split->add_option("--val-ratio", val_ratio, "Validation fraction, strictly between 0 and 1")
        ->check(CLI::Range(0.0, 1.0) & CLI::Validator([](std::string& s) {
                    const double v = std::stod(s);
                    return (v > 0.0 && v < 1.0) ? std::string() : std::string("must lie strictly between 0 and 1");
                }, "(0,1)"));
    split->add_option("--seed", split_seed, "Shuffle seed");
    split->add_option("--out-manifest", split_out, "Manifest JSON path")->required();
    split->callback([&] {
        action = [&] {
            auto data = load_dataset(split_input);
            char* manifest = nullptr;
            check(co_split_manifest(data.get(), val_ratio, split_seed, &manifest), "splitting " + split_input);
            write_text(split_out, take(manifest));
            record.command = "split";
            record.options = {{"input", split_input}, {"val_ratio", val_ratio}, {"seed", split_seed},
                              {"out_manifest", split_out}};
            record.write(split_out);
        };
    });

    // featurize
    auto* featurize = app.add_subcommand("featurize", "Stylometry feature matrix as CSV");
    std::string feat_input, feat_out, feat_format = "csv";
    featurize->add_option("--input", feat_input, "JSONL corpus")->required()->check(CLI::ExistingFile);
    featurize->add_option("--out", feat_out, "Output CSV path")->required();
    featurize->add_option("--format", feat_format, "Output format")->check(CLI::IsMember({"csv"}));
    featurize->callback([&] {
        action = [&] {
            auto data = load_dataset(feat_input);
            char* csv = nullptr;
            check(co_featurize_csv(data.get(), &csv), "featurizing " + feat_input);
            write_text(feat_out, take(csv));
            record.command = "featurize";
            record.options = {{"input", feat_input}, {"out", feat_out}, {"format", feat_format},
                              {"feature_schema_version", co_feature_schema_version()}};
            record.write(feat_out);
        };
    });

    // schema
    auto* schema = app.add_subcommand("schema", "Publish the feature schema as JSON");
    std::string schema_out = "-";
    schema->add_option("--out", schema_out, "Output path (default stdout)");
    schema->callback([&] {
        action = [&] {
            char* text = nullptr;
            check(co_feature_schema_json(&text), "feature schema");
            emit(schema_out, take(text));
            record.command = "schema";
            record.options = {{"out", schema_out}};
            record.write(schema_out);
        };
    });

    // train
    auto* train = app.add_subcommand("train", "Fit a classifier and calibrate its threshold on validation data");
    std::string train_path, val_path, manifest_path, representation = "features", embeddings_path, model_type = "rf",
                                                     out_model, out_report, train_format = "json";
    std::uint64_t train_seed = 42;
    std::vector<std::string> params;
    train->add_option("--train", train_path, "Training JSONL (or the full corpus with --manifest)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* val_opt = train->add_option("--val", val_path, "Validation JSONL")->check(CLI::ExistingFile);
    auto* manifest_opt =
        train->add_option("--manifest", manifest_path, "Split manifest selecting train/validation from --train")
            ->check(CLI::ExistingFile);
    val_opt->excludes(manifest_opt);
    train->add_option("--representation", representation, "features or embeddings")
        ->check(CLI::IsMember({"features", "embeddings"}));
    train->add_option("--embeddings-file", embeddings_path, "Vector file covering every snippet id")
        ->check(CLI::ExistingFile);
    train->add_option("--model", model_type, "lr, rf, et or hgb")->check(CLI::IsMember({"lr", "rf", "et", "hgb"}));
    train->add_option("--seed", train_seed, "Training seed");
    train->add_option("--param", params, "Hyperparameter override key=value (repeatable)");
    train->add_option("--out-model", out_model, "Model file path")->required();
    train->add_option("--out-report", out_report, "Validation report path (default <out-model stem>.validation.<format>)");
    train->add_option("--format", train_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    train->callback([&] {
        action = [&] {
            if (val_path.empty() && manifest_path.empty())
                input_error("train needs --val or --manifest");
            if (representation == "embeddings" && embeddings_path.empty())
                input_error("--representation embeddings needs --embeddings-file");

            Dataset train_set, val_set;
            if (!manifest_path.empty()) {
                auto all = load_dataset(train_path);
                const std::string manifest = read_text(manifest_path);
                co_dataset* part = nullptr;
                check(co_dataset_from_manifest(all.get(), manifest.c_str(), 0, &part), "applying " + manifest_path);
                train_set.reset(part);
                check(co_dataset_from_manifest(all.get(), manifest.c_str(), 1, &part), "applying " + manifest_path);
                val_set.reset(part);
            } else {
                train_set = load_dataset(train_path);
                val_set = load_dataset(val_path);
            }
            Embeddings emb = embeddings_path.empty() ? Embeddings() : load_embeddings(embeddings_path);

            Options options(co_train_options_new());
            check(co_train_options_set(options.get(), "representation", representation.c_str()), "option");
            check(co_train_options_set(options.get(), "model", model_type.c_str()), "option");
            check(co_train_options_set(options.get(), "seed", std::to_string(train_seed).c_str()), "option");
            json overrides = json::object();
            for (const auto& p : params) {
                const auto eq = p.find('=');
                if (eq == std::string::npos || eq == 0)
                    input_error("--param expects key=value, got '" + p + "'");
                const std::string key = p.substr(0, eq);
                const std::string value = p.substr(eq + 1);
                check(co_train_options_set(options.get(), key.c_str(), value.c_str()), "--param " + p);
                overrides[key] = value;
            }

            co_model* raw = nullptr;
            char* report_raw = nullptr;
            check(co_model_train(train_set.get(), val_set.get(), emb.get(), options.get(), &raw, &report_raw),
                  "training " + model_type);
            Model model(raw);
            std::string report = take(report_raw);
            check(co_model_save(model.get(), out_model.c_str()), "saving " + out_model);

            if (train_format == "csv") {
                char* csv = nullptr;
                check(co_report_to_csv(report.c_str(), &csv), "report");
                report = take(csv);
            }
            std::string report_path = out_report;
            if (report_path.empty()) {
                fs::path p(out_model);
                p.replace_extension();
                report_path = p.string() + ".validation." + train_format;
            }
            write_text(report_path, report);
            std::cerr << "validation threshold " << co_model_threshold(model.get()) << "; report written to "
                      << report_path << "\n";

            record.command = "train";
            record.options = {{"train", train_path},
                              {"val", val_path},
                              {"manifest", manifest_path},
                              {"representation", representation},
                              {"embeddings_file", embeddings_path},
                              {"model", model_type},
                              {"seed", train_seed},
                              {"params", overrides},
                              {"out_model", out_model},
                              {"out_report", report_path},
                              {"format", train_format}};
            record.write(out_model);
        };
    });

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Metrics for a model on a labeled test set");
    std::string eval_model, eval_test, eval_embeddings, eval_format = "json", eval_out = "-", eval_name;
    std::optional<double> eval_threshold;
    evaluate->add_option("--model", eval_model, "Model file")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--test", eval_test, "Labeled JSONL test set")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--embeddings-file", eval_embeddings, "Vector file for embedding models")
        ->check(CLI::ExistingFile);
    evaluate->add_option("--format", eval_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    evaluate->add_option("--out", eval_out, "Report path (default stdout)");
    evaluate->add_option("--dataset-name", eval_name, "Dataset label in the report (default: test file stem)");
    evaluate->add_option("--threshold", eval_threshold, "Override the stored threshold")->check(CLI::Range(0.0, 1.0));
    evaluate->callback([&] {
        action = [&] {
            auto model = load_model(eval_model);
            auto data = load_dataset(eval_test);
            auto emb = embeddings_for(model.get(), eval_embeddings);
            const std::string name = eval_name.empty() ? fs::path(eval_test).stem().string() : eval_name;
            char* raw = nullptr;
            check(co_model_evaluate(model.get(), data.get(), emb.get(), name.c_str(), eval_threshold ? 1 : 0,
                                    eval_threshold.value_or(0.0), &raw),
                  "evaluating " + eval_model);
            std::string report = take(raw);
            if (eval_format == "csv") {
                char* csv = nullptr;
                check(co_report_to_csv(report.c_str(), &csv), "report");
                report = take(csv);
            }
            emit(eval_out, report);
            record.command = "evaluate";
            record.options = {{"model", eval_model}, {"test", eval_test},     {"embeddings_file", eval_embeddings},
                              {"format", eval_format}, {"out", eval_out},    {"dataset_name", name},
                              {"threshold", eval_threshold ? json(*eval_threshold) : json(nullptr)}};
            record.write(eval_out);
        };
    });

    // predict
    auto* predict = app.add_subcommand("predict", "Per-snippet probability and verdict as JSONL");
    std::string pred_model, pred_input, pred_out = "-", pred_embeddings;
    std::optional<double> pred_threshold;
    predict->add_option("--model", pred_model, "Model file")->required()->check(CLI::ExistingFile);
    predict->add_option("--input", pred_input, "JSONL snippets (labels optional)")->required()->check(CLI::ExistingFile);
    predict->add_option("--out", pred_out, "Output JSONL (default stdout)");
    predict->add_option("--embeddings-file", pred_embeddings, "Vector file for embedding models")
        ->check(CLI::ExistingFile);
    predict->add_option("--threshold", pred_threshold, "Override the stored threshold")->check(CLI::Range(0.0, 1.0));
    predict->callback([&] {
        action = [&] {
            auto model = load_model(pred_model);
            auto data = load_dataset(pred_input, false);
            auto emb = embeddings_for(model.get(), pred_embeddings);
            const size_t n = co_dataset_size(data.get());
            std::vector<double> probabilities(n);
            std::vector<int> verdicts(n);
            check(co_model_predict(model.get(), data.get(), emb.get(), pred_threshold ? 1 : 0,
                                   pred_threshold.value_or(0.0), probabilities.data(), verdicts.data(), n),
                  "predicting with " + pred_model);
            std::string out;
            for (size_t i = 0; i < n; ++i) {
                json row;
                row["id"] = co_dataset_id(data.get(), i);
                row["probability"] = probabilities[i];
                row["verdict"] = verdicts[i] ? "machine" : "human";
                out += row.dump() + "\n";
            }
            emit(pred_out, out);
            const double tau = pred_threshold.value_or(co_model_threshold(model.get()));
            record.command = "predict";
            record.options = {{"model", pred_model}, {"input", pred_input}, {"out", pred_out},
                              {"embeddings_file", pred_embeddings}, {"threshold", tau}};
            record.write(pred_out);
        };
    });

    // importance
    auto* importance = app.add_subcommand("importance", "Impurity-based feature importance of a forest model");
    std::string imp_model, imp_svg, imp_csv;
    importance->add_option("--model", imp_model, "Forest model file")->required()->check(CLI::ExistingFile);
    importance->add_option("--out-svg", imp_svg, "SVG bar chart path");
    importance->add_option("--out-csv", imp_csv, "CSV path (default stdout)");
    importance->callback([&] {
        action = [&] {
            auto model = load_model(imp_model);
            char* csv = nullptr;
            char* svg = nullptr;
            check(co_model_importance_chart(model.get(), &csv, imp_svg.empty() ? nullptr : &svg), "importance");
            const std::string csv_text = take(csv);
            const std::string svg_text = take(svg);
            emit(imp_csv, csv_text);
            if (!imp_svg.empty())
                write_text(imp_svg, svg_text);
            record.command = "importance";
            record.options = {{"model", imp_model}, {"out_svg", imp_svg}, {"out_csv", imp_csv}};
            record.write(!imp_csv.empty() ? imp_csv : imp_svg);
        };
    });

    // compare
    auto* compare = app.add_subcommand("compare", "Select the best model from validation reports");
    std::vector<std::string> report_paths;
    std::string compare_out = "-";
    compare->add_option("--reports", report_paths, "Report JSON files")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", compare_out, "Summary path (default stdout)");
    compare->callback([&] {
        action = [&] {
            std::vector<std::string> texts;
            for (const auto& p : report_paths)
                texts.push_back(read_text(p));
            std::vector<const char*> ptrs;
            for (const auto& t : texts)
                ptrs.push_back(t.c_str());
            char* summary = nullptr;
            check(co_select_model(ptrs.data(), ptrs.size(), &summary), "comparing reports");
            emit(compare_out, take(summary));
            record.command = "compare";
            record.options = {{"reports", report_paths}, {"out", compare_out}};
            record.write(compare_out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    record.path = run_json;
    try {
        action();
    } catch (const CommandError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.status == CO_ERR_TRAINING || e.status == CO_ERR_INTERNAL ? kExitTraining : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
