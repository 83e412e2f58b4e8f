#include "codeorigin/report.hpp"

#include "codeorigin/error.hpp"
#include "codeorigin/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <tuple>

#include <json.hpp>

namespace codeorigin::evaluation {

using nlohmann::json;

namespace {

std::string csv_field(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos)
        return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

bool ranks_before(const EvalReport& a, const EvalReport& b)
{
    return std::tie(b.pr_auc, b.roc_auc, a.model) < std::tie(a.pr_auc, a.roc_auc, b.model);
}

} // namespace

EvalReport make_report(const ScoredSet& scored, double threshold, std::string model, std::string dataset)
{
    EvalReport report;
    report.model = std::move(model);
    report.dataset = std::move(dataset);
    report.threshold = threshold;
    report.roc_auc = roc_auc(scored);
    report.pr_auc = pr_auc(scored);
    report.confusion = confusion_at(scored, threshold);
    const auto m = thresholded_metrics(report.confusion);
    report.accuracy = m.accuracy;
    report.precision = m.precision;
    report.recall = m.recall;
    report.f1 = m.f1;
    report.n = scored.scores.size();
    return report;
}

ReportFormat parse_report_format(std::string_view text)
{
    if (text == "json")
        return ReportFormat::json;
    if (text == "csv")
        return ReportFormat::csv;
    fail_input("unknown report format '" + std::string(text) + "' (expected json or csv)");
}

std::string report_json(const EvalReport& r)
{
    json doc;
    doc["model"] = r.model;
    doc["dataset"] = r.dataset;
    doc["threshold"] = r.threshold;
    doc["roc_auc"] = r.roc_auc;
    doc["pr_auc"] = r.pr_auc;
    doc["accuracy"] = r.accuracy;
    doc["precision"] = r.precision;
    doc["recall"] = r.recall;
    doc["f1"] = r.f1;
    doc["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn}, {"fn", r.confusion.fn}};
    doc["n"] = r.n;
    return doc.dump(2) + "\n";
}

EvalReport parse_report_json(const std::string& text)
{
    try {
        const json doc = json::parse(text);
        EvalReport r;
        r.model = doc.at("model").get<std::string>();
        r.dataset = doc.at("dataset").get<std::string>();
        r.threshold = doc.at("threshold").get<double>();
        r.roc_auc = doc.at("roc_auc").get<double>();
        r.pr_auc = doc.at("pr_auc").get<double>();
        r.accuracy = doc.at("accuracy").get<double>();
        r.precision = doc.at("precision").get<double>();
        r.recall = doc.at("recall").get<double>();
        r.f1 = doc.at("f1").get<double>();
        const auto& c = doc.at("confusion");
        r.confusion.tp = c.at("tp").get<std::size_t>();
        r.confusion.fp = c.at("fp").get<std::size_t>();
        r.confusion.tn = c.at("tn").get<std::size_t>();
        r.confusion.fn = c.at("fn").get<std::size_t>();
        r.n = doc.at("n").get<std::size_t>();
        if (r.confusion.total() != r.n)
            fail_input("report confusion counts do not sum to n");
        return r;
    } catch (const json::exception& e) {
        fail_input(std::string("malformed report JSON: ") + e.what());
    }
}

std::string report_csv(std::span<const EvalReport> reports)
{
    std::string out(kReportCsvHeader);
    out += '\n';
    for (const auto& r : reports) {
        out += csv_field(r.model) + ',' + csv_field(r.dataset);
        for (double v : {r.threshold, r.roc_auc, r.pr_auc, r.accuracy, r.precision, r.recall, r.f1})
            out += ',' + format_double(v);
        for (std::size_t v : {r.confusion.tp, r.confusion.fp, r.confusion.tn, r.confusion.fn, r.n})
            out += ',' + std::to_string(v);
        out += '\n';
    }
    return out;
}

std::string emit_report(const EvalReport& report, ReportFormat format)
{
    return format == ReportFormat::json ? report_json(report) : report_csv(std::span(&report, 1));
}

std::vector<EvalReport> rank_reports(std::span<const EvalReport> reports)
{
    std::vector<EvalReport> ranked(reports.begin(), reports.end());
    std::stable_sort(ranked.begin(), ranked.end(), ranks_before);
    return ranked;
}

std::string select_model(std::span<const EvalReport> reports)
{
    if (reports.empty())
        fail_input("model selection needs at least one report");
    return rank_reports(reports).front().model;
}

std::vector<ImportanceBar> importance_ranking(std::span<const double> importances,
                                              std::span<const std::string> names)
{
    if (importances.size() != names.size())
        fail_input("importance vector and feature names differ in length");
    std::vector<ImportanceBar> bars;
    for (std::size_t i = 0; i < importances.size(); ++i)
        bars.push_back({names[i], i, importances[i]});
    std::stable_sort(bars.begin(), bars.end(),
                     [](const auto& a, const auto& b) { return a.importance > b.importance; });
    return bars;
}

std::string importance_csv(std::span<const ImportanceBar> bars)
{
    std::string out = "feature,index,importance\n";
    for (const auto& bar : bars)
        out += csv_field(bar.name) + ',' + std::to_string(bar.index) + ',' + format_double(bar.importance) + '\n';
    return out;
}

std::string importance_svg(std::span<const ImportanceBar> bars, std::string_view title)
{
    constexpr double bar_width = 28.0;
    constexpr double gap = 8.0;
    constexpr double left = 60.0;
    constexpr double top = 40.0;
    constexpr double label_space = 170.0;
    const double plot_width = static_cast<double>(bars.size()) * (bar_width + gap);
    const double width = left + plot_width + 20.0;
    const double height = top + kChartHeight + label_space;
    const double baseline = top + kChartHeight;

    double max_importance = 0.0;
    for (const auto& bar : bars)
        max_importance = std::max(max_importance, bar.importance);
    const double scale = max_importance > 0.0 ? kChartHeight / max_importance : 0.0;

    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
    svg += "  <text x=\"" + num(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + xml_escape(title) + "</text>\n";
    svg += "  <line x1=\"" + num(left) + "\" y1=\"" + num(baseline) + "\" x2=\"" + num(left + plot_width) +
           "\" y2=\"" + num(baseline) + "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& bar = bars[i];
        const double h = std::round(bar.importance * scale);
        const double x = left + static_cast<double>(i) * (bar_width + gap) + gap / 2;
        svg += "  <rect class=\"bar\" data-feature=\"" + xml_escape(bar.name) + "\" data-importance=\"" +
               format_double(bar.importance) + "\" x=\"" + num(x) + "\" y=\"" + num(baseline - h) + "\" width=\"" +
               num(bar_width) + "\" height=\"" + num(h) + "\" fill=\"#4878a8\"/>\n";
        const double cx = x + bar_width / 2;
        svg += "  <text x=\"" + num(cx) + "\" y=\"" + num(baseline + 12) + "\" transform=\"rotate(60 " + num(cx) +
               " " + num(baseline + 12) + ")\" font-family=\"sans-serif\" font-size=\"11\">" +
               xml_escape(bar.name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace codeorigin::evaluation
