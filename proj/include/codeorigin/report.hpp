#pragma once

#include "codeorigin/metrics.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codeorigin::evaluation {

struct EvalReport {
    std::string model;
    std::string dataset;
    double threshold = 0.5;
    double roc_auc = 0.0;
    double pr_auc = 0.0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    Confusion confusion;
    std::size_t n = 0;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Threshold-free metrics over all scores plus thresholded metrics at `threshold`.
EvalReport make_report(const ScoredSet& scored, double threshold, std::string model, std::string dataset);

enum class ReportFormat { json, csv };
ReportFormat parse_report_format(std::string_view text);

/// {model, dataset, threshold, roc_auc, pr_auc, accuracy, precision, recall,
///  f1, confusion: {tp, fp, tn, fn}, n}
std::string report_json(const EvalReport& report);
EvalReport parse_report_json(const std::string& text);

inline constexpr std::string_view kReportCsvHeader =
    "model,dataset,threshold,roc_auc,pr_auc,accuracy,precision,recall,f1,tp,fp,tn,fn,n";

/// Header row followed by one row per report.
std::string report_csv(std::span<const EvalReport> reports);

std::string emit_report(const EvalReport& report, ReportFormat format);

/// Highest (pr_auc, roc_auc); remaining ties go to the alphabetically first id.
std::string select_model(std::span<const EvalReport> reports);

/// Reports ordered as select_model ranks them, best first.
std::vector<EvalReport> rank_reports(std::span<const EvalReport> reports);

struct ImportanceBar {
    std::string name;
    std::size_t index = 0;
    double importance = 0.0;
};

/// Bars sorted by descending importance; equal values keep feature order.
std::vector<ImportanceBar> importance_ranking(std::span<const double> importances,
                                              std::span<const std::string> names);

/// feature,index,importance (descending).
std::string importance_csv(std::span<const ImportanceBar> bars);

/// Self-contained SVG bar chart, tallest bar first. Bar heights are
/// proportional to importance, scaled so the largest bar is kChartHeight px.
inline constexpr double kChartHeight = 300.0;
std::string importance_svg(std::span<const ImportanceBar> bars, std::string_view title);

} // namespace codeorigin::evaluation
