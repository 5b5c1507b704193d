#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mos::harness {

/// Per-class evaluation summary. Confusion rows are true classes 1..l_max;
/// columns are predicted orders 0..l_max (estimates above l_max land in the
/// last column; the raw values still feed overestimation_rate).
struct EvalReport {
    std::string method;
    std::size_t l_max = 0;
    std::size_t n_test = 0;
    std::vector<std::vector<std::size_t>> confusion; // l_max x (l_max + 1)
    std::vector<double> per_class_accuracy;          // index = class - 1
    double overestimation_rate = 0.0;
    std::map<std::string, std::string> config;

    double overall_accuracy() const;
};

/// Builds the report from raw (unclamped) predicted orders.
EvalReport evaluate_predictions(const std::string& method, std::size_t l_max,
                                std::span<const std::size_t> true_order,
                                std::span<const std::size_t> predicted_order);

std::string to_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);

/// Side-by-side per-class accuracy of several reports (same l_max).
std::string comparison_csv(const std::vector<EvalReport>& reports,
                           const std::vector<std::string>& names);
std::string comparison_text(const std::vector<EvalReport>& reports,
                            const std::vector<std::string>& names);

} // namespace mos::harness
