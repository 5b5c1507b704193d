#include "mos/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mos::harness {

using ordered_json = nlohmann::ordered_json;

double EvalReport::overall_accuracy() const {
    if (n_test == 0) return 0.0;
    std::size_t correct = 0;
    for (std::size_t c = 0; c < l_max; ++c) correct += confusion[c][c + 1];
    return static_cast<double>(correct) / static_cast<double>(n_test);
}

EvalReport evaluate_predictions(const std::string& method, std::size_t l_max,
                                std::span<const std::size_t> true_order,
                                std::span<const std::size_t> predicted_order) {
    if (true_order.size() != predicted_order.size())
        throw std::invalid_argument("evaluate_predictions: size mismatch");
    EvalReport r;
    r.method = method;
    r.l_max = l_max;
    r.n_test = true_order.size();
    r.confusion.assign(l_max, std::vector<std::size_t>(l_max + 1, 0));
    std::size_t over = 0;
    for (std::size_t i = 0; i < true_order.size(); ++i) {
        const std::size_t t = true_order[i];
        if (t < 1 || t > l_max)
            throw std::invalid_argument("evaluate_predictions: true order out of range");
        const std::size_t p = std::min(predicted_order[i], l_max);
        r.confusion[t - 1][p] += 1;
        if (predicted_order[i] > t) ++over;
    }
    r.per_class_accuracy.assign(l_max, 0.0);
    for (std::size_t c = 0; c < l_max; ++c) {
        std::size_t row_sum = 0;
        for (std::size_t p = 0; p <= l_max; ++p) row_sum += r.confusion[c][p];
        r.per_class_accuracy[c] =
            row_sum == 0 ? 0.0
                         : static_cast<double>(r.confusion[c][c + 1]) / static_cast<double>(row_sum);
    }
    r.overestimation_rate =
        r.n_test == 0 ? 0.0 : static_cast<double>(over) / static_cast<double>(r.n_test);
    return r;
}

std::string to_json(const EvalReport& r) {
    ordered_json j;
    j["method"] = r.method;
    j["l_max"] = r.l_max;
    j["n_test"] = r.n_test;
    ordered_json acc;
    for (std::size_t c = 0; c < r.l_max; ++c)
        acc[std::to_string(c + 1)] = r.per_class_accuracy[c];
    j["per_class_accuracy"] = acc;
    j["overall_accuracy"] = r.overall_accuracy();
    j["confusion"] = r.confusion;
    j["overestimation_rate"] = r.overestimation_rate;
    ordered_json cfg;
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    EvalReport r;
    r.method = j.at("method").get<std::string>();
    r.l_max = j.at("l_max").get<std::size_t>();
    r.n_test = j.at("n_test").get<std::size_t>();
    r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
    r.per_class_accuracy.assign(r.l_max, 0.0);
    for (std::size_t c = 0; c < r.l_max; ++c)
        r.per_class_accuracy[c] = j.at("per_class_accuracy").at(std::to_string(c + 1)).get<double>();
    r.overestimation_rate = j.at("overestimation_rate").get<double>();
    if (j.contains("config"))
        for (const auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
    return r;
}

namespace {
std::string fmt_acc(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}
void check_compatible(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("comparison: no reports");
    for (const EvalReport& r : reports)
        if (r.l_max != reports.front().l_max)
            throw std::invalid_argument("comparison: reports disagree on l_max");
}
} // namespace

std::string comparison_csv(const std::vector<EvalReport>& reports,
                           const std::vector<std::string>& names) {
    check_compatible(reports);
    std::ostringstream out;
    out << "class";
    for (const std::string& n : names) out << ',' << n;
    out << '\n';
    const std::size_t l_max = reports.front().l_max;
    for (std::size_t c = 0; c < l_max; ++c) {
        out << (c + 1);
        for (const EvalReport& r : reports) out << ',' << fmt_acc(r.per_class_accuracy[c]);
        out << '\n';
    }
    out << "overall";
    for (const EvalReport& r : reports) out << ',' << fmt_acc(r.overall_accuracy());
    out << '\n';
    return out.str();
}

std::string comparison_text(const std::vector<EvalReport>& reports,
                            const std::vector<std::string>& names) {
    check_compatible(reports);
    std::ostringstream out;
    std::size_t width = 8;
    for (const std::string& n : names) width = std::max(width, n.size() + 2);
    out << "class   ";
    for (const std::string& n : names) {
        out << std::string(width - n.size(), ' ') << n;
    }
    out << '\n';
    const std::size_t l_max = reports.front().l_max;
    auto row = [&](const std::string& label, auto value_of) {
        out << label << std::string(8 - label.size(), ' ');
        for (const EvalReport& r : reports) {
            const std::string v = fmt_acc(value_of(r));
            out << std::string(width - v.size(), ' ') << v;
        }
        out << '\n';
    };
    for (std::size_t c = 0; c < l_max; ++c)
        row(std::to_string(c + 1),
            [c](const EvalReport& r) { return r.per_class_accuracy[c]; });
    row("overall", [](const EvalReport& r) { return r.overall_accuracy(); });
    return out.str();
}

} // namespace mos::harness
