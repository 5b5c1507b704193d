#include "mos/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mos::estimators {

OrderEstimate proposed_estimate(const nn::NNModel& model, const linalg::RealMatrix& g, double xi) {
    if (xi <= 0.0 || xi >= 1.0) throw std::invalid_argument("proposed_estimate: xi must be in (0,1)");
    OrderEstimate e;
    e.method = Method::proposed;
    e.scores = nn::forward(model, g);
    e.order = static_cast<std::size_t>(
        std::count_if(e.scores.begin(), e.scores.end(), [xi](double s) { return s > xi; }));
    return e;
}

OrderEstimate ecnet_estimate(const nn::NNModel& model, const linalg::RealMatrix& g) {
    OrderEstimate e;
    e.method = Method::ecnet;
    e.scores = nn::forward(model, g);
    if (e.scores.empty()) throw std::invalid_argument("ecnet_estimate: empty output");
    std::size_t best = 0;
    for (std::size_t i = 1; i < e.scores.size(); ++i)
        if (e.scores[i] > e.scores[best]) best = i;
    e.order = best + 1;
    return e;
}

OrderEstimate large_estimate(const std::vector<std::vector<double>>& mode_sv,
                             const LargeConfig& cfg) {
    if (mode_sv.empty()) throw std::invalid_argument("large_estimate: no mode singular values");
    if (cfg.rho <= 0.0 || cfg.min_noise_points < 2)
        throw std::invalid_argument("large_estimate: invalid configuration");
    std::size_t p = mode_sv.front().size();
    for (const auto& sv : mode_sv) p = std::min(p, sv.size());
    if (p < cfg.min_noise_points + 1)
        throw std::invalid_argument("large_estimate: too few global eigenvalues");

    // log of global eigenvalues: sum over modes of 2 ln sigma_i
    std::vector<double> lg(p, 0.0);
    for (const auto& sv : mode_sv)
        for (std::size_t i = 0; i < p; ++i) {
            if (!(sv[i] > 0.0))
                throw std::invalid_argument("large_estimate: singular values must be positive");
            lg[i] += 2.0 * std::log(sv[i]);
        }

    OrderEstimate e;
    e.method = Method::large;
    const std::size_t i_max = p - cfg.min_noise_points; // 1-based candidate upper bound
    e.scores.assign(i_max, 0.0);
    std::vector<double> xs, ys;
    e.order = 0;
    for (std::size_t i = i_max; i >= 1; --i) { // candidate index, 1-based
        xs.clear();
        ys.clear();
        for (std::size_t j = i + 1; j <= p; ++j) {
            xs.push_back(static_cast<double>(j));
            ys.push_back(lg[j - 1]);
        }
        const linalg::LineFit fit = linalg::fit_line_least_squares(xs, ys);
        const double predicted = fit.slope * static_cast<double>(i) + fit.intercept;
        const double denom = std::max(std::abs(predicted), 1e-300);
        const double err = (lg[i - 1] - predicted) / denom;
        e.scores[i - 1] = err;
        if (e.order == 0 && err > cfg.rho) e.order = i;
    }
    return e;
}

std::vector<std::vector<double>> large_input_from_features(const features::FeatureMatrix& fm) {
    if (fm.mode_sizes.size() != fm.g.cols())
        throw std::invalid_argument("large_input_from_features: malformed feature matrix");
    std::size_t p = fm.n_common;
    for (std::size_t s : fm.mode_sizes) p = std::min(p, s);
    std::vector<std::vector<double>> sv(fm.g.cols());
    for (std::size_t c = 0; c < fm.g.cols(); ++c) {
        sv[c].resize(p);
        for (std::size_t i = 0; i < p; ++i) sv[c][i] = std::exp(fm.g(i, c));
    }
    return sv;
}

std::vector<double> multiclass_label(std::size_t l, std::size_t l_max) {
    if (l < 1 || l > l_max) throw std::invalid_argument("multiclass_label: l out of range");
    std::vector<double> one_hot(l_max, 0.0);
    one_hot[l - 1] = 1.0;
    return one_hot;
}

} // namespace mos::estimators
