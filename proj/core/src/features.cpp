#include "mos/features.hpp"

#include "mos/chansim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mos::features {

std::vector<std::vector<double>> mode_singular_values(const Tensor<double>& t) {
    std::vector<std::vector<double>> out;
    out.reserve(t.order());
    for (std::size_t d = 0; d < t.order(); ++d)
        out.push_back(linalg::singular_values(unfold(t, d)));
    return out;
}

std::vector<double> log_scale_resize(std::span<const double> sv, std::size_t n) {
    if (n < 1) throw std::invalid_argument("log_scale_resize: n must be >= 1");
    if (sv.empty()) throw std::invalid_argument("log_scale_resize: empty input");
    std::vector<double> out;
    out.reserve(n);
    const std::size_t keep = std::min<std::size_t>(sv.size(), n);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(std::log(std::max(sv[i], 1e-300)));
    while (out.size() < n) out.push_back(out.back());
    return out;
}

FeatureMatrix assemble_features(std::span<const Tensor<double>> tensors, std::size_t n) {
    if (tensors.empty()) throw std::invalid_argument("assemble_features: no tensors");
    FeatureMatrix fm;
    fm.n_common = n;
    std::vector<std::vector<double>> cols;
    for (const Tensor<double>& t : tensors) {
        for (auto& sv : mode_singular_values(t)) {
            fm.mode_sizes.push_back(sv.size());
            cols.push_back(log_scale_resize(sv, n));
        }
    }
    fm.g = RealMatrix(n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) fm.g(i, j) = cols[j][i];
    return fm;
}

LabelVector make_label(std::size_t l, std::size_t n) {
    if (l < 1 || l > n) throw std::invalid_argument("make_label: need 1 <= l <= n");
    LabelVector lv;
    lv.model_order = l;
    lv.bits.assign(n, 0);
    std::fill_n(lv.bits.begin(), l, std::uint8_t{1});
    return lv;
}

std::size_t recommend_common_size(const std::vector<std::size_t>& mode_sizes) {
    if (mode_sizes.empty()) throw std::invalid_argument("recommend_common_size: empty");
    std::vector<std::size_t> sorted = mode_sizes;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() > 1 && sorted[1] >= 10 * sorted.front()) return sorted[1];
    return sorted.front();
}

Tensor<double> preprocess_channel(const linalg::Matrix& h, std::size_t k_smooth) {
    return chansim::real_transform(chansim::forward_backward(chansim::smooth(h, k_smooth)));
}

FeatureMatrix features_from_channels(std::span<const linalg::Matrix> hs, std::size_t k_smooth,
                                     std::size_t n) {
    std::vector<Tensor<double>> pre;
    pre.reserve(hs.size());
    for (const linalg::Matrix& h : hs) pre.push_back(preprocess_channel(h, k_smooth));
    return assemble_features(pre, n);
}

FeatureMatrix siso_feature_from_channel(const linalg::Matrix& h, std::size_t k_smooth,
                                        std::size_t n) {
    linalg::Matrix row0(1, h.cols());
    for (std::size_t j = 0; j < h.cols(); ++j) row0(0, j) = h(0, j);
    const Tensor<double> pre = preprocess_channel(row0, k_smooth);
    const std::vector<double> sv = linalg::singular_values(unfold(pre, 1));
    FeatureMatrix fm;
    fm.n_common = n;
    fm.mode_sizes = {sv.size()};
    fm.g = RealMatrix(n, 1);
    const std::vector<double> col = log_scale_resize(sv, n);
    for (std::size_t i = 0; i < n; ++i) fm.g(i, 0) = col[i];
    return fm;
}

} // namespace mos::features
