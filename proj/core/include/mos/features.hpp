#pragma once

#include "mos/linalg.hpp"
#include "mos/tensor.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mos::features {

using linalg::RealMatrix;

/// N x D matrix of log-scaled, resized d-mode singular values; one column
/// per contributing mode (times carriers).
struct FeatureMatrix {
    RealMatrix g;
    std::size_t n_common = 0;
    std::vector<std::size_t> mode_sizes; // original sigma^(d) length per column
};

/// l ones followed by n - l zeros.
struct LabelVector {
    std::vector<std::uint8_t> bits;
    std::size_t model_order = 0;
};

/// Descending singular values of every unfolding.
std::vector<std::vector<double>> mode_singular_values(const Tensor<double>& t);

/// ln applied elementwise (zeros clamped to 1e-300 first); shorter vectors
/// are padded by repeating the last value, longer ones truncated to n.
std::vector<double> log_scale_resize(std::span<const double> sv, std::size_t n);

/// Stacks the log-scale-resized mode singular values of each tensor as
/// columns: one 3-way tensor gives N x 3, two carriers give N x 6.
FeatureMatrix assemble_features(std::span<const Tensor<double>> tensors, std::size_t n);

LabelVector make_label(std::size_t l, std::size_t n);

/// The common-size heuristic: when the smallest mode is an order of
/// magnitude below the rest, size up to the smaller of the remaining modes;
/// otherwise use the smallest. Advisory only; configuration decides.
std::size_t recommend_common_size(const std::vector<std::size_t>& mode_sizes);

/// Smoothing + forward-backward averaging + real transformation for one
/// channel matrix.
Tensor<double> preprocess_channel(const linalg::Matrix& h, std::size_t k_smooth);

/// G for one physical sample given its per-carrier channel matrices.
FeatureMatrix features_from_channels(std::span<const linalg::Matrix> hs, std::size_t k_smooth,
                                     std::size_t n);

/// Single-antenna variant: row 0 of the channel is treated as a 1 x N_sub
/// channel and only the sub-carrier-mode singular values are kept (N x 1).
FeatureMatrix siso_feature_from_channel(const linalg::Matrix& h, std::size_t k_smooth,
                                        std::size_t n);

} // namespace mos::features
