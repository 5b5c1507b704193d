#pragma once

#include "mos/features.hpp"
#include "mos/nn.hpp"

#include <vector>

namespace mos::estimators {

enum class Method { proposed, ecnet, large };

struct OrderEstimate {
    std::size_t order = 0;
    std::vector<double> scores; // per-neuron, per-class, or LaRGE prediction errors
    Method method = Method::proposed;
};

struct LargeConfig {
    double rho = 0.57;
    std::size_t min_noise_points = 2;
};

/// Counts output neurons scoring above xi (positions need not be contiguous).
OrderEstimate proposed_estimate(const nn::NNModel& model, const linalg::RealMatrix& g, double xi);

/// argmax class + 1; ties break toward the smaller class index.
OrderEstimate ecnet_estimate(const nn::NNModel& model, const linalg::RealMatrix& g);

/// Linear regression of global eigenvalues. Global eigenvalue i is the
/// product over modes of the squared i-th singular values (i up to the
/// shortest mode). For each candidate i a line is fit to the log global
/// eigenvalues below it; order = the largest i whose relative prediction
/// error exceeds rho, or 0. scores holds the error sequence (index i-1).
OrderEstimate large_estimate(const std::vector<std::vector<double>>& mode_sv,
                             const LargeConfig& cfg);

/// Reconstructs per-mode singular value heads from log-scaled features for
/// feeding large_estimate (rows beyond the shortest original mode are
/// padding or truncation and are not used).
std::vector<std::vector<double>> large_input_from_features(const features::FeatureMatrix& fm);

/// One-hot training target for the multiclass baseline.
std::vector<double> multiclass_label(std::size_t l, std::size_t l_max);

} // namespace mos::estimators
