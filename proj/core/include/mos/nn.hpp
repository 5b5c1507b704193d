#pragma once

#include "mos/linalg.hpp"
#include "mos/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mos::nn {

using linalg::RealMatrix;

enum class LayerKind { conv1d, dense };
enum class Activation { relu, sigmoid, softmax, none };

struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    std::size_t units = 0;        // filter count for conv1d, output width for dense
    std::size_t filter_size = 0;  // conv1d only
    Activation activation = Activation::none;
};

struct TrainConfig {
    double learning_rate = 2e-3;
    std::size_t epochs = 400;
    std::size_t batch_size = 128;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;
};

/// Feed-forward net over an (N, D) input: N positions, D channels.
/// Conv1D slides along positions (valid padding, stride 1, channels mix);
/// dense layers act on the flattened (channel-major) activations.
class NNModel {
public:
    NNModel(std::size_t input_len, std::size_t input_channels, std::vector<LayerSpec> layers);

    std::size_t input_len() const { return input_len_; }
    std::size_t input_channels() const { return input_channels_; }
    const std::vector<LayerSpec>& layers() const { return layers_; }
    std::size_t output_size() const;

    std::vector<std::vector<double>>& kernels() { return kernels_; }
    const std::vector<std::vector<double>>& kernels() const { return kernels_; }
    std::vector<std::vector<double>>& biases() { return biases_; }
    const std::vector<std::vector<double>>& biases() const { return biases_; }

    struct Shape {
        std::size_t len = 0, channels = 0;
    };
    const std::vector<Shape>& boundary_shapes() const { return shapes_; } // size = layers+1

private:
    std::size_t input_len_ = 0, input_channels_ = 0;
    std::vector<LayerSpec> layers_;
    std::vector<Shape> shapes_;
    std::vector<std::vector<double>> kernels_;
    std::vector<std::vector<double>> biases_;
};

/// Trainable-parameter total (kernels + biases).
std::size_t param_count(const NNModel& m);

/// Weights drawn from a truncated normal: zero mean, std sqrt(1/fan_in),
/// redrawn beyond two standard deviations. Biases zero.
NNModel init_weights(NNModel m, std::uint64_t seed);

std::vector<double> forward(const NNModel& m, const RealMatrix& g);

/// Sum over outputs of -(y ln s + (1-y) ln(1-s)); scores clamped to
/// [1e-12, 1 - 1e-12].
double loss_bce(std::span<const double> scores, std::span<const double> labels);

/// Cross-entropy against a one-hot (or soft) target on softmax scores.
double loss_cce(std::span<const double> scores, std::span<const double> one_hot);

enum class Loss { bce, cce };

struct Gradients {
    std::vector<std::vector<double>> kernels;
    std::vector<std::vector<double>> biases;
    double loss = 0.0;
};

/// Analytic gradients of the total loss for one sample. Requires a final
/// sigmoid for bce and a final softmax for cce.
Gradients backward(const NNModel& m, const RealMatrix& g, std::span<const double> labels,
                   Loss loss);

struct TrainResult {
    std::vector<double> epoch_loss; // mean per-sample loss, one entry per epoch
};

/// Mini-batch Adam with bias-corrected moments and a seeded per-epoch
/// shuffle. Throws std::runtime_error if the loss goes non-finite.
TrainResult train(NNModel& m, const std::vector<RealMatrix>& xs,
                  const std::vector<std::vector<double>>& ys, Loss loss, const TrainConfig& cfg);

/// Conv1D(f, q) -> Conv1D(1, q) -> Dense(f) -> Dense(f) -> Dense(n, sigmoid).
NNModel make_proposed(std::size_t n, std::size_t d, std::size_t f = 8, std::size_t q = 3);

/// Dense(f) -> Dense(f) -> Dense(out, softmax) over a flattened n x d input.
NNModel make_ecnet(std::size_t n, std::size_t d, std::size_t out, std::size_t f = 8);

} // namespace mos::nn
