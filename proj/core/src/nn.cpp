#include "mos/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mos::nn {

namespace {

std::size_t kernel_count(const LayerSpec& spec, const NNModel::Shape& in) {
    if (spec.kind == LayerKind::conv1d) return spec.units * spec.filter_size * in.channels;
    return spec.units * in.len * in.channels;
}

double clamp_score(double s) { return std::clamp(s, 1e-12, 1.0 - 1e-12); }

void apply_activation(Activation act, std::vector<double>& z, std::vector<double>& a) {
    a.resize(z.size());
    switch (act) {
    case Activation::relu:
        for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
        break;
    case Activation::sigmoid:
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] >= 0.0) {
                a[i] = 1.0 / (1.0 + std::exp(-z[i]));
            } else {
                const double e = std::exp(z[i]);
                a[i] = e / (1.0 + e);
            }
        }
        break;
    case Activation::softmax: {
        const double zmax = z.empty() ? 0.0 : *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            a[i] = std::exp(z[i] - zmax);
            sum += a[i];
        }
        for (double& v : a) v /= sum;
        break;
    }
    case Activation::none:
        a = z;
        break;
    }
}

struct Trace {
    // acts[0] is the channel-major input; acts[i+1] the output of layer i.
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> pre;
};

Trace forward_trace(const NNModel& m, const RealMatrix& g) {
    if (g.rows() != m.input_len() || g.cols() != m.input_channels())
        throw std::invalid_argument("forward: input shape mismatch");
    Trace tr;
    tr.acts.resize(m.layers().size() + 1);
    tr.pre.resize(m.layers().size());

    std::vector<double>& x0 = tr.acts[0];
    x0.resize(g.size());
    for (std::size_t c = 0; c < g.cols(); ++c)
        for (std::size_t p = 0; p < g.rows(); ++p) x0[c * g.rows() + p] = g(p, c);

    for (std::size_t li = 0; li < m.layers().size(); ++li) {
        const LayerSpec& spec = m.layers()[li];
        const NNModel::Shape in = m.boundary_shapes()[li];
        const NNModel::Shape out = m.boundary_shapes()[li + 1];
        const std::vector<double>& x = tr.acts[li];
        std::vector<double>& z = tr.pre[li];
        z.assign(out.len * out.channels, 0.0);
        const std::vector<double>& w = m.kernels()[li];
        const std::vector<double>& b = m.biases()[li];
        if (spec.kind == LayerKind::conv1d) {
            const std::size_t q = spec.filter_size;
            for (std::size_t f = 0; f < out.channels; ++f) {
                for (std::size_t p = 0; p < out.len; ++p) {
                    double acc = b[f];
                    for (std::size_t qq = 0; qq < q; ++qq)
                        for (std::size_t c = 0; c < in.channels; ++c)
                            acc += w[(f * q + qq) * in.channels + c] * x[c * in.len + p + qq];
                    z[f * out.len + p] = acc;
                }
            }
        } else {
            const std::size_t nin = in.len * in.channels;
            for (std::size_t u = 0; u < spec.units; ++u) {
                double acc = b[u];
                const double* wrow = w.data() + u * nin;
                for (std::size_t i = 0; i < nin; ++i) acc += wrow[i] * x[i];
                z[u] = acc;
            }
        }
        apply_activation(spec.activation, z, tr.acts[li + 1]);
    }
    return tr;
}

} // namespace

NNModel::NNModel(std::size_t input_len, std::size_t input_channels, std::vector<LayerSpec> layers)
    : input_len_(input_len), input_channels_(input_channels), layers_(std::move(layers)) {
    if (input_len_ < 1 || input_channels_ < 1 || layers_.empty())
        throw std::invalid_argument("NNModel: empty input or layer list");
    shapes_.push_back({input_len_, input_channels_});
    for (const LayerSpec& spec : layers_) {
        const Shape in = shapes_.back();
        if (spec.units < 1) throw std::invalid_argument("NNModel: layer units must be >= 1");
        Shape out;
        if (spec.kind == LayerKind::conv1d) {
            if (spec.filter_size < 1)
                throw std::invalid_argument("NNModel: conv filter size must be >= 1");
            if (in.len + 1 < spec.filter_size)
                throw std::invalid_argument("NNModel: conv filter longer than its input");
            out = {in.len + 1 - spec.filter_size, spec.units};
        } else {
            out = {spec.units, 1};
        }
        shapes_.push_back(out);
        kernels_.emplace_back(kernel_count(spec, in), 0.0);
        biases_.emplace_back(spec.units, 0.0);
    }
}

std::size_t NNModel::output_size() const {
    return shapes_.back().len * shapes_.back().channels;
}

std::size_t param_count(const NNModel& m) {
    std::size_t total = 0;
    for (std::size_t li = 0; li < m.layers().size(); ++li)
        total += m.kernels()[li].size() + m.biases()[li].size();
    return total;
}

NNModel init_weights(NNModel m, std::uint64_t seed) {
    Rng rng(seed);
    for (std::size_t li = 0; li < m.layers().size(); ++li) {
        const LayerSpec& spec = m.layers()[li];
        const NNModel::Shape in = m.boundary_shapes()[li];
        const std::size_t fan_in = spec.kind == LayerKind::conv1d
                                       ? spec.filter_size * in.channels
                                       : in.len * in.channels;
        const double std_dev = std::sqrt(1.0 / static_cast<double>(fan_in));
        for (double& w : m.kernels()[li]) {
            double z;
            do {
                z = rng.normal();
            } while (std::abs(z) > 2.0);
            w = z * std_dev;
        }
        std::fill(m.biases()[li].begin(), m.biases()[li].end(), 0.0);
    }
    return m;
}

std::vector<double> forward(const NNModel& m, const RealMatrix& g) {
    return forward_trace(m, g).acts.back();
}

double loss_bce(std::span<const double> scores, std::span<const double> labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("loss_bce: score/label length mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double s = clamp_score(scores[i]);
        loss -= labels[i] * std::log(s) + (1.0 - labels[i]) * std::log(1.0 - s);
    }
    return loss;
}

double loss_cce(std::span<const double> scores, std::span<const double> one_hot) {
    if (scores.size() != one_hot.size())
        throw std::invalid_argument("loss_cce: score/label length mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (one_hot[i] != 0.0) loss -= one_hot[i] * std::log(clamp_score(scores[i]));
    return loss;
}

Gradients backward(const NNModel& m, const RealMatrix& g, std::span<const double> labels,
                   Loss loss) {
    const Trace tr = forward_trace(m, g);
    const std::vector<double>& out = tr.acts.back();
    if (labels.size() != out.size())
        throw std::invalid_argument("backward: label length does not match output");
    const Activation final_act = m.layers().back().activation;
    if ((loss == Loss::bce && final_act != Activation::sigmoid) ||
        (loss == Loss::cce && final_act != Activation::softmax))
        throw std::invalid_argument("backward: unsupported loss/final-activation pairing");

    Gradients grad;
    grad.kernels.resize(m.layers().size());
    grad.biases.resize(m.layers().size());
    grad.loss = loss == Loss::bce ? loss_bce(out, labels) : loss_cce(out, labels);

    // dL/dz of the final layer; both pairings reduce to scores - labels.
    std::vector<double> dz(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) dz[i] = out[i] - labels[i];

    for (std::size_t li = m.layers().size(); li-- > 0;) {
        const LayerSpec& spec = m.layers()[li];
        const NNModel::Shape in = m.boundary_shapes()[li];
        const NNModel::Shape outs = m.boundary_shapes()[li + 1];
        const std::vector<double>& x = tr.acts[li];
        const std::vector<double>& w = m.kernels()[li];
        std::vector<double>& gw = grad.kernels[li];
        std::vector<double>& gb = grad.biases[li];
        gw.assign(w.size(), 0.0);
        gb.assign(m.biases()[li].size(), 0.0);
        std::vector<double> dx(x.size(), 0.0);

        if (spec.kind == LayerKind::conv1d) {
            const std::size_t q = spec.filter_size;
            for (std::size_t f = 0; f < outs.channels; ++f) {
                for (std::size_t p = 0; p < outs.len; ++p) {
                    const double d = dz[f * outs.len + p];
                    gb[f] += d;
                    for (std::size_t qq = 0; qq < q; ++qq)
                        for (std::size_t c = 0; c < in.channels; ++c) {
                            gw[(f * q + qq) * in.channels + c] += d * x[c * in.len + p + qq];
                            dx[c * in.len + p + qq] += d * w[(f * q + qq) * in.channels + c];
                        }
                }
            }
        } else {
            const std::size_t nin = in.len * in.channels;
            for (std::size_t u = 0; u < spec.units; ++u) {
                const double d = dz[u];
                gb[u] = d;
                const double* wrow = w.data() + u * nin;
                double* gwrow = gw.data() + u * nin;
                for (std::size_t i = 0; i < nin; ++i) {
                    gwrow[i] = d * x[i];
                    dx[i] += d * wrow[i];
                }
            }
        }

        if (li == 0) break;
        // chain through the previous layer's activation
        const Activation prev_act = m.layers()[li - 1].activation;
        const std::vector<double>& prev_z = tr.pre[li - 1];
        const std::vector<double>& prev_a = tr.acts[li];
        dz.assign(dx.size(), 0.0);
        switch (prev_act) {
        case Activation::relu:
            for (std::size_t i = 0; i < dx.size(); ++i) dz[i] = prev_z[i] > 0.0 ? dx[i] : 0.0;
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < dx.size(); ++i)
                dz[i] = dx[i] * prev_a[i] * (1.0 - prev_a[i]);
            break;
        case Activation::none:
            dz = dx;
            break;
        case Activation::softmax:
            throw std::invalid_argument("backward: softmax is only supported as the final layer");
        }
    }
    return grad;
}

TrainResult train(NNModel& m, const std::vector<RealMatrix>& xs,
                  const std::vector<std::vector<double>>& ys, Loss loss, const TrainConfig& cfg) {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("train: empty dataset or size mismatch");
    if (cfg.batch_size < 1 || cfg.learning_rate < 0.0)
        throw std::invalid_argument("train: invalid configuration");

    const std::size_t n = xs.size();
    const std::size_t n_layers = m.layers().size();
    std::vector<std::vector<double>> mk(n_layers), vk(n_layers), mb(n_layers), vb(n_layers);
    for (std::size_t li = 0; li < n_layers; ++li) {
        mk[li].assign(m.kernels()[li].size(), 0.0);
        vk[li].assign(m.kernels()[li].size(), 0.0);
        mb[li].assign(m.biases()[li].size(), 0.0);
        vb[li].assign(m.biases()[li].size(), 0.0);
    }

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    TrainResult result;
    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = n; i-- > 1;)
            std::swap(order[i], order[rng.below(i + 1)]);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t stop = std::min(n, start + cfg.batch_size);
            const double scale = 1.0 / static_cast<double>(stop - start);
            Gradients acc;
            bool first = true;
            for (std::size_t i = start; i < stop; ++i) {
                Gradients g = backward(m, xs[order[i]], ys[order[i]], loss);
                loss_sum += g.loss;
                if (first) {
                    acc = std::move(g);
                    first = false;
                } else {
                    for (std::size_t li = 0; li < n_layers; ++li) {
                        for (std::size_t j = 0; j < acc.kernels[li].size(); ++j)
                            acc.kernels[li][j] += g.kernels[li][j];
                        for (std::size_t j = 0; j < acc.biases[li].size(); ++j)
                            acc.biases[li][j] += g.biases[li][j];
                    }
                }
            }
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
            auto adam_update = [&](std::vector<double>& w, std::vector<double>& mm,
                                   std::vector<double>& vv, const std::vector<double>& gsum) {
                for (std::size_t j = 0; j < w.size(); ++j) {
                    const double gj = gsum[j] * scale;
                    mm[j] = cfg.adam_beta1 * mm[j] + (1.0 - cfg.adam_beta1) * gj;
                    vv[j] = cfg.adam_beta2 * vv[j] + (1.0 - cfg.adam_beta2) * gj * gj;
                    const double mhat = mm[j] / bc1;
                    const double vhat = vv[j] / bc2;
                    w[j] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
                }
            };
            for (std::size_t li = 0; li < n_layers; ++li) {
                adam_update(m.kernels()[li], mk[li], vk[li], acc.kernels[li]);
                adam_update(m.biases()[li], mb[li], vb[li], acc.biases[li]);
            }
        }
        const double epoch_loss = loss_sum / static_cast<double>(n);
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("train: loss diverged at epoch " + std::to_string(epoch));
        result.epoch_loss.push_back(epoch_loss);
    }
    return result;
}

NNModel make_proposed(std::size_t n, std::size_t d, std::size_t f, std::size_t q) {
    return NNModel(n, d,
                   {{LayerKind::conv1d, f, q, Activation::relu},
                    {LayerKind::conv1d, 1, q, Activation::relu},
                    {LayerKind::dense, f, 0, Activation::relu},
                    {LayerKind::dense, f, 0, Activation::relu},
                    {LayerKind::dense, n, 0, Activation::sigmoid}});
}

NNModel make_ecnet(std::size_t n, std::size_t d, std::size_t out, std::size_t f) {
    return NNModel(n, d,
                   {{LayerKind::dense, f, 0, Activation::relu},
                    {LayerKind::dense, f, 0, Activation::relu},
                    {LayerKind::dense, out, 0, Activation::softmax}});
}

} // namespace mos::nn
