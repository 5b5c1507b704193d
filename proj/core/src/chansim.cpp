#include "mos/chansim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mos::chansim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<cplx> steering_vector(double doa_deg, std::size_t m) {
    if (m < 1) throw std::invalid_argument("steering_vector: m must be >= 1");
    const double mu = std::numbers::pi * std::cos(doa_deg * std::numbers::pi / 180.0);
    std::vector<cplx> a(m);
    for (std::size_t r = 0; r < m; ++r) a[r] = std::polar(1.0, static_cast<double>(r) * mu);
    return a;
}

Matrix generate_channel(const std::vector<PathParams>& paths, const SimConfig& cfg,
                        double carrier_hz) {
    if (paths.empty()) throw std::invalid_argument("generate_channel: no paths");
    const std::size_t m = cfg.m_antennas, n_sub = cfg.n_sub;
    Matrix h(m, n_sub);
    for (const PathParams& p : paths) {
        const std::vector<cplx> steer = steering_vector(p.doa_deg, m);
        const double tau_sec = p.delay_samples / kSampleRateHz;
        const cplx carrier_phase = std::polar(1.0, -kTwoPi * carrier_hz * tau_sec);
        const cplx gain = p.amplitude * carrier_phase;
        for (std::size_t n = 0; n < n_sub; ++n) {
            const cplx col = gain * std::polar(1.0, -kTwoPi * (static_cast<double>(n) /
                                                              static_cast<double>(n_sub)) *
                                                        p.delay_samples);
            for (std::size_t r = 0; r < m; ++r) h(r, n) += steer[r] * col;
        }
    }
    return h;
}

Matrix add_noise(const Matrix& h, double snr_db, Rng& rng) {
    double p_sig = 0.0;
    for (const cplx& x : h.entries()) p_sig += linalg::abs_sq(x);
    p_sig /= static_cast<double>(h.size());
    if (p_sig == 0.0) throw std::invalid_argument("add_noise: all-zero input, SNR undefined");
    const double var = p_sig * std::pow(10.0, -snr_db / 10.0);
    if (var == 0.0) return h;
    const double comp_std = std::sqrt(var / 2.0);
    Matrix out = h;
    for (cplx& x : out.entries()) x += cplx(comp_std * rng.normal(), comp_std * rng.normal());
    return out;
}

Tensor<cplx> smooth(const Matrix& h, std::size_t k) {
    if (k < 1 || k >= h.cols()) throw std::invalid_argument("smooth: need 1 <= K < N_sub");
    const std::size_t m = h.rows();
    const std::size_t n_prime = h.cols() - k + 1;
    Tensor<cplx> t({m, n_prime, k});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n_prime; ++j)
            for (std::size_t kk = 0; kk < k; ++kk) t(i, j, kk) = h(i, kk + j);
    return t;
}

Tensor<cplx> forward_backward(const Tensor<cplx>& t) {
    if (t.order() != 3) throw std::invalid_argument("forward_backward: expects a 3-way tensor");
    const std::size_t m = t.dim(0), n = t.dim(1), k = t.dim(2);
    Tensor<cplx> y({m, n, 2 * k});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t kk = 0; kk < k; ++kk) {
                y(i, j, kk) = t(i, j, kk);
                y(i, j, k + kk) = std::conj(t(m - 1 - i, n - 1 - j, k - 1 - kk));
            }
    return y;
}

namespace {

// In-place application of Q_p^H to every mode-d fiber. Q_p has two nonzero
// entries per row, so each fiber costs O(p): entries pair up as
// (x_i, x_{p-1-i}) -> ((x_i + x_{p-1-i})/sqrt2, j(x_{p-1-i} - x_i)/sqrt2),
// with an odd-length middle element passed through.
void apply_q_adjoint_mode(Tensor<cplx>& t, std::size_t mode) {
    const std::size_t p = t.dim(mode);
    const std::size_t half = p / 2;
    const std::size_t off = p - half;
    const std::size_t step = t.strides()[mode];
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<cplx> fiber(p);
    detail::for_each_fiber(t.shape(), t.strides(), mode, [&](std::size_t, std::size_t base) {
        for (std::size_t i = 0; i < p; ++i) fiber[i] = t[base + i * step];
        for (std::size_t i = 0; i < half; ++i) {
            t[base + i * step] = r * (fiber[i] + fiber[p - 1 - i]);
            t[base + (off + i) * step] = cplx(0.0, r) * (fiber[p - 1 - i] - fiber[i]);
        }
    });
}

} // namespace

Tensor<double> real_transform(const Tensor<cplx>& t) {
    Tensor<cplx> work = t;
    for (std::size_t d = 0; d < work.order(); ++d) apply_q_adjoint_mode(work, d);

    const double norm = frobenius_norm(t);
    double max_imag = 0.0;
    for (const cplx& x : work.entries()) max_imag = std::max(max_imag, std::abs(x.imag()));
    if (max_imag > 1e-9 * norm)
        throw std::invalid_argument("real_transform: imaginary residue too large; "
                                    "input is not centro-Hermitian");
    std::vector<double> out(work.numel());
    for (std::size_t i = 0; i < work.numel(); ++i) out[i] = work[i].real();
    return Tensor<double>(work.shape(), std::move(out));
}

std::vector<PathParams> draw_paths(std::size_t l, Rng& rng) {
    std::vector<double> delays(l);
    bool ok = false;
    while (!ok) {
        for (double& d : delays) d = rng.uniform(0.0, kMaxDelaySamples);
        ok = true;
        for (std::size_t i = 0; i < l && ok; ++i)
            for (std::size_t j = i + 1; j < l; ++j)
                if (std::abs(delays[i] - delays[j]) < kMinDelayGapSamples) {
                    ok = false;
                    break;
                }
    }
    std::vector<PathParams> paths(l);
    for (std::size_t i = 0; i < l; ++i) paths[i].delay_samples = delays[i];
    for (std::size_t i = 0; i < l; ++i) paths[i].doa_deg = rng.uniform(0.0, kMaxDoaDeg);
    for (std::size_t i = 0; i < l; ++i)
        paths[i].amplitude = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
    return paths;
}

std::vector<ChannelSample> generate_dataset(const SimConfig& cfg) {
    if (cfg.l_max < 1 || cfg.samples_per_class < 1 || cfg.carriers_hz.empty())
        throw std::invalid_argument("generate_dataset: invalid configuration");
    std::vector<ChannelSample> out;
    out.reserve(cfg.l_max * cfg.samples_per_class * cfg.carriers_hz.size());
    for (std::size_t l = 1; l <= cfg.l_max; ++l) {
        for (std::size_t s = 0; s < cfg.samples_per_class; ++s) {
            Rng rng(derive_stream(cfg.seed, l, s));
            const std::vector<PathParams> paths = draw_paths(l, rng);
            for (double fc : cfg.carriers_hz) {
                ChannelSample cs;
                cs.paths = paths;
                cs.model_order = l;
                cs.carrier_hz = fc;
                cs.snr_db = cfg.snr_db;
                cs.h = add_noise(generate_channel(paths, cfg, fc), cfg.snr_db, rng);
                out.push_back(std::move(cs));
            }
        }
    }
    return out;
}

} // namespace mos::chansim
