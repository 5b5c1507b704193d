#pragma once

#include "mos/linalg.hpp"
#include "mos/rng.hpp"
#include "mos/tensor.hpp"

#include <cstdint>
#include <vector>

namespace mos::chansim {

using linalg::cplx;
using linalg::Matrix;

/// OFDM sampling rate f_s; delays are expressed in units of T_s = 1 / f_s.
inline constexpr double kSampleRateHz = 30.72e6;
inline constexpr double kMaxDelaySamples = 5.0;
inline constexpr double kMinDelayGapSamples = 0.01;
inline constexpr double kMaxDoaDeg = 120.0;

/// One multipath component.
struct PathParams {
    cplx amplitude;             // alpha
    double delay_samples = 0.0; // tau / T_s, in [0, kMaxDelaySamples]
    double doa_deg = 0.0;       // theta, in [0, kMaxDoaDeg]
};

struct ChannelSample {
    Matrix h; // M x N_sub, noisy
    std::vector<PathParams> paths;
    std::size_t model_order = 0; // == paths.size()
    double carrier_hz = 0.0;
    double snr_db = 0.0;
};

struct SimConfig {
    std::size_t m_antennas = 8;
    std::size_t n_sub = 100;
    std::size_t k_smooth = 50;
    std::size_t l_max = 5;
    std::size_t samples_per_class = 3000;
    double snr_db = 20.0;
    std::vector<double> carriers_hz = {0.0};
    std::uint64_t seed = 0;
};

/// ULA response a[r] = e^{j r pi cos(theta)}, half-wavelength spacing.
std::vector<cplx> steering_vector(double doa_deg, std::size_t m);

/// Noiseless M x N_sub channel: column n sums alpha_i * e^{-j 2 pi f_c tau_i}
/// * e^{-j 2 pi (n/N_sub) * delay_samples_i} * a(theta_i). The carrier term
/// uses the delay in seconds (delay_samples * T_s).
Matrix generate_channel(const std::vector<PathParams>& paths, const SimConfig& cfg,
                        double carrier_hz);

/// Adds i.i.d. circular complex Gaussian noise with per-entry variance
/// mean(|h|^2) * 10^(-snr_db/10). Throws on an all-zero input.
Matrix add_noise(const Matrix& h, double snr_db, Rng& rng);

/// Spatial smoothing over sub-carriers: slab k of the (M, N_sub-K+1, K)
/// tensor holds columns k .. k+N'-1 of h.
Tensor<cplx> smooth(const Matrix& h, std::size_t k);

/// Forward-backward averaging: appends the conjugated, index-reversed copy
/// along mode 2, doubling it. Output is centro-Hermitian by construction.
Tensor<cplx> forward_backward(const Tensor<cplx>& t);

/// Applies Q^H along every mode and drops the imaginary residue, which must
/// stay below 1e-9 * ||t||_F (violations signal a non-centro-Hermitian
/// input and throw std::invalid_argument). Norm-preserving.
Tensor<double> real_transform(const Tensor<cplx>& t);

/// Draws L paths: delays uniform in [0, 5] samples redrawn until pairwise
/// gaps reach 0.01, DoAs uniform in [0, 120] deg, amplitudes unit-variance
/// circular complex Gaussian.
std::vector<PathParams> draw_paths(std::size_t l, Rng& rng);

/// samples_per_class samples for each L in 1..l_max; per-carrier channels
/// share one path set and differ only in carrier phase and noise. Sample
/// randomness derives from (seed, class, index), so the output is
/// reproducible and order-independent.
std::vector<ChannelSample> generate_dataset(const SimConfig& cfg);

} // namespace mos::chansim
