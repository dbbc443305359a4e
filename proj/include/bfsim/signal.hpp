// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_SIGNAL_HPP
#define BFSIM_SIGNAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "bfsim/array.hpp"

namespace bfsim {

enum class Modulation { QPSK };

struct SymbolStream {
    std::vector<std::complex<double>> symbols;
    Modulation modulation = Modulation::QPSK;
};

/// Transmit pulse shaping: upsampling factor plus root-raised-cosine
/// filter parameters. Taps are normalized to unit energy.
struct WaveformConfig {
    int samples_per_symbol = 8;
    double rrc_rolloff = 0.35;
    int rrc_span_symbols = 10;
};

/// Per-element complex AWGN level. variance() is the total complex noise
/// variance sigma^2 = reference_power / 10^(snr_db/10); snr_db = +inf
/// turns the noise off.
struct NoiseSpec {
    double snr_db = 10.0;
    double reference_power = 1.0;

    bool noiseless() const { return std::isinf(snr_db) && snr_db > 0.0; }
    double variance() const {
        return noiseless() ? 0.0 : reference_power / std::pow(10.0, snr_db / 10.0);
    }
};

/// Frame-indexed arrival angles, phi[k] = phi[k-1] + N(0, step_std^2).
struct AoATrajectory {
    std::vector<double> phi;
    double step_std = 0.0;
};

/// N' consecutive array snapshots for one frame; row n is r[n].
struct SnapshotFrame {
    Eigen::MatrixXcd samples; // N' x M
    double true_phi = 0.0;
    int frame_index = 0;
};

/// Uniform i.i.d. draws from the unit-modulus QPSK constellation
/// (phases pi/4, 3pi/4, 5pi/4, 7pi/4). Deterministic per seed.
SymbolStream gen_qpsk(int n_symbols, std::uint64_t seed);

/// Unit-energy root-raised-cosine taps, length span*sps + 1.
std::vector<double> rrc_taps(const WaveformConfig& cfg);

/// Upsample by cfg.samples_per_symbol and convolve with the RRC filter.
/// Returns the full convolution, length (symbols-1)*sps + span*sps + 1;
/// a single unit symbol reproduces the impulse response exactly.
std::vector<std::complex<double>> pulse_shape(const SymbolStream& stream,
                                              const WaveformConfig& cfg);

/// pulse_shape with the group delay trimmed: exactly symbols * sps
/// samples, sample i*sps sitting on symbol i's filter peak.
std::vector<std::complex<double>> shaped_stream(const SymbolStream& stream,
                                                const WaveformConfig& cfg);

/// Single-source narrowband channel: row n = baseband[n] * a + eta[n]
/// with eta i.i.d. circularly-symmetric complex Gaussian of variance
/// noise.variance() per element. Deterministic per seed.
SnapshotFrame synth_frame(const std::vector<std::complex<double>>& baseband,
                          double phi, const SteeringVector& manifold,
                          const NoiseSpec& noise, std::uint64_t seed);

/// Gaussian random walk over frames, phi[0] = initial_phi.
AoATrajectory random_walk_aoa(double initial_phi, double step_std, int n_frames,
                              std::uint64_t seed);

} // namespace bfsim

#endif // BFSIM_SIGNAL_HPP
