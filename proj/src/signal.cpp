// SPDX-License-Identifier: Apache-2.0

#include "bfsim/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "bfsim/rng.hpp"

namespace bfsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

SymbolStream gen_qpsk(int n_symbols, std::uint64_t seed) {
    if (n_symbols < 1)
        throw std::invalid_argument("gen_qpsk: n_symbols must be >= 1");

    Rng rng(seed);
    SymbolStream stream;
    stream.symbols.reserve(n_symbols);
    for (int i = 0; i < n_symbols; ++i) {
        const unsigned idx = rng.bits2();
        stream.symbols.push_back(std::polar(1.0, kPi / 4.0 + idx * (kPi / 2.0)));
    }
    return stream;
}

std::vector<double> rrc_taps(const WaveformConfig& cfg) {
    if (cfg.samples_per_symbol < 1)
        throw std::invalid_argument("rrc_taps: samples_per_symbol must be >= 1");
    if (!(cfg.rrc_rolloff > 0.0) || cfg.rrc_rolloff > 1.0)
        throw std::invalid_argument("rrc_taps: rolloff must be in (0, 1]");
    if (cfg.rrc_span_symbols < 2 || cfg.rrc_span_symbols % 2 != 0)
        throw std::invalid_argument("rrc_taps: span must be a positive even symbol count");

    const int sps = cfg.samples_per_symbol;
    const double beta = cfg.rrc_rolloff;
    const int half = cfg.rrc_span_symbols * sps / 2;
    std::vector<double> taps(2 * half + 1);

    for (int n = -half; n <= half; ++n) {
        const double t = static_cast<double>(n) / sps; // in symbol periods
        double v;
        if (n == 0) {
            v = 1.0 + beta * (4.0 / kPi - 1.0);
        } else if (std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-12) {
            const double arg = kPi / (4.0 * beta);
            v = (beta / std::sqrt(2.0)) * ((1.0 + 2.0 / kPi) * std::sin(arg) +
                                           (1.0 - 2.0 / kPi) * std::cos(arg));
        } else {
            const double num = std::sin(kPi * t * (1.0 - beta)) +
                               4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
            const double den = kPi * t * (1.0 - 16.0 * beta * beta * t * t);
            v = num / den;
        }
        taps[n + half] = v;
    }

    double energy = 0.0;
    for (double v : taps)
        energy += v * v;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : taps)
        v *= scale;
    return taps;
}

std::vector<std::complex<double>> pulse_shape(const SymbolStream& stream,
                                              const WaveformConfig& cfg) {
    if (stream.symbols.empty())
        throw std::invalid_argument("pulse_shape: empty symbol stream");

    const auto taps = rrc_taps(cfg);
    const int sps = cfg.samples_per_symbol;
    const int n_sym = static_cast<int>(stream.symbols.size());
    const int out_len = (n_sym - 1) * sps + static_cast<int>(taps.size());

    std::vector<std::complex<double>> out(out_len, {0.0, 0.0});
    for (int i = 0; i < n_sym; ++i) {
        const std::complex<double> s = stream.symbols[i];
        const int base = i * sps;
        for (int m = 0; m < static_cast<int>(taps.size()); ++m)
            out[base + m] += s * taps[m];
    }
    return out;
}

std::vector<std::complex<double>> shaped_stream(const SymbolStream& stream,
                                                const WaveformConfig& cfg) {
    const auto full = pulse_shape(stream, cfg);
    const int sps = cfg.samples_per_symbol;
    const int delay = cfg.rrc_span_symbols * sps / 2;
    const int n = static_cast<int>(stream.symbols.size()) * sps;
    return {full.begin() + delay, full.begin() + delay + n};
}

SnapshotFrame synth_frame(const std::vector<std::complex<double>>& baseband,
                          double phi, const SteeringVector& manifold,
                          const NoiseSpec& noise, std::uint64_t seed) {
    const int rows = static_cast<int>(baseband.size());
    const int m = manifold.size();
    if (rows < 1)
        throw std::invalid_argument("synth_frame: empty baseband");
    if (m < 1)
        throw dimension_error("synth_frame: empty manifold");

    SnapshotFrame frame;
    frame.true_phi = phi;
    frame.samples.resize(rows, m);

    const double sigma = std::sqrt(noise.variance() / 2.0);
    Rng rng(seed);
    for (int n = 0; n < rows; ++n) {
        for (int i = 0; i < m; ++i) {
            std::complex<double> v = baseband[n] * manifold.entries(i);
            if (sigma > 0.0) {
                const double re = rng.gaussian();
                const double im = rng.gaussian();
                v += std::complex<double>(sigma * re, sigma * im);
            }
            frame.samples(n, i) = v;
        }
    }
    return frame;
}

AoATrajectory random_walk_aoa(double initial_phi, double step_std, int n_frames,
                              std::uint64_t seed) {
    if (n_frames < 1)
        throw std::invalid_argument("random_walk_aoa: n_frames must be >= 1");
    if (!(step_std >= 0.0))
        throw std::invalid_argument("random_walk_aoa: step_std must be >= 0");

    AoATrajectory traj;
    traj.step_std = step_std;
    traj.phi.resize(n_frames);
    traj.phi[0] = initial_phi;
    Rng rng(seed);
    for (int k = 1; k < n_frames; ++k)
        traj.phi[k] = traj.phi[k - 1] + step_std * rng.gaussian();
    return traj;
}

} // namespace bfsim
