// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_GBF_HPP
#define BFSIM_GBF_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "bfsim/signal.hpp"

namespace bfsim {

/// Phase-only weight parametrization: omega_i = (1/sqrt(M)) e^{j theta_i}.
/// The weight vector has unit norm by construction, for every phase
/// assignment, so no renormalization step exists anywhere in the update.
struct WeightVector {
    Eigen::VectorXd phases;

    int size() const { return static_cast<int>(phases.size()); }

    Eigen::VectorXcd weights() const {
        const int m = size();
        const double amp = 1.0 / std::sqrt(static_cast<double>(m));
        Eigen::VectorXcd w(m);
        for (int i = 0; i < m; ++i)
            w(i) = std::polar(amp, phases(i));
        return w;
    }
};

enum class StepMode {
    Fixed,       // use step_size as mu directly
    PowerScaled, // mu = step_size / P(frame): normalized ascent, scale-invariant
};

struct GbfConfig {
    double step_size = 1.0;
    StepMode step_mode = StepMode::PowerScaled;
    int gradient_samples = 8; // N
    int frame_length = 256;   // N'
};

struct BeamformerState {
    WeightVector weights;
    long frame_counter = 0;
    double last_power = 0.0;
};

/// All-zero phases, omega_i = 1/sqrt(M). The seeded overload draws
/// phases uniformly from [0, 2 pi) for experiments with random starts.
WeightVector init_weights(int m);
WeightVector init_weights_random(int m, std::uint64_t seed);

/// y[n] = sum_i conj(omega_i) r_i[n] over the rows of `samples` (N x M).
Eigen::VectorXcd beamform_output(const WeightVector& w, const Eigen::MatrixXcd& samples);

/// Mean squared magnitude of the outputs.
double estimate_power(const Eigen::VectorXcd& y);

/// d P / d theta_i = (2 / (N sqrt(M))) sum_n Im(e^{-j theta_i} r_i[n] y*[n]);
/// `y` must be beamform_output(w, samples). Real-valued, and zero at every
/// stationary point of the power estimate.
Eigen::VectorXd power_gradient(const Eigen::MatrixXcd& samples, const WeightVector& w,
                               const Eigen::VectorXcd& y);

/// theta_i += step * grad_i. Rejects non-finite gradients.
void update_weights(BeamformerState& state, const Eigen::VectorXd& grad, double step);

/// One adaptation cycle: beamform the first N samples with the current
/// weights, estimate power, take one gradient step, then emit the whole
/// frame beamformed with the updated weights.
Eigen::VectorXcd process_frame(BeamformerState& state, const SnapshotFrame& frame,
                               const GbfConfig& cfg);

} // namespace bfsim

#endif // BFSIM_GBF_HPP
