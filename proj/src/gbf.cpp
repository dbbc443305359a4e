// SPDX-License-Identifier: Apache-2.0

#include "bfsim/gbf.hpp"

#include <cmath>
#include <stdexcept>

#include "bfsim/rng.hpp"

namespace bfsim {

WeightVector init_weights(int m) {
    if (m < 1)
        throw std::invalid_argument("init_weights: element count must be >= 1");
    WeightVector w;
    w.phases = Eigen::VectorXd::Zero(m);
    return w;
}

WeightVector init_weights_random(int m, std::uint64_t seed) {
    if (m < 1)
        throw std::invalid_argument("init_weights_random: element count must be >= 1");
    Rng rng(seed);
    WeightVector w;
    w.phases.resize(m);
    for (int i = 0; i < m; ++i)
        w.phases(i) = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    return w;
}

Eigen::VectorXcd beamform_output(const WeightVector& w, const Eigen::MatrixXcd& samples) {
    if (samples.cols() != w.size())
        throw dimension_error("beamform_output: sample columns != weight count");
    return samples * w.weights().conjugate();
}

double estimate_power(const Eigen::VectorXcd& y) {
    if (y.size() == 0)
        throw std::invalid_argument("estimate_power: empty output vector");
    return y.squaredNorm() / static_cast<double>(y.size());
}

Eigen::VectorXd power_gradient(const Eigen::MatrixXcd& samples, const WeightVector& w,
                               const Eigen::VectorXcd& y) {
    const int m = w.size();
    const int n = static_cast<int>(samples.rows());
    if (samples.cols() != m)
        throw dimension_error("power_gradient: sample columns != weight count");
    if (y.size() != n)
        throw dimension_error("power_gradient: output length != sample rows");

    Eigen::VectorXd grad(m);
    const double scale = 2.0 / (n * std::sqrt(static_cast<double>(m)));
    for (int i = 0; i < m; ++i) {
        const std::complex<double> rot = std::polar(1.0, -w.phases(i));
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
            acc += std::imag(rot * samples(k, i) * std::conj(y(k)));
        grad(i) = scale * acc;
    }
    return grad;
}

void update_weights(BeamformerState& state, const Eigen::VectorXd& grad, double step) {
    if (grad.size() != state.weights.size())
        throw dimension_error("update_weights: gradient length != weight count");
    if (!grad.allFinite() || !std::isfinite(step))
        throw std::invalid_argument("update_weights: non-finite gradient or step");
    state.weights.phases += step * grad;
    ++state.frame_counter;
}

Eigen::VectorXcd process_frame(BeamformerState& state, const SnapshotFrame& frame,
                               const GbfConfig& cfg) {
    const int n = cfg.gradient_samples;
    if (n < 1)
        throw std::invalid_argument("process_frame: gradient_samples must be >= 1");
    if (frame.samples.rows() < n)
        throw dimension_error("process_frame: frame shorter than gradient_samples");

    const Eigen::MatrixXcd obs = frame.samples.topRows(n);
    const Eigen::VectorXcd y = beamform_output(state.weights, obs);
    const double power = estimate_power(y);

    // Power-normalized step: dividing by the running estimate makes the
    // update invariant to signal scale and self-damping near the optimum,
    // where the power is largest. An all-zero frame is a fixed point.
    double step = cfg.step_size;
    if (cfg.step_mode == StepMode::PowerScaled)
        step = power > 0.0 ? cfg.step_size / power : 0.0;

    const Eigen::VectorXd grad = power_gradient(obs, state.weights, y);
    update_weights(state, grad, step);
    state.last_power = power;

    return beamform_output(state.weights, frame.samples);
}

} // namespace bfsim
