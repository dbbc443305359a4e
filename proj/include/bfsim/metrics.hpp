// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_METRICS_HPP
#define BFSIM_METRICS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfsim/array.hpp"

namespace bfsim {

enum class Algorithm { GBF, CMA, MUSIC, ORACLE };

std::string to_string(Algorithm a);

/// One per-frame metric row; maps 1:1 onto an output CSV line.
struct TrialRecord {
    int trial = 0;
    int frame_index = 0;
    Algorithm algorithm = Algorithm::GBF;
    double normalized_power = 0.0;
    double true_phi = 0.0; // radians
    double snr_db = 0.0;
    int n_gradient_samples = 0;
    std::uint64_t trial_seed = 0;
};

/// Achieved fraction of the optimal array gain, |w^H a|^2 / ||a||^2, for a
/// unit-norm w. Equals 1 exactly when w is the matched vector up to a
/// global phase, and never exceeds 1 (Cauchy-Schwarz).
double normalized_power(const Eigen::VectorXcd& w, const SteeringVector& a_imp);

/// First frame index from which the trace stays at or above `threshold`;
/// empty if it never does.
std::optional<int> convergence_frames(const std::vector<double>& trace, double threshold);

/// Gain pattern 20 log10 |w^H a(phi)| over the grid, peak-normalized to
/// 0 dB. When a known calibration is supplied the weights are de-embedded
/// first (w_i * e^{j alpha_i} / gain_i) so the pattern is plotted against
/// the ideal manifold; position jitter is not compensated.
std::vector<double> beam_pattern(const Eigen::VectorXcd& w, const ArrayGeometry& geom,
                                 const CarrierSpec& carrier, const std::vector<double>& grid,
                                 const ImperfectionSpec* compensation = nullptr);

/// Mean normalized power over every frame of every trace, pre-convergence
/// frames included.
double average_normalized_power(const std::vector<std::vector<double>>& traces);

} // namespace bfsim

#endif // BFSIM_METRICS_HPP
