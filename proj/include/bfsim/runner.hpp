// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_RUNNER_HPP
#define BFSIM_RUNNER_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfsim/baselines.hpp"
#include "bfsim/config.hpp"
#include "bfsim/gbf.hpp"
#include "bfsim/metrics.hpp"

namespace bfsim {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One point of the experiment grid: a single value for each sweepable key.
struct SimPoint {
    double snr_db = 10.0;
    int gradient_samples = 8;
    double walk_std_deg = 0.5;
};

/// Everything one trial produces: per-frame records in emission order,
/// per-algorithm power traces, and the final weights for pattern plots.
struct TrialOutput {
    std::vector<TrialRecord> records;
    std::map<Algorithm, std::vector<double>> traces;
    std::map<Algorithm, Eigen::VectorXcd> final_weights;
    ImperfectionSpec imperfections;
    double final_phi = 0.0;
};

/// Shared per-run state built once: geometry, carrier, and the MUSIC grid
/// scanner (null when MUSIC is not configured).
struct RunContext {
    ArrayGeometry geometry;
    CarrierSpec carrier;
    std::shared_ptr<const MusicScanner> scanner;

    static RunContext build(const ScenarioConfig& cfg);
};

/// Angular domain scanned and plotted for a geometry: [0, pi) for a ULA
/// (its manifold cannot tell front from back), [0, 2 pi) otherwise.
double angular_span(ArrayType type);

/// Run one seeded trial at one grid point. Every configured algorithm
/// consumes the identical frame sequence.
TrialOutput run_trial(const ScenarioConfig& cfg, const RunContext& ctx, const SimPoint& point,
                      int trial);

/// Per-frame records for all trials at a fixed grid point; requires each
/// sweepable list in the config to hold exactly one value. Writes the CSV
/// atomically; output is independent of the worker count.
void run_simulate(const ScenarioConfig& cfg, const std::string& out_path, int workers);

/// Aggregate rows over exactly one swept key (the list with more than one
/// value among snr_db, gradient_samples, walk_std_deg).
void run_sweep(const ScenarioConfig& cfg, const std::string& out_path, int workers);

/// Beam patterns of each algorithm's final weights after one trial.
void run_pattern(const ScenarioConfig& cfg, const std::string& out_path, int workers);

/// Normalized-power level a trace must hold, from the reported frame on,
/// to count as converged in sweep aggregates. Set below the low-SNR
/// steady-state band so the statistic measures convergence time rather
/// than stochastic dips around the optimum.
inline constexpr double kConvergenceThreshold = 0.95;

} // namespace bfsim

#endif // BFSIM_RUNNER_HPP
