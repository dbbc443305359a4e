// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_CONFIG_HPP
#define BFSIM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfsim/array.hpp"
#include "bfsim/metrics.hpp"

namespace bfsim {

/// Thrown for any config defect: syntax, unknown key, bad value, or a
/// violated cross-field constraint. The message names the offending key.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ArrayType { Ula, Uca, Custom };
enum class ImperfectionMode { None, UniformPhase };

/// Full scenario description parsed from a sectioned key = value file.
/// Unknown sections or keys are rejected.
struct ScenarioConfig {
    // [array]
    ArrayType array_type = ArrayType::Uca;
    int elements = 8;
    std::optional<double> spacing_m; // default: half wavelength
    std::vector<std::pair<double, double>> custom_positions;

    // [carrier]
    double f_c_hz = 2.0e9;

    // [imperfection]
    ImperfectionMode imperfection_mode = ImperfectionMode::UniformPhase;
    double imperfection_range_rad = 1.5707963267948966; // pi/2
    std::vector<double> fixed_phase_offsets;            // overrides sampling
    std::vector<double> fixed_gain_factors;
    std::vector<std::pair<double, double>> fixed_position_jitter;

    // [signal]
    int sps = 8;
    double rolloff = 0.35;
    int rrc_span_symbols = 10;
    int frame_symbols = 32;
    std::vector<double> snr_db_list{10.0};

    // [beamformer]
    std::vector<Algorithm> algorithms{Algorithm::GBF, Algorithm::CMA, Algorithm::MUSIC,
                                      Algorithm::ORACLE};
    bool mu_auto = true; // mu = mu_value / P(frame) when true, mu_value directly otherwise
    double mu_value = 1.0;
    std::vector<int> gradient_samples_list{8};
    double cma_step = 0.01;
    double music_grid_step_deg = 0.1;

    // [aoa]
    std::optional<double> initial_deg; // absent: drawn per trial
    std::vector<double> walk_std_deg_list{0.5};

    // [pattern]
    double pattern_grid_step_deg = 0.5;
    bool pattern_compensate = true;

    // [mc]
    int trials = 100;
    int frames = 100;
    std::uint64_t master_seed = 1;

    double wavelength() const { return CarrierSpec{f_c_hz}.wavelength(); }
    double element_spacing() const { return spacing_m ? *spacing_m : wavelength() / 2.0; }
    int frame_samples() const { return frame_symbols * sps; }

    ArrayGeometry build_geometry() const;
    CarrierSpec carrier() const { return CarrierSpec{f_c_hz}; }
};

/// Parse and validate a config file. Throws config_error.
ScenarioConfig load_config(const std::string& path);

/// Parse from an in-memory string (used by tests).
ScenarioConfig parse_config(const std::string& text);

} // namespace bfsim

#endif // BFSIM_CONFIG_HPP
