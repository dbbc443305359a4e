// SPDX-License-Identifier: Apache-2.0

#include "bfsim/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bfsim {

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::GBF: return "GBF";
    case Algorithm::CMA: return "CMA";
    case Algorithm::MUSIC: return "MUSIC";
    case Algorithm::ORACLE: return "ORACLE";
    }
    return "?";
}

double normalized_power(const Eigen::VectorXcd& w, const SteeringVector& a_imp) {
    if (w.size() != a_imp.entries.size())
        throw dimension_error("normalized_power: weight/manifold length mismatch");
    const double denom = a_imp.entries.squaredNorm();
    if (!(denom > 0.0))
        throw std::invalid_argument("normalized_power: zero manifold");
    return std::norm(w.dot(a_imp.entries)) / denom;
}

std::optional<int> convergence_frames(const std::vector<double>& trace, double threshold) {
    if (trace.empty())
        throw std::invalid_argument("convergence_frames: empty trace");
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw std::invalid_argument("convergence_frames: threshold must be in (0, 1)");

    int first = -1;
    for (int k = static_cast<int>(trace.size()) - 1; k >= 0; --k) {
        if (trace[k] >= threshold)
            first = k;
        else
            break;
    }
    if (first < 0)
        return std::nullopt;
    return first;
}

std::vector<double> beam_pattern(const Eigen::VectorXcd& w, const ArrayGeometry& geom,
                                 const CarrierSpec& carrier, const std::vector<double>& grid,
                                 const ImperfectionSpec* compensation) {
    if (grid.empty())
        throw std::invalid_argument("beam_pattern: empty grid");

    Eigen::VectorXcd wc = w;
    if (compensation) {
        if (compensation->size() != static_cast<int>(w.size()))
            throw dimension_error("beam_pattern: compensation length mismatch");
        for (int i = 0; i < wc.size(); ++i) {
            // adapted weights absorb the per-element calibration g e^{j alpha};
            // strip it so the pattern is taken against the ideal manifold
            const double g = compensation->gain_factors[i];
            wc(i) *= std::polar(1.0, -compensation->phase_offsets[i]) / (g > 0.0 ? g : 1.0);
        }
    }

    std::vector<double> gains_db;
    gains_db.reserve(grid.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (double phi : grid) {
        const SteeringVector a = steering_vector(geom, phi, carrier);
        const double mag = std::abs(wc.dot(a.entries));
        const double db = 20.0 * std::log10(std::max(mag, 1e-300));
        gains_db.push_back(db);
        peak = std::max(peak, db);
    }
    for (double& g : gains_db)
        g -= peak;
    return gains_db;
}

double average_normalized_power(const std::vector<std::vector<double>>& traces) {
    double acc = 0.0;
    long count = 0;
    for (const auto& trace : traces) {
        for (double v : trace) {
            acc += v;
            ++count;
        }
    }
    if (count == 0)
        throw std::invalid_argument("average_normalized_power: no samples");
    return acc / static_cast<double>(count);
}

} // namespace bfsim
