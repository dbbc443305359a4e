// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_ARRAY_HPP
#define BFSIM_ARRAY_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace bfsim {

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Planar array described by per-element positions (meters) in the x-y
/// plane. The phase center is the coordinate origin.
struct ArrayGeometry {
    std::vector<std::pair<double, double>> positions;

    int element_count() const { return static_cast<int>(positions.size()); }
};

struct CarrierSpec {
    double f_c_hz = 2.0e9;
    double c = 299792458.0;

    double wavelength() const { return c / f_c_hz; }
};

/// Per-element manifold perturbations: phase offsets (rad), gain factors,
/// and position jitter (meters). The identity spec reproduces the ideal
/// manifold bit-for-bit.
struct ImperfectionSpec {
    std::vector<double> phase_offsets;
    std::vector<double> gain_factors;
    std::vector<std::pair<double, double>> position_jitter;

    static ImperfectionSpec identity(int m) {
        ImperfectionSpec s;
        s.phase_offsets.assign(m, 0.0);
        s.gain_factors.assign(m, 1.0);
        s.position_jitter.assign(m, {0.0, 0.0});
        return s;
    }

    int size() const { return static_cast<int>(phase_offsets.size()); }
};

/// Complex array response for one arrival angle.
struct SteeringVector {
    Eigen::VectorXcd entries;

    int size() const { return static_cast<int>(entries.size()); }
};

/// Uniform linear array on the x-axis, centered on the origin:
/// x_i = (i - (M-1)/2) * spacing.
ArrayGeometry make_ula(int elements, double spacing_m);

/// Uniform circular array centered on the origin with adjacent-element
/// chord length d: radius R = d / (2 sin(pi/M)), element i at angle
/// 2*pi*i/M from the x-axis.
ArrayGeometry make_uca(int elements, double inter_element_distance_m);

/// Plane-wave delay of each element relative to the phase center,
/// tau_i = -(p_ix cos(phi) + p_iy sin(phi)) / c. An element farther along
/// the arrival direction sees the wavefront earlier (negative delay).
std::vector<double> element_delays(const ArrayGeometry& geom, double phi,
                                   const CarrierSpec& carrier);

/// Ideal manifold, entry i = exp(-j 2 pi f_c tau_i(phi)).
SteeringVector steering_vector(const ArrayGeometry& geom, double phi,
                               const CarrierSpec& carrier);

/// Manifold under imperfections, entry i =
/// gain_i * exp(-j 2 pi f_c tau~_i(phi) + j alpha_i) with tau~ computed
/// from jittered positions.
SteeringVector imperfect_steering_vector(const ArrayGeometry& geom, double phi,
                                         const CarrierSpec& carrier,
                                         const ImperfectionSpec& imp);

} // namespace bfsim

#endif // BFSIM_ARRAY_HPP
