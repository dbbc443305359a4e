// SPDX-License-Identifier: Apache-2.0

#include "bfsim/array.hpp"

#include <cmath>

namespace bfsim {

namespace {
constexpr double kPi = 3.14159265358979323846;

double plane_wave_delay(double px, double py, double phi, double c) {
    return -(px * std::cos(phi) + py * std::sin(phi)) / c;
}
} // namespace

ArrayGeometry make_ula(int elements, double spacing_m) {
    if (elements < 1)
        throw std::invalid_argument("make_ula: elements must be >= 1");
    if (!(spacing_m > 0.0))
        throw std::invalid_argument("make_ula: spacing must be > 0");

    ArrayGeometry geom;
    geom.positions.reserve(elements);
    const double center = 0.5 * (elements - 1);
    for (int i = 0; i < elements; ++i)
        geom.positions.emplace_back((i - center) * spacing_m, 0.0);
    return geom;
}

ArrayGeometry make_uca(int elements, double inter_element_distance_m) {
    if (elements < 2)
        throw std::invalid_argument("make_uca: elements must be >= 2");
    if (!(inter_element_distance_m > 0.0))
        throw std::invalid_argument("make_uca: inter-element distance must be > 0");

    const double radius = inter_element_distance_m / (2.0 * std::sin(kPi / elements));
    ArrayGeometry geom;
    geom.positions.reserve(elements);
    for (int i = 0; i < elements; ++i) {
        const double ang = 2.0 * kPi * i / elements;
        geom.positions.emplace_back(radius * std::cos(ang), radius * std::sin(ang));
    }
    return geom;
}

std::vector<double> element_delays(const ArrayGeometry& geom, double phi,
                                   const CarrierSpec& carrier) {
    std::vector<double> delays;
    delays.reserve(geom.positions.size());
    for (const auto& [px, py] : geom.positions)
        delays.push_back(plane_wave_delay(px, py, phi, carrier.c));
    return delays;
}

SteeringVector steering_vector(const ArrayGeometry& geom, double phi,
                               const CarrierSpec& carrier) {
    const int m = geom.element_count();
    SteeringVector sv;
    sv.entries.resize(m);
    for (int i = 0; i < m; ++i) {
        const auto& [px, py] = geom.positions[i];
        const double tau = plane_wave_delay(px, py, phi, carrier.c);
        sv.entries(i) = std::polar(1.0, -2.0 * kPi * carrier.f_c_hz * tau);
    }
    return sv;
}

SteeringVector imperfect_steering_vector(const ArrayGeometry& geom, double phi,
                                         const CarrierSpec& carrier,
                                         const ImperfectionSpec& imp) {
    const int m = geom.element_count();
    if (imp.size() != m || static_cast<int>(imp.gain_factors.size()) != m ||
        static_cast<int>(imp.position_jitter.size()) != m)
        throw dimension_error("imperfect_steering_vector: spec length != element count");

    SteeringVector sv;
    sv.entries.resize(m);
    for (int i = 0; i < m; ++i) {
        const auto& [px, py] = geom.positions[i];
        const auto& [dx, dy] = imp.position_jitter[i];
        const double tau = plane_wave_delay(px + dx, py + dy, phi, carrier.c);
        sv.entries(i) = std::polar(imp.gain_factors[i],
                                   -2.0 * kPi * carrier.f_c_hz * tau + imp.phase_offsets[i]);
    }
    return sv;
}

} // namespace bfsim
