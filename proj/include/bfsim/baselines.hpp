// SPDX-License-Identifier: Apache-2.0

#ifndef BFSIM_BASELINES_HPP
#define BFSIM_BASELINES_HPP

#include <Eigen/Dense>
#include <vector>

#include "bfsim/array.hpp"

namespace bfsim {

struct CovarianceEstimate {
    Eigen::MatrixXcd matrix; // M x M, Hermitian
    long sample_count = 0;
};

/// CMA(2,2) stochastic-gradient settings. For unit-modulus constellations
/// the dispersion constant R2 = E[|s|^4]/E[|s|^2] equals 1.
struct CmaConfig {
    double step_size = 0.01;
    double dispersion = 1.0;
};

/// Matched weights for a known manifold: a / ||a||. The supremum of
/// |w^H a|^2 over unit-norm w, by Cauchy-Schwarz.
Eigen::VectorXcd oracle_weights(const SteeringVector& a_imp);

/// One CMA(2,2) update: y = w^H r, e = y (|y|^2 - R2),
/// w <- w - step e* r, renormalized to unit norm.
Eigen::VectorXcd cma_step(const Eigen::VectorXcd& weights, const Eigen::VectorXcd& snapshot,
                          const CmaConfig& cfg);

/// Hermitian average of snapshot outer products, (1/N) sum r[n] r[n]^H.
CovarianceEstimate sample_covariance(const Eigen::MatrixXcd& snapshots);

/// Single-source MUSIC pseudo-spectrum over `grid` (radians), scanning the
/// ideal manifold: 1 / (a(phi)^H E_n E_n^H a(phi)) with E_n the M-1
/// smallest-eigenvalue eigenvectors of the covariance.
std::vector<double> music_spectrum(const CovarianceEstimate& cov, const ArrayGeometry& geom,
                                   const CarrierSpec& carrier,
                                   const std::vector<double>& grid);

/// Conventional steering to the estimated arrival angle, a(phi_hat)/sqrt(M).
Eigen::VectorXcd music_weights(double phi_hat, const ArrayGeometry& geom,
                               const CarrierSpec& carrier);

/// Grid scanner with the per-angle manifold precomputed once, for running
/// MUSIC every frame without re-evaluating steering vectors. Also refines
/// the peak by fitting a parabola to the noise-subspace projection around
/// the minimum (wrapping around the grid ends when `circular`).
class MusicScanner {
  public:
    MusicScanner(const ArrayGeometry& geom, const CarrierSpec& carrier, double start_rad,
                 double stop_rad, double step_rad, bool circular);

    /// Estimated arrival angle in radians.
    double estimate(const CovarianceEstimate& cov) const;

    const std::vector<double>& grid() const { return grid_; }

  private:
    std::vector<double> grid_;
    Eigen::MatrixXcd manifold_; // M x grid points
    bool circular_;
    double step_;
};

} // namespace bfsim

#endif // BFSIM_BASELINES_HPP
