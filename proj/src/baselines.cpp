// SPDX-License-Identifier: Apache-2.0

#include "bfsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfsim {

namespace {

Eigen::MatrixXcd noise_subspace(const CovarianceEstimate& cov) {
    const int m = static_cast<int>(cov.matrix.rows());
    if (m < 2)
        throw std::invalid_argument("music: requires at least 2 elements");
    if (cov.matrix.cols() != m)
        throw dimension_error("music: covariance is not square");

    const double scale = cov.matrix.norm();
    if (!((cov.matrix - cov.matrix.adjoint()).norm() <= 1e-9 * std::max(scale, 1.0)))
        throw std::invalid_argument("music: covariance is not Hermitian");

    const Eigen::MatrixXcd sym = 0.5 * (cov.matrix + cov.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sym);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("music: eigendecomposition failed");

    // eigenvalues ascending; single source -> M-1 noise eigenvectors
    return eig.eigenvectors().leftCols(m - 1);
}

} // namespace

Eigen::VectorXcd oracle_weights(const SteeringVector& a_imp) {
    const double nrm = a_imp.entries.norm();
    if (!(nrm > 0.0))
        throw std::invalid_argument("oracle_weights: zero steering vector");
    return a_imp.entries / nrm;
}

Eigen::VectorXcd cma_step(const Eigen::VectorXcd& weights, const Eigen::VectorXcd& snapshot,
                          const CmaConfig& cfg) {
    if (weights.size() != snapshot.size())
        throw dimension_error("cma_step: weight/snapshot length mismatch");

    const std::complex<double> y = weights.dot(snapshot);
    const std::complex<double> e = y * (std::norm(y) - cfg.dispersion);
    Eigen::VectorXcd next = weights - cfg.step_size * std::conj(e) * snapshot;
    const double nrm = next.norm();
    if (nrm > 0.0)
        next /= nrm;
    return next;
}

CovarianceEstimate sample_covariance(const Eigen::MatrixXcd& snapshots) {
    const long n = snapshots.rows();
    if (n < 1)
        throw std::invalid_argument("sample_covariance: no snapshots");

    CovarianceEstimate cov;
    cov.sample_count = n;
    Eigen::MatrixXcd r = (snapshots.transpose() * snapshots.conjugate()) / static_cast<double>(n);
    cov.matrix = 0.5 * (r + r.adjoint());
    return cov;
}

std::vector<double> music_spectrum(const CovarianceEstimate& cov, const ArrayGeometry& geom,
                                   const CarrierSpec& carrier,
                                   const std::vector<double>& grid) {
    if (grid.empty())
        throw std::invalid_argument("music_spectrum: empty grid");

    const Eigen::MatrixXcd en = noise_subspace(cov);
    std::vector<double> spectrum;
    spectrum.reserve(grid.size());
    for (double phi : grid) {
        const SteeringVector a = steering_vector(geom, phi, carrier);
        const double denom = (en.adjoint() * a.entries).squaredNorm();
        spectrum.push_back(1.0 / std::max(denom, 1e-300));
    }
    return spectrum;
}

Eigen::VectorXcd music_weights(double phi_hat, const ArrayGeometry& geom,
                               const CarrierSpec& carrier) {
    const SteeringVector a = steering_vector(geom, phi_hat, carrier);
    return a.entries / std::sqrt(static_cast<double>(a.size()));
}

MusicScanner::MusicScanner(const ArrayGeometry& geom, const CarrierSpec& carrier,
                           double start_rad, double stop_rad, double step_rad, bool circular)
    : circular_(circular), step_(step_rad) {
    if (!(step_rad > 0.0) || !(stop_rad > start_rad))
        throw std::invalid_argument("MusicScanner: invalid grid");

    const int points = static_cast<int>(std::floor((stop_rad - start_rad) / step_rad + 0.5));
    grid_.reserve(points);
    for (int i = 0; i < points; ++i)
        grid_.push_back(start_rad + i * step_rad);

    manifold_.resize(geom.element_count(), points);
    for (int i = 0; i < points; ++i)
        manifold_.col(i) = steering_vector(geom, grid_[i], carrier).entries;
}

double MusicScanner::estimate(const CovarianceEstimate& cov) const {
    const Eigen::MatrixXcd en = noise_subspace(cov);
    const Eigen::VectorXd proj =
        (en.adjoint() * manifold_).colwise().squaredNorm().transpose();

    int best = 0;
    proj.minCoeff(&best);

    const int g = static_cast<int>(grid_.size());
    const int prev = (best == 0) ? (circular_ ? g - 1 : 0) : best - 1;
    const int next = (best == g - 1) ? (circular_ ? 0 : g - 1) : best + 1;

    double offset = 0.0;
    if (prev != best && next != best) {
        const double dm = proj(prev), d0 = proj(best), dp = proj(next);
        const double denom = dm - 2.0 * d0 + dp;
        if (denom > 0.0)
            offset = 0.5 * (dm - dp) / denom;
        offset = std::clamp(offset, -0.5, 0.5);
    }
    return grid_[best] + offset * step_;
}

} // namespace bfsim
