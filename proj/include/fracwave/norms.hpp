#pragma once

// Spectral Sobolev norms, mixed space-time Lebesgue norms, sup norms and the
// W^{1,ell} norm. Continuous-time norms are grid quadratures; sup norms are
// grid maxima.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fracwave/gauss.hpp"
#include "fracwave/spectral.hpp"
#include "fracwave/trajectory.hpp"

namespace fracwave::norms {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MixedNormSpec {
    double p = 2.0;  // temporal exponent, may be kInf
    double q = 2.0;  // spatial exponent, may be kInf

    void validate() const {
        if (!(p >= 1.0)) throw std::invalid_argument("MixedNormSpec: p must be >= 1");
        if (!(q >= 1.0)) throw std::invalid_argument("MixedNormSpec: q must be >= 1");
    }
};

/// (sum_k lambda_k^{2 sigma} |c_k|^2)^{1/2}; sigma = 0 is L2, sigma = -1/2
/// realizes the H^{-1} norm by duality.
inline double sobolev_norm(std::span<const double> eigenvalues, std::span<const double> coeffs,
                           double sigma) {
    if (coeffs.size() != eigenvalues.size()) throw std::invalid_argument("sobolev_norm: size mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        acc += std::pow(eigenvalues[k], 2.0 * sigma) * coeffs[k] * coeffs[k];
    return std::sqrt(acc);
}

inline double sobolev_norm(const spectral::EigenBasis& basis, const spectral::ModalCoeffs& coeffs,
                           double sigma) {
    return sobolev_norm(std::span<const double>(basis.eigenvalues), std::span<const double>(coeffs),
                        sigma);
}

/// L^q(Omega) norm by synthesis on the quadrature grid; max for q = inf.
inline double spatial_lq(const spectral::EigenBasis& basis, std::span<const double> coeffs, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("spatial_lq: q must be >= 1");
    const auto samples = spectral::synthesize(basis, coeffs);
    if (q == kInf) {
        double m = 0.0;
        for (double v : samples) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (std::size_t g = 0; g < samples.size(); ++g)
        acc += basis.quad_weights[g] * std::pow(std::abs(samples[g]), q);
    return std::pow(acc, 1.0 / q);
}

namespace detail {

/// Temporal L^p norm of per-node values by composite quadrature (max if p = inf).
inline double temporal_lp(const linear::TimeGrid& grid, std::span<const double> node_values, double p) {
    if (p == kInf) {
        double m = 0.0;
        for (double v : node_values) m = std::max(m, std::abs(v));
        return m;
    }
    std::vector<double> powed(node_values.size());
    for (std::size_t j = 0; j < node_values.size(); ++j) powed[j] = std::pow(std::abs(node_values[j]), p);
    const double integral = integrate_samples(grid.nodes, powed);
    return std::pow(integral, 1.0 / p);
}

}  // namespace detail

/// ||u||_{L^p(0,T;L^q)} on a trajectory; spatial norms per node, temporal
/// quadrature (grid maxima for infinite exponents).
inline double mixed_lp_lq(const spectral::EigenBasis& basis, const linear::SolutionTrajectory& traj,
                          const MixedNormSpec& spec) {
    spec.validate();
    const std::size_t J = traj.node_count();
    std::vector<double> per_node(J);
    std::vector<double> c(traj.mode_count);
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = 0; k < traj.mode_count; ++k) c[k] = traj.u(k, j);
        per_node[j] = spec.q == 2.0 ? traj.l2_at(j) : spatial_lq(basis, c, spec.q);
    }
    return detail::temporal_lp(traj.grid, per_node, spec.p);
}

/// sup over grid nodes of the D(A^sigma) norm of the trajectory.
inline double sup_sobolev(const linear::SolutionTrajectory& traj, double sigma) {
    double m = 0.0;
    std::vector<double> c(traj.mode_count);
    for (std::size_t j = 0; j < traj.node_count(); ++j) {
        for (std::size_t k = 0; k < traj.mode_count; ++k) c[k] = traj.u(k, j);
        m = std::max(m, sobolev_norm(traj.eigenvalues, c, sigma));
    }
    return m;
}

/// ||f||_{L^1(0,T;L^2)} of a modal source by temporal quadrature.
inline double source_l1_l2(const linear::SourceTerm& f) {
    const std::size_t J = f.grid.nodes.size();
    std::vector<double> per_node(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < f.mode_count; ++k) acc += f(k, j) * f(k, j);
        per_node[j] = std::sqrt(acc);
    }
    return integrate_samples(f.grid.nodes, per_node);
}

/// ||u||_{W^{1,ell}(0,T;L^2)} = ||u||_{L^ell L^2} + ||u'||_{L^ell L^2};
/// requires the derivative pass and ell in [1, 1/(2-alpha)).
inline double w1l_norm(const linear::SolutionTrajectory& traj, double ell) {
    if (!traj.has_derivative()) throw std::invalid_argument("w1l_norm: derivative missing");
    if (!(ell >= 1.0)) throw std::domain_error("w1l_norm: ell must be >= 1");
    if (!(ell < 1.0 / (2.0 - traj.alpha)))
        throw std::domain_error("w1l_norm: ell must be < 1/(2-alpha)");
    const std::size_t J = traj.node_count();
    std::vector<double> nu(J), ndu(J);
    for (std::size_t j = 0; j < J; ++j) {
        double au = 0.0, adu = 0.0;
        for (std::size_t k = 0; k < traj.mode_count; ++k) {
            au += traj.u(k, j) * traj.u(k, j);
            adu += traj.du(k, j) * traj.du(k, j);
        }
        nu[j] = std::sqrt(au);
        ndu[j] = std::sqrt(adu);
    }
    return detail::temporal_lp(traj.grid, nu, ell) + detail::temporal_lp(traj.grid, ndu, ell);
}

}  // namespace fracwave::norms
