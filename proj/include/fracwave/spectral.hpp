#pragma once

// Eigenpairs of the spatial operator with Dirichlet boundary: analytic sine
// bases on intervals/rectangles/boxes, plus a 1D finite-difference
// discretization of -(a u')' + V u, with projection/synthesis between
// physical samples on a quadrature grid and modal coefficients.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fracwave/gauss.hpp"

namespace fracwave::spectral {

using ModalCoeffs = std::vector<double>;

struct EigenBasis {
    int dimension = 1;
    std::size_t mode_count = 0;
    std::vector<double> eigenvalues;   // ascending, strictly positive
    std::vector<double> quad_weights;  // size G
    std::vector<double> quad_nodes;    // G x dimension, row-major
    std::vector<double> phi;           // mode-major: phi[k*G + g], L2-orthonormal

    std::size_t grid_size() const { return quad_weights.size(); }

    std::span<const double> mode(std::size_t k) const {
        if (k >= mode_count) throw std::out_of_range("EigenBasis::mode: index");
        return {phi.data() + k * grid_size(), grid_size()};
    }

    void validate() const {
        if (eigenvalues.size() != mode_count) throw std::logic_error("EigenBasis: eigenvalue count");
        if (mode_count == 0) throw std::logic_error("EigenBasis: empty");
        if (eigenvalues.front() <= 0.0) throw std::logic_error("EigenBasis: eigenvalues must be positive");
        if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end()))
            throw std::logic_error("EigenBasis: eigenvalues must be ascending");
        if (phi.size() != mode_count * grid_size()) throw std::logic_error("EigenBasis: phi shape");
    }
};

namespace detail {

/// Composite Gauss-Legendre nodes/weights on (0, L) resolving sine mode
/// n_max with >= 8 nodes per shortest wavelength.
inline void axis_grid(double length, std::size_t n_max, int oversample,
                      std::vector<double>& nodes, std::vector<double>& weights) {
    const std::size_t panels = std::max<std::size_t>(2, (n_max * static_cast<std::size_t>(oversample) + 1) / 2);
    static const GaussRule rule = gauss_legendre(10);
    nodes.clear();
    weights.clear();
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = length * static_cast<double>(p) / static_cast<double>(panels);
        const double b = length * static_cast<double>(p + 1) / static_cast<double>(panels);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            nodes.push_back(mid + half * rule.nodes[j]);
            weights.push_back(half * rule.weights[j]);
        }
    }
}

}  // namespace detail

/// Dirichlet Laplacian on (0, L): lambda_n = (n pi / L)^2, phi_n = sqrt(2/L) sin(n pi x / L).
inline EigenBasis build_interval_basis(double length, std::size_t mode_count, int oversample = 1) {
    if (!(length > 0.0)) throw std::invalid_argument("build_interval_basis: length must be positive");
    if (mode_count == 0) throw std::invalid_argument("build_interval_basis: mode_count must be >= 1");
    if (oversample < 1) throw std::invalid_argument("build_interval_basis: oversample must be >= 1");
    EigenBasis basis;
    basis.dimension = 1;
    basis.mode_count = mode_count;
    detail::axis_grid(length, mode_count, oversample, basis.quad_nodes, basis.quad_weights);
    const std::size_t G = basis.quad_weights.size();
    basis.eigenvalues.resize(mode_count);
    basis.phi.resize(mode_count * G);
    const double pi = 3.14159265358979323846;
    const double amp = std::sqrt(2.0 / length);
    for (std::size_t n = 1; n <= mode_count; ++n) {
        basis.eigenvalues[n - 1] = (n * pi / length) * (n * pi / length);
        for (std::size_t g = 0; g < G; ++g)
            basis.phi[(n - 1) * G + g] = amp * std::sin(n * pi * basis.quad_nodes[g] / length);
    }
    basis.validate();
    return basis;
}

/// Tensor sine basis on a rectangle/box: the mode_count smallest eigenvalues
/// sum_i (n_i pi / L_i)^2, ties broken lexicographically by multi-index.
inline EigenBasis build_rectangle_basis(std::span<const double> lengths, std::size_t mode_count,
                                        int oversample = 1) {
    const std::size_t d = lengths.size();
    if (d < 2 || d > 3) throw std::invalid_argument("build_rectangle_basis: need 2 or 3 lengths");
    for (double L : lengths)
        if (!(L > 0.0)) throw std::invalid_argument("build_rectangle_basis: lengths must be positive");
    if (mode_count == 0) throw std::invalid_argument("build_rectangle_basis: mode_count must be >= 1");
    if (oversample < 1) throw std::invalid_argument("build_rectangle_basis: oversample must be >= 1");

    const double pi = 3.14159265358979323846;
    // Enumerate all multi-indices up to a per-axis cutoff large enough to
    // contain the mode_count smallest sums (index mode_count+2 per axis is
    // always sufficient since eigenvalues grow per axis).
    const std::size_t cutoff = mode_count + 2;
    struct Cand {
        double lambda;
        std::array<std::size_t, 3> idx;
    };
    std::vector<Cand> cands;
    const auto axis_lambda = [&](std::size_t n, std::size_t ax) {
        return (static_cast<double>(n) * pi / lengths[ax]) * (static_cast<double>(n) * pi / lengths[ax]);
    };
    for (std::size_t nx = 1; nx <= cutoff; ++nx)
        for (std::size_t ny = 1; ny <= cutoff; ++ny) {
            if (d == 2) {
                cands.push_back({axis_lambda(nx, 0) + axis_lambda(ny, 1), {nx, ny, 0}});
            } else {
                for (std::size_t nz = 1; nz <= cutoff; ++nz)
                    cands.push_back({axis_lambda(nx, 0) + axis_lambda(ny, 1) + axis_lambda(nz, 2),
                                     {nx, ny, nz}});
            }
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return a.idx < b.idx;
    });
    cands.resize(mode_count);

    std::array<std::size_t, 3> n_max = {1, 1, 1};
    for (const Cand& c : cands)
        for (std::size_t ax = 0; ax < d; ++ax) n_max[ax] = std::max(n_max[ax], c.idx[ax]);

    std::array<std::vector<double>, 3> ax_nodes, ax_weights;
    for (std::size_t ax = 0; ax < d; ++ax)
        detail::axis_grid(lengths[ax], n_max[ax], oversample, ax_nodes[ax], ax_weights[ax]);

    EigenBasis basis;
    basis.dimension = static_cast<int>(d);
    basis.mode_count = mode_count;

    std::array<std::size_t, 3> m = {ax_nodes[0].size(), ax_nodes[1].size(),
                                    d == 3 ? ax_nodes[2].size() : 1};
    const std::size_t G = m[0] * m[1] * m[2];
    basis.quad_weights.resize(G);
    basis.quad_nodes.resize(G * d);
    for (std::size_t ix = 0, g = 0; ix < m[0]; ++ix)
        for (std::size_t iy = 0; iy < m[1]; ++iy)
            for (std::size_t iz = 0; iz < m[2]; ++iz, ++g) {
                double w = ax_weights[0][ix] * ax_weights[1][iy];
                basis.quad_nodes[g * d + 0] = ax_nodes[0][ix];
                basis.quad_nodes[g * d + 1] = ax_nodes[1][iy];
                if (d == 3) {
                    w *= ax_weights[2][iz];
                    basis.quad_nodes[g * d + 2] = ax_nodes[2][iz];
                }
                basis.quad_weights[g] = w;
            }

    basis.eigenvalues.resize(mode_count);
    basis.phi.resize(mode_count * G);
    for (std::size_t k = 0; k < mode_count; ++k) {
        basis.eigenvalues[k] = cands[k].lambda;
        double amp = 1.0;
        for (std::size_t ax = 0; ax < d; ++ax) amp *= std::sqrt(2.0 / lengths[ax]);
        for (std::size_t g = 0; g < G; ++g) {
            double v = amp;
            for (std::size_t ax = 0; ax < d; ++ax)
                v *= std::sin(static_cast<double>(cands[k].idx[ax]) * pi *
                              basis.quad_nodes[g * d + ax] / lengths[ax]);
            basis.phi[k * G + g] = v;
        }
    }
    basis.validate();
    return basis;
}

/// Symmetric second-order finite differences for -(a u')' + V u on (0, L)
/// with Dirichlet ends; mesh_size cells, mesh_size-1 interior unknowns.
/// Eigenfunctions are normalized against the trapezoid (here: midpoint at
/// interior nodes) quadrature, which is the basis grid.
inline EigenBasis build_fd_basis(const std::function<double(double)>& coeff_a,
                                 const std::function<double(double)>& potential_v, double length,
                                 std::size_t mesh_size, std::size_t mode_count = 0) {
    if (!(length > 0.0)) throw std::invalid_argument("build_fd_basis: length must be positive");
    if (mesh_size < 3) throw std::invalid_argument("build_fd_basis: mesh too coarse");
    const std::size_t n = mesh_size - 1;
    if (mode_count == 0) mode_count = std::min<std::size_t>(n, 64);
    if (mode_count > n) throw std::invalid_argument("build_fd_basis: mode_count exceeds mesh resolution");
    const double h = length / static_cast<double>(mesh_size);

    std::vector<double> a_half(mesh_size), v_node(n);
    for (std::size_t i = 0; i < mesh_size; ++i) {
        a_half[i] = coeff_a((static_cast<double>(i) + 0.5) * h);
        if (!(a_half[i] > 0.0))
            throw std::invalid_argument("build_fd_basis: coefficient a must be strictly positive");
    }
    for (std::size_t i = 0; i < n; ++i) {
        v_node[i] = potential_v(static_cast<double>(i + 1) * h);
        if (v_node[i] < 0.0)
            throw std::invalid_argument("build_fd_basis: potential V must be nonnegative");
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        A(i, i) = (a_half[i] + a_half[i + 1]) / (h * h) + v_node[i];
        if (i + 1 < n) {
            A(i, i + 1) = -a_half[i + 1] / (h * h);
            A(i + 1, i) = A(i, i + 1);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("build_fd_basis: eigensolver failed");

    EigenBasis basis;
    basis.dimension = 1;
    basis.mode_count = mode_count;
    basis.quad_weights.assign(n, h);
    basis.quad_nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) basis.quad_nodes[i] = static_cast<double>(i + 1) * h;
    basis.eigenvalues.resize(mode_count);
    basis.phi.resize(mode_count * n);
    for (std::size_t k = 0; k < mode_count; ++k) {
        basis.eigenvalues[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
        // eigenvectors are Euclidean-orthonormal; rescale to L2(quad)
        const double scale = 1.0 / std::sqrt(h);
        // fix sign: first nonzero component positive, for reproducibility
        double sign = 0.0;
        for (std::size_t i = 0; i < n && sign == 0.0; ++i) {
            const double v = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            if (std::abs(v) > 1e-12) sign = v > 0.0 ? 1.0 : -1.0;
        }
        if (sign == 0.0) sign = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            basis.phi[k * n + i] =
                sign * scale * solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }
    basis.validate();
    return basis;
}

/// Quadrature approximation of <h, phi_k> for each mode.
inline ModalCoeffs project(const EigenBasis& basis, std::span<const double> samples) {
    const std::size_t G = basis.grid_size();
    if (samples.size() != G) throw std::invalid_argument("project: sample count mismatch");
    ModalCoeffs coeffs(basis.mode_count);
    for (std::size_t k = 0; k < basis.mode_count; ++k) {
        double acc = 0.0;
        const double* pk = basis.phi.data() + k * G;
        for (std::size_t g = 0; g < G; ++g) acc += basis.quad_weights[g] * pk[g] * samples[g];
        coeffs[k] = acc;
    }
    return coeffs;
}

/// Field values sum_k c_k phi_k on the quadrature grid.
inline std::vector<double> synthesize(const EigenBasis& basis, std::span<const double> coeffs) {
    if (coeffs.size() != basis.mode_count) throw std::invalid_argument("synthesize: coefficient count mismatch");
    const std::size_t G = basis.grid_size();
    std::vector<double> samples(G, 0.0);
    for (std::size_t k = 0; k < basis.mode_count; ++k) {
        const double c = coeffs[k];
        if (c == 0.0) continue;
        const double* pk = basis.phi.data() + k * G;
        for (std::size_t g = 0; g < G; ++g) samples[g] += c * pk[g];
    }
    return samples;
}

/// Samples of a pointwise function of position on the quadrature grid.
inline std::vector<double> sample(const EigenBasis& basis,
                                  const std::function<double(std::span<const double>)>& f) {
    const std::size_t G = basis.grid_size();
    const std::size_t d = static_cast<std::size_t>(basis.dimension);
    std::vector<double> out(G);
    for (std::size_t g = 0; g < G; ++g)
        out[g] = f(std::span<const double>(basis.quad_nodes.data() + g * d, d));
    return out;
}

/// Max deviation of the discrete Gram matrix from the identity.
inline double gram_error(const EigenBasis& basis) {
    const std::size_t G = basis.grid_size();
    double worst = 0.0;
    for (std::size_t j = 0; j < basis.mode_count; ++j)
        for (std::size_t k = j; k < basis.mode_count; ++k) {
            double acc = 0.0;
            const double* pj = basis.phi.data() + j * G;
            const double* pk = basis.phi.data() + k * G;
            for (std::size_t g = 0; g < G; ++g) acc += basis.quad_weights[g] * pj[g] * pk[g];
            worst = std::max(worst, std::abs(acc - (j == k ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace fracwave::spectral
