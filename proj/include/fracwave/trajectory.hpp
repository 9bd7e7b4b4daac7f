#pragma once

// Time grids, modal source terms, and solution trajectories shared by the
// solvers and the norm routines.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracwave/spectral.hpp"

namespace fracwave::linear {

struct TimeGrid {
    std::vector<double> nodes;  // 0 = t_0 < t_1 < ... < t_M = T

    static TimeGrid uniform(double horizon, std::size_t steps) {
        if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
        TimeGrid g;
        g.nodes.resize(steps + 1);
        for (std::size_t j = 0; j <= steps; ++j)
            g.nodes[j] = horizon * static_cast<double>(j) / static_cast<double>(steps);
        return g;
    }

    /// t_j = T (j/M)^chi; chi = 2 concentrates nodes near t = 0.
    static TimeGrid graded(double horizon, std::size_t steps, double chi) {
        if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
        if (!(chi >= 1.0)) throw std::invalid_argument("TimeGrid: grading exponent must be >= 1");
        TimeGrid g;
        g.nodes.resize(steps + 1);
        for (std::size_t j = 0; j <= steps; ++j)
            g.nodes[j] = horizon * std::pow(static_cast<double>(j) / static_cast<double>(steps), chi);
        return g;
    }

    std::size_t steps() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double horizon() const { return nodes.back(); }

    bool is_uniform() const {
        if (nodes.size() < 3) return true;
        const double h = nodes[1] - nodes[0];
        for (std::size_t j = 1; j + 1 < nodes.size(); ++j)
            if (std::abs((nodes[j + 1] - nodes[j]) - h) > 1e-12 * h) return false;
        return true;
    }

    void validate() const {
        if (nodes.size() < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
        if (nodes.front() != 0.0) throw std::invalid_argument("TimeGrid: must start at 0");
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
            if (!(nodes[j] < nodes[j + 1]))
                throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
    }
};

/// Modal samples f_k(t_j), interpreted as piecewise linear in t between
/// nodes and extended by zero outside (0, T).
struct SourceTerm {
    std::size_t mode_count = 0;
    TimeGrid grid;
    std::vector<double> values;  // mode-major: values[k * (steps+1) + j]

    static SourceTerm zero(std::size_t mode_count, const TimeGrid& grid) {
        SourceTerm f;
        f.mode_count = mode_count;
        f.grid = grid;
        f.values.assign(mode_count * grid.nodes.size(), 0.0);
        return f;
    }

    double operator()(std::size_t k, std::size_t j) const {
        return values[k * grid.nodes.size() + j];
    }
    double& at(std::size_t k, std::size_t j) { return values[k * grid.nodes.size() + j]; }

    bool is_zero() const {
        for (double v : values)
            if (v != 0.0) return false;
        return true;
    }

    void validate() const {
        grid.validate();
        if (values.size() != mode_count * grid.nodes.size())
            throw std::invalid_argument("SourceTerm: shape mismatch");
    }
};

/// Per-mode coefficient histories on a time grid, together with the data
/// that produced them (needed for the derivative pass, stability reports
/// and Laplace-domain checks).
struct SolutionTrajectory {
    double alpha = 1.5;
    TimeGrid grid;
    std::size_t mode_count = 0;
    std::vector<double> eigenvalues;     // copied from the basis
    std::vector<double> modal_u;         // mode-major: [k * (steps+1) + j]
    std::vector<double> modal_du;        // same shape, empty until the derivative pass
    spectral::ModalCoeffs u0, u1;        // data copies
    SourceTerm f;

    std::size_t node_count() const { return grid.nodes.size(); }
    double u(std::size_t k, std::size_t j) const { return modal_u[k * node_count() + j]; }
    double du(std::size_t k, std::size_t j) const { return modal_du[k * node_count() + j]; }
    bool has_derivative() const { return !modal_du.empty(); }

    /// Euclidean norm of the modal vector at node j (the discrete L2 norm).
    double l2_at(std::size_t j) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < mode_count; ++k) acc += u(k, j) * u(k, j);
        return std::sqrt(acc);
    }
};

}  // namespace fracwave::linear
