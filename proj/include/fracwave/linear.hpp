#pragma once

// Linear solver: u_k(t) = E_{a,1}(-l t^a) u0_k + t E_{a,2}(-l t^a) u1_k
// + Duhamel, with the weakly singular Duhamel convolution computed by
// product integration: the source is the piecewise-linear interpolant and
// the kernel moments int (t-s)^{a-1} E_{a,a}(-l (t-s)^a) {1, s} ds are
// closed forms, so the singular factor carries no quadrature error.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracwave/mlf.hpp"
#include "fracwave/norms.hpp"
#include "fracwave/propagators.hpp"
#include "fracwave/spectral.hpp"
#include "fracwave/trajectory.hpp"

namespace fracwave::linear {

namespace detail {

/// Zeroth/first moments of a convolution kernel over [0, tau].
struct MomentPair {
    double m0 = 0.0;
    double m1 = 0.0;
};

/// Product-integration sum over cells [t_i, t_{i+1}], i < j, for target
/// node t_j. `moments(tau)` returns (int_0^tau K, int_0^tau s K) of the
/// kernel K. On a cell, with a = t_j - t_{i+1}, c = t_j - t_i:
///   int f(s) K(t_j - s) ds = f_i (I1 - a I0)/h + f_{i+1} (c I0 - I1)/h,
///   I0 = M0(c) - M0(a), I1 = M1(c) - M1(a).
template <class MomentFn>
double duhamel_at(const std::vector<double>& t, std::size_t j, const double* fk,
                  const MomentFn& moments, const std::vector<MomentPair>* uniform_table) {
    double acc = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
        const double a = t[j] - t[i + 1];
        const double c = t[j] - t[i];
        const double h = c - a;
        MomentPair mc, ma;
        if (uniform_table) {
            mc = (*uniform_table)[j - i];
            ma = (*uniform_table)[j - i - 1];
        } else {
            mc = moments(c);
            ma = a > 0.0 ? moments(a) : MomentPair{};
        }
        const double i0 = mc.m0 - ma.m0;
        const double i1 = mc.m1 - ma.m1;
        acc += fk[i] * (i1 - a * i0) / h + fk[i + 1] * (c * i0 - i1) / h;
    }
    return acc;
}

}  // namespace detail

inline SolutionTrajectory solve_linear(const spectral::EigenBasis& basis, double alpha,
                                       const spectral::ModalCoeffs& u0,
                                       const spectral::ModalCoeffs& u1, const SourceTerm& f,
                                       const TimeGrid& grid) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("solve_linear: alpha must lie in (1,2)");
    grid.validate();
    f.validate();
    const std::size_t N = basis.mode_count;
    if (u0.size() != N || u1.size() != N || f.mode_count != N)
        throw std::invalid_argument("solve_linear: modal shapes do not match the basis");
    if (f.grid.nodes != grid.nodes)
        throw std::invalid_argument("solve_linear: source grid must match the solver grid");

    const std::size_t J = grid.nodes.size();
    SolutionTrajectory traj;
    traj.alpha = alpha;
    traj.grid = grid;
    traj.mode_count = N;
    traj.eigenvalues = basis.eigenvalues;
    traj.u0 = u0;
    traj.u1 = u1;
    traj.f = f;
    traj.modal_u.assign(N * J, 0.0);

    const bool uniform = grid.is_uniform();
    const bool zero_source = f.is_zero();
    const std::vector<double>& t = grid.nodes;

    for (std::size_t k = 0; k < N; ++k) {
        const double lambda = basis.eigenvalues[k];
        const auto moments = [&](double tau) {
            const auto m = mlf::moment_pair(alpha, lambda, tau);
            return detail::MomentPair{m.m0, m.m1};
        };
        std::vector<detail::MomentPair> table;
        if (uniform && !zero_source) {
            table.resize(J);
            for (std::size_t m = 1; m < J; ++m) table[m] = moments(t[m]);
        }
        const double* fk = f.values.data() + k * J;
        double* uk = traj.modal_u.data() + k * J;
        uk[0] = u0[k];
        for (std::size_t j = 1; j < J; ++j) {
            const double z = -lambda * std::pow(t[j], alpha);
            double v = mlf::eval({alpha, 1.0}, z) * u0[k] + t[j] * mlf::eval({alpha, 2.0}, z) * u1[k];
            if (!zero_source)
                v += detail::duhamel_at(t, j, fk, moments, uniform ? &table : nullptr);
            uk[j] = v;
        }
    }
    return traj;
}

/// Fills modal_du per the termwise derivative formula; the Duhamel kernel
/// (t-s)^{a-2} E_{a,a-1} uses the same exact-moment product integration.
/// At t = 0 the derivative equals u1.
inline SolutionTrajectory solve_linear_derivative(SolutionTrajectory traj) {
    const double alpha = traj.alpha;
    const std::size_t N = traj.mode_count;
    const std::size_t J = traj.node_count();
    const std::vector<double>& t = traj.grid.nodes;
    const bool uniform = traj.grid.is_uniform();
    const bool zero_source = traj.f.is_zero();
    traj.modal_du.assign(N * J, 0.0);

    for (std::size_t k = 0; k < N; ++k) {
        const double lambda = traj.eigenvalues[k];
        const auto moments = [&](double tau) {
            const auto m = mlf::dmoment_pair(alpha, lambda, tau);
            return detail::MomentPair{m.m0, m.m1};
        };
        std::vector<detail::MomentPair> table;
        if (uniform && !zero_source) {
            table.resize(J);
            for (std::size_t m = 1; m < J; ++m) table[m] = moments(t[m]);
        }
        const double* fk = traj.f.values.data() + k * J;
        double* duk = traj.modal_du.data() + k * J;
        duk[0] = traj.u1[k];
        for (std::size_t j = 1; j < J; ++j) {
            const double z = -lambda * std::pow(t[j], alpha);
            double v = -lambda * std::pow(t[j], alpha - 1.0) * mlf::eval({alpha, alpha}, z) * traj.u0[k] +
                       mlf::eval({alpha, 1.0}, z) * traj.u1[k];
            if (!zero_source)
                v += detail::duhamel_at(t, j, fk, moments, uniform ? &table : nullptr);
            duk[j] = v;
        }
    }
    return traj;
}

/// Norm-ratio diagnostics for the two a-priori estimates. The constants are
/// non-constructive in the theory; only boundedness/stability of the ratios
/// is meaningful. Zero data reports ratio 0.
struct StabilityReport {
    double sup_l2 = 0.0;        // ||u||_{C([0,T];L2)}
    double data_c_l2 = 0.0;     // ||u0||_{L2} + ||u1||_{H^-1} + ||f||_{L1 L2}
    double ratio_c_l2 = 0.0;
    double w11 = 0.0;           // ||u||_{W^{1,1}(0,T;L2)}  (if derivative present)
    double data_w11 = 0.0;      // ||u0||_{H^{2r}} + ||u1||_{H^-1} + ||f||_{L1 L2}
    double ratio_w11 = 0.0;
    double r = 0.0;
    bool has_w11 = false;
};

inline StabilityReport stability_report(const linear::SolutionTrajectory& traj, double r = 0.125) {
    if (!(r > 0.0 && r < 0.25)) throw std::invalid_argument("stability_report: r must lie in (0, 1/4)");
    StabilityReport rep;
    rep.r = r;
    rep.sup_l2 = norms::sup_sobolev(traj, 0.0);
    const auto ev = std::span<const double>(traj.eigenvalues);
    rep.data_c_l2 = norms::sobolev_norm(ev, traj.u0, 0.0) + norms::sobolev_norm(ev, traj.u1, -0.5) +
                    norms::source_l1_l2(traj.f);
    rep.ratio_c_l2 = rep.data_c_l2 > 0.0 ? rep.sup_l2 / rep.data_c_l2 : 0.0;
    if (traj.has_derivative()) {
        rep.has_w11 = true;
        rep.w11 = norms::w1l_norm(traj, 1.0);
        rep.data_w11 = norms::sobolev_norm(ev, traj.u0, r) + norms::sobolev_norm(ev, traj.u1, -0.5) +
                       norms::source_l1_l2(traj.f);
        rep.ratio_w11 = rep.data_w11 > 0.0 ? rep.w11 / rep.data_w11 : 0.0;
    }
    return rep;
}

}  // namespace fracwave::linear
