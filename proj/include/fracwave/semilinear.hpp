#pragma once

// Semilinear solver: Picard iteration on
//   G u(t) = S1(t) u0 + S2(t) u1 + int_0^t S3(t-s) f_b(u(s)) ds
// for the power nonlinearity f_b(u) = mu |u|^{b-1} u, together with the
// admissibility window for b, the derived exponent set, the explicit
// local-existence-time formula and the small-data horizon.
//
// Norms used by the iteration:
//   ||v||_{X_T} = ||v||_{C([0,T];L2)}     + ||v||_{L^b(0,T;L^{2b})}
//   ||v||_{Y_T} = ||v||_{C([0,T];H^{2r})} + ||v||_{L^p(0,T;L^q)}
// The stopping rule lives in X_T, the contraction certificate in Y_T.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracwave/linear.hpp"
#include "fracwave/norms.hpp"
#include "fracwave/spectral.hpp"
#include "fracwave/strichartz.hpp"
#include "fracwave/trajectory.hpp"

namespace fracwave::semilinear {

struct NonlinearitySpec {
    double b = 2.0;   // power, > 1
    double mu = 1.0;  // coupling, either sign

    void validate() const {
        if (!(b > 1.0)) throw std::domain_error("NonlinearitySpec: b must exceed 1");
        if (!std::isfinite(mu)) throw std::domain_error("NonlinearitySpec: mu must be finite");
    }
    /// Lipschitz-scale constant: |f_b'(u)| <= cb |u|^{b-1} with equality.
    double cb() const { return std::abs(mu) * b; }
    double operator()(double u) const {
        return u == 0.0 ? 0.0 : mu * std::pow(std::abs(u), b - 1.0) * u;
    }
    double derivative(double u) const {
        return u == 0.0 ? 0.0 : mu * b * std::pow(std::abs(u), b - 1.0);
    }
};

struct BWindow {
    double lower = 0.0;
    double upper = 0.0;
    bool degenerate = false;  // denominator d a + 4(1-a) <= 0: empty window
    bool admissible = false;  // strict: lower < b < upper
};

/// Open admissibility interval for the power b at given (d, alpha).
inline BWindow check_b_window(int d, double alpha, double b) {
    if (d < 1 || d > 3) throw std::domain_error("check_b_window: d must be 1, 2 or 3");
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("check_b_window: alpha must lie in (1,2)");
    BWindow w;
    const double da = d * alpha;
    const double denom = da + 4.0 * (1.0 - alpha);
    if (denom <= 0.0) {
        w.degenerate = true;  // no b > 1 can satisfy the two-sided bound
        return w;
    }
    w.lower = da / denom;
    w.upper = (da + 4.0) / denom;
    w.admissible = (b > w.lower) && (b < w.upper);
    return w;
}

/// Exponent set derived from the power b: gamma = d(b-1)/(4b), q = 2b, and
/// p at the midpoint of the admissible interval
/// (max(b, (d a + 4)/(d a + 4(1-a))), 1/(1 - a(1-gamma))).
inline strichartz::ExponentSet exponent_set_for_b(int d, double alpha, double b) {
    const auto w = check_b_window(d, alpha, b);
    if (w.degenerate || !w.admissible)
        throw std::domain_error("exponent_set_for_b: b outside the admissible window");
    const double gamma = d * (b - 1.0) / (4.0 * b);
    const double q = 2.0 * b;
    const double p_lo = std::max(b, w.upper);
    const double p_hi = 1.0 / (1.0 - alpha * (1.0 - gamma));
    if (!(p_lo < p_hi))
        throw std::domain_error("exponent_set_for_b: empty p interval (unexpected for in-window b)");
    auto e = strichartz::make_exponent_set(d, alpha, gamma, 0.5 * (p_lo + p_hi), q);
    e.b = b;
    return e;
}

struct ExistenceTime {
    double T = 0.0;
    double M = 0.0;  // ball radius 2C(||u0|| + ||u1||)
};

/// Local existence time T = min((3 C M^{b-1})^{-p/(p-b)}, T0), M = 2C(n0+n1).
inline ExistenceTime existence_time(double u0_norm, double u1_norm,
                                    const strichartz::ExponentSet& exps, double t0, double c) {
    if (!(u0_norm >= 0.0 && u1_norm >= 0.0)) throw std::domain_error("existence_time: norms must be nonnegative");
    if (!(t0 > 0.0)) throw std::domain_error("existence_time: T0 must be positive");
    if (!(c > 0.0)) throw std::domain_error("existence_time: constant must be positive");
    if (!(exps.b > 1.0)) throw std::domain_error("existence_time: exponent set carries no power b");
    if (!(exps.p > exps.b)) throw std::domain_error("existence_time: need p > b");
    ExistenceTime out;
    out.M = 2.0 * c * (u0_norm + u1_norm);
    if (out.M == 0.0) {
        out.T = t0;  // (3C*0)^{-p/(p-b)} is infinite; clamp to the horizon
        return out;
    }
    const double base = 3.0 * c * std::pow(out.M, exps.b - 1.0);
    out.T = std::min(std::pow(base, -exps.p / (exps.p - exps.b)), t0);
    return out;
}

/// The §-level assembled constant C = C'(1 + C_b') + 1 from a raw estimate
/// constant and the nonlinearity's Lipschitz scale.
inline double assemble_constant(double estimate_constant, double cb) {
    if (!(estimate_constant > 0.0)) throw std::domain_error("assemble_constant: estimate constant must be positive");
    if (!(cb >= 0.0)) throw std::domain_error("assemble_constant: cb must be nonnegative");
    return estimate_constant * (1.0 + cb) + 1.0;
}

struct SmallDataHorizon {
    bool hypothesis_holds = false;  // bracket^{-p(b-1)/(p(1+delta)-b)} > 1
    bool unbounded = false;         // zero data: no finite bound
    double bound = 0.0;             // valid only when hypothesis_holds
};

/// Strict upper bound [C0~ (n0+n1)]^{-p(b-1)/(p(1+delta)-b)} on horizons
/// admitting a unique weak solution for small data.
inline SmallDataHorizon small_data_horizon(double u0_norm, double u1_norm,
                                           const strichartz::ExponentSet& exps, double c0_tilde) {
    if (!(u0_norm >= 0.0 && u1_norm >= 0.0)) throw std::domain_error("small_data_horizon: norms must be nonnegative");
    if (!(c0_tilde > 0.0)) throw std::domain_error("small_data_horizon: constant must be positive");
    if (!(exps.b > 1.0)) throw std::domain_error("small_data_horizon: exponent set carries no power b");
    if (!(exps.p * (1.0 + exps.delta) > exps.b))
        throw std::domain_error("small_data_horizon: need p(1+delta) > b");
    SmallDataHorizon out;
    const double base = c0_tilde * (u0_norm + u1_norm);
    if (base == 0.0) {
        out.hypothesis_holds = true;
        out.unbounded = true;
        out.bound = std::numeric_limits<double>::infinity();
        return out;
    }
    const double expo = exps.p * (exps.b - 1.0) / (exps.p * (1.0 + exps.delta) - exps.b);
    const double bound = std::pow(base, -expo);
    if (bound > 1.0) {
        out.hypothesis_holds = true;
        out.bound = bound;
    }
    return out;
}

enum class PicardStatus { converged, max_iterations, diverged, blow_up };

struct PicardReport {
    PicardStatus status = PicardStatus::max_iterations;
    std::size_t iterate_count = 0;
    std::vector<double> contraction_ratios;  // per step, in the Y_T norm
    std::vector<double> step_norms_xt;       // ||u^{m+1} - u^m||_{X_T}
    std::vector<double> iterate_yt_norms;    // ||u^m||_{Y_T} (ball membership)
    double final_residual = 0.0;             // ||G u - u||_{X_T} on the output
    double reference_norm_xt = 0.0;          // ||u^1||_{X_T} (stopping scale)
    double chosen_t = 0.0;
    double chosen_m = 0.0;  // ball radius used for divergence detection (0 = off)
    strichartz::ExponentSet exponents;
    bool stayed_in_ball = true;
    double blow_up_time = std::numeric_limits<double>::quiet_NaN();
};

struct PicardOptions {
    double tolerance = 1e-10;
    std::size_t max_iter = 50;
    double ball_radius = 0.0;  // > 0: divergence abort when ||u^m||_{Y_T} > 10 M
    bool start_from_zero = false;  // uniqueness check: iterate from u^0 = 0
};

namespace detail {

/// Modal rows of f_b(u(t_j)) for every time node: synthesize on the basis
/// quadrature grid, apply the power pointwise, project back. Returns false
/// (with the offending time) on NaN/overflow.
inline bool nonlinear_source(const spectral::EigenBasis& basis, const NonlinearitySpec& nl,
                             const linear::SolutionTrajectory& u, linear::SourceTerm& f,
                             double& bad_time) {
    const std::size_t J = u.node_count();
    const std::size_t N = u.mode_count;
    std::vector<double> coeffs(N), vals;
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = 0; k < N; ++k) coeffs[k] = u.u(k, j);
        vals = spectral::synthesize(basis, coeffs);
        for (double& v : vals) {
            v = nl(v);
            if (!std::isfinite(v)) {
                bad_time = u.grid.nodes[j];
                return false;
            }
        }
        const auto fj = spectral::project(basis, vals);
        for (std::size_t k = 0; k < N; ++k) f.values[k * J + j] = fj[k];
    }
    return true;
}

inline linear::SolutionTrajectory difference(const linear::SolutionTrajectory& a,
                                             const linear::SolutionTrajectory& b) {
    linear::SolutionTrajectory d = a;
    for (std::size_t i = 0; i < d.modal_u.size(); ++i) d.modal_u[i] -= b.modal_u[i];
    d.modal_du.clear();
    return d;
}

inline double xt_norm(const spectral::EigenBasis& basis, const linear::SolutionTrajectory& u,
                      double b) {
    return norms::sup_sobolev(u, 0.0) + norms::mixed_lp_lq(basis, u, {b, 2.0 * b});
}

inline double yt_norm(const spectral::EigenBasis& basis, const linear::SolutionTrajectory& u,
                      const strichartz::ExponentSet& e) {
    return norms::sup_sobolev(u, e.r) + norms::mixed_lp_lq(basis, u, {e.p, e.q});
}

}  // namespace detail

struct PicardResult {
    linear::SolutionTrajectory trajectory;
    PicardReport report;
};

/// Picard iteration u^{m+1} = G u^m starting from the homogeneous linear
/// solution (or zero). Stops when ||u^{m+1} - u^m||_{X_T} falls below
/// tolerance * ||u^1||_{X_T}; certifies contraction ratios in Y_T.
inline PicardResult picard_solve(const spectral::EigenBasis& basis, double alpha,
                                 const NonlinearitySpec& nl, const spectral::ModalCoeffs& u0,
                                 const spectral::ModalCoeffs& u1,
                                 const strichartz::ExponentSet& exps, double horizon,
                                 std::size_t time_steps, const PicardOptions& opt = {}) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::invalid_argument("picard_solve: alpha must lie in (1,2)");
    if (!(horizon > 0.0)) throw std::invalid_argument("picard_solve: horizon must be positive");
    if (time_steps < 2) throw std::invalid_argument("picard_solve: need at least two time steps");
    nl.validate();
    const std::size_t N = basis.mode_count;
    if (u0.size() != N || u1.size() != N)
        throw std::invalid_argument("picard_solve: modal shapes do not match the basis");

    const auto grid = linear::TimeGrid::uniform(horizon, time_steps);
    const auto zero_f = linear::SourceTerm::zero(N, grid);

    PicardResult out;
    auto& rep = out.report;
    rep.exponents = exps;
    rep.chosen_t = horizon;
    rep.chosen_m = opt.ball_radius;

    // u^0: homogeneous linear flow, or zero (uniqueness-in-ball check)
    auto u_lin = linear::solve_linear(basis, alpha, u0, u1, zero_f, grid);
    linear::SolutionTrajectory cur = u_lin;
    if (opt.start_from_zero)
        for (auto& v : cur.modal_u) v = 0.0;

    linear::SourceTerm f = zero_f;
    double prev_step_yt = -1.0;
    for (std::size_t m = 0; m < opt.max_iter; ++m) {
        double bad_time = 0.0;
        if (!detail::nonlinear_source(basis, nl, cur, f, bad_time)) {
            rep.status = PicardStatus::blow_up;
            rep.blow_up_time = bad_time;
            out.trajectory = cur;
            return out;
        }
        auto next = linear::solve_linear(basis, alpha, u0, u1, f, grid);
        const auto diff = detail::difference(next, cur);
        const double step_xt = detail::xt_norm(basis, diff, nl.b);
        const double step_yt = detail::yt_norm(basis, diff, exps);
        const double next_yt = detail::yt_norm(basis, next, exps);
        rep.step_norms_xt.push_back(step_xt);
        rep.iterate_yt_norms.push_back(next_yt);
        if (prev_step_yt > 0.0) rep.contraction_ratios.push_back(step_yt / prev_step_yt);
        prev_step_yt = step_yt;
        ++rep.iterate_count;

        if (m == 0) rep.reference_norm_xt = detail::xt_norm(basis, next, nl.b);
        if (opt.ball_radius > 0.0) {
            if (next_yt > opt.ball_radius) rep.stayed_in_ball = false;
            if (next_yt > 10.0 * opt.ball_radius) {
                rep.status = PicardStatus::diverged;
                out.trajectory = std::move(next);
                return out;
            }
        }
        cur = std::move(next);
        if (step_xt <= opt.tolerance * rep.reference_norm_xt) {
            rep.status = PicardStatus::converged;
            break;
        }
    }

    // residual: one extra application of G on the output iterate
    double bad_time = 0.0;
    if (detail::nonlinear_source(basis, nl, cur, f, bad_time)) {
        const auto gu = linear::solve_linear(basis, alpha, u0, u1, f, grid);
        rep.final_residual = detail::xt_norm(basis, detail::difference(gu, cur), nl.b);
    }
    out.trajectory = std::move(cur);
    return out;
}

}  // namespace fracwave::semilinear
