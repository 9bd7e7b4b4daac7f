#pragma once

// Space-time estimate exponent calculus: the admissibility conditions on
// (p, q, gamma), the derived orders s = max(0, gamma - 1/alpha) and
// r = min(1 - 1/alpha, gamma), the constant-growth exponent delta, and an
// empirical fit of the constant C = C0 (1+T)^delta over random data draws.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fracwave/linear.hpp"
#include "fracwave/norms.hpp"
#include "fracwave/spectral.hpp"

namespace fracwave::strichartz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ExponentSet {
    int d = 3;
    double alpha = 1.5;
    double gamma = 0.375;
    double q = 4.0;   // spatial exponent (may be kInf)
    double p = 4.0;   // temporal exponent (may be kInf)
    double s = 0.0;   // = max(0, gamma - 1/alpha)
    double r = 0.0;   // = min(1 - 1/alpha, gamma)
    double delta = 0.0;
    double ell = 1.0;  // in [1, 1/(2-alpha))
    double b = 0.0;    // nonlinearity power when derived from one, else 0
};

struct Admissibility {
    bool q_is_range = false;  // gamma = d/4: any q in (2, inf), caller picks
    double q = 0.0;           // unique q otherwise
    double p_sup = kInf;      // supremum of admissible p (exclusive when finite)
    bool p_must_be_inf = false;
};

inline void check_domain(int d, double alpha, double gamma) {
    if (d < 1 || d > 3) throw std::domain_error("exponents: d must be 1, 2 or 3");
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("exponents: alpha must lie in (1,2)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("exponents: gamma must lie in (0,1)");
}

/// The q rule and the supremum of admissible p.
inline Admissibility admissible_exponents(int d, double alpha, double gamma) {
    check_domain(d, alpha, gamma);
    Admissibility a;
    const double quarter = static_cast<double>(d) / 4.0;
    if (gamma > quarter) {
        a.q = kInf;
    } else if (gamma == quarter) {
        a.q_is_range = true;  // any q in (2, inf)
    } else {
        a.q = 2.0 * d / (d - 4.0 * gamma);
    }
    if (gamma > 1.0 - 1.0 / alpha) {
        a.p_sup = 1.0 / (1.0 - alpha * (1.0 - gamma));  // strict upper bound
    } else {
        a.p_must_be_inf = true;
    }
    return a;
}

/// Exact membership test of (p, q) in the admissible region.
inline bool is_admissible(int d, double alpha, double gamma, double p, double q) {
    check_domain(d, alpha, gamma);
    if (!(p >= 1.0) || !(q >= 1.0)) return false;
    const double quarter = static_cast<double>(d) / 4.0;
    if (gamma > quarter) {
        if (q != kInf) return false;
    } else if (gamma == quarter) {
        if (!(q > 2.0 && q < kInf)) return false;
    } else {
        const double q_req = 2.0 * d / (d - 4.0 * gamma);
        if (std::abs(q - q_req) > 1e-12 * q_req) return false;
    }
    if (gamma > 1.0 - 1.0 / alpha) {
        if (!(p < 1.0 / (1.0 - alpha * (1.0 - gamma)))) return false;  // strict
    } else {
        if (p != kInf) return false;
    }
    return true;
}

struct DerivedOrders {
    double s = 0.0;
    double r = 0.0;
};

inline DerivedOrders derived_orders(double alpha, double gamma) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("derived_orders: alpha must lie in (1,2)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("derived_orders: gamma must lie in (0,1)");
    return {std::max(0.0, gamma - 1.0 / alpha), std::min(1.0 - 1.0 / alpha, gamma)};
}

/// The exponent of (1+T) in the estimate constant: a max of four terms for
/// p = inf and five terms for p < inf.
inline double growth_exponent(double alpha, double gamma, double s, double r, double p) {
    if (p == kInf) {
        return std::max({alpha * (1.0 - gamma) - 1.0, 1.0 - alpha * (gamma - s),
                         1.0 - alpha * (r - s), alpha * (1.0 - r) - 1.0});
    }
    const double ip = 1.0 / p;
    return std::max({ip, 1.0 - alpha * (gamma - s) + ip, 1.0 - alpha * (r - s),
                     alpha * (1.0 - r) - 1.0, alpha * (1.0 - gamma) - 1.0 + ip});
}

/// Full exponent set for a given gamma and concrete (p, q).
inline ExponentSet make_exponent_set(int d, double alpha, double gamma, double p, double q) {
    if (!is_admissible(d, alpha, gamma, p, q))
        throw std::invalid_argument("make_exponent_set: (p, q) not admissible for (d, alpha, gamma)");
    ExponentSet e;
    e.d = d;
    e.alpha = alpha;
    e.gamma = gamma;
    e.p = p;
    e.q = q;
    const auto so = derived_orders(alpha, gamma);
    e.s = so.s;
    e.r = so.r;
    e.delta = growth_exponent(alpha, gamma, e.s, e.r, p);
    e.ell = 0.5 * (1.0 + 1.0 / (2.0 - alpha));  // midpoint of [1, 1/(2-alpha))
    return e;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

struct ConstantFit {
    std::vector<double> horizons;
    std::vector<double> max_ratio;                // per horizon, over draws
    std::vector<std::vector<double>> draw_ratios;  // [horizon][trial], 0 for degenerate draws
    std::size_t degenerate_draws = 0;
    double c0_hat = 0.0;
    double delta_hat = 0.0;
    double delta_theory = 0.0;
};

/// Empirical ratio (||u||_{C H^{2r}} + ||u||_{L^p L^q}) /
/// (||u0||_{H^{2gamma}} + ||u1||_{H^{2s}}) over random homogeneous draws
/// (modal coefficients xi_k lambda_k^{-sigma-0.51}), then a least-squares fit
/// of log(max ratio) against log(1+T) on horizons >= 1. Deterministic given
/// the seed: each trial derives its own counter-based generator.
inline ConstantFit estimate_constant(const spectral::EigenBasis& basis, const ExponentSet& exps,
                                     const std::vector<double>& horizons, std::size_t trials,
                                     std::uint64_t rng_seed, std::size_t time_steps = 64,
                                     std::size_t threads = 1) {
    if (!is_admissible(exps.d, exps.alpha, exps.gamma, exps.p, exps.q))
        throw std::invalid_argument("estimate_constant: inadmissible exponent set");
    if (trials < 1) throw std::invalid_argument("estimate_constant: need at least one trial");
    if (horizons.empty()) throw std::invalid_argument("estimate_constant: no horizons");
    if (threads < 1) threads = 1;

    const std::size_t N = basis.mode_count;
    constexpr double rho = 0.51;  // keeps the data Sobolev norms summable at the edge

    ConstantFit fit;
    fit.horizons = horizons;
    fit.max_ratio.assign(horizons.size(), 0.0);
    fit.draw_ratios.assign(horizons.size(), std::vector<double>(trials, 0.0));
    fit.delta_theory = exps.delta;

    for (std::size_t it = 0; it < horizons.size(); ++it) {
        const double T = horizons[it];
        const auto grid = linear::TimeGrid::uniform(T, time_steps);
        const auto f = linear::SourceTerm::zero(N, grid);
        const std::size_t J = grid.nodes.size();
        // the homogeneous propagator kernels depend only on (mode, node), not
        // on the data draw: tabulate once, reuse across all trials
        std::vector<double> s1(N * J), s2(N * J);
        for (std::size_t k = 0; k < N; ++k) {
            const double lambda = basis.eigenvalues[k];
            s1[k * J] = 1.0;
            s2[k * J] = 0.0;
            for (std::size_t j = 1; j < J; ++j) {
                const double t = grid.nodes[j];
                const double z = -lambda * std::pow(t, exps.alpha);
                s1[k * J + j] = mlf::eval({exps.alpha, 1.0}, z);
                s2[k * J + j] = t * mlf::eval({exps.alpha, 2.0}, z);
            }
        }
        std::vector<double>& ratios = fit.draw_ratios[it];
        // each trial seeds its own generator from the counter, so the result
        // is independent of how trials are distributed over workers
        const auto run_trial = [&](std::size_t trial) {
            std::mt19937_64 rng(detail::splitmix64(rng_seed ^ (0x100000001ULL * (trial + 1))));
            std::normal_distribution<double> gauss;
            spectral::ModalCoeffs u0(N), u1(N);
            for (std::size_t k = 0; k < N; ++k)
                u0[k] = gauss(rng) * std::pow(basis.eigenvalues[k], -exps.gamma - rho);
            for (std::size_t k = 0; k < N; ++k)
                u1[k] = gauss(rng) * std::pow(basis.eigenvalues[k], -exps.s - rho);

            const double data = norms::sobolev_norm(basis, u0, exps.gamma) +
                                norms::sobolev_norm(basis, u1, exps.s);
            if (data == 0.0) return;  // degenerate draw: ratio stays 0
            linear::SolutionTrajectory traj;
            traj.alpha = exps.alpha;
            traj.grid = grid;
            traj.mode_count = N;
            traj.eigenvalues = basis.eigenvalues;
            traj.u0 = u0;
            traj.u1 = u1;
            traj.f = f;
            traj.modal_u.resize(N * J);
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t j = 0; j < J; ++j)
                    traj.modal_u[k * J + j] = s1[k * J + j] * u0[k] + s2[k * J + j] * u1[k];
            const double lhs = norms::sup_sobolev(traj, exps.r) +
                               norms::mixed_lp_lq(basis, traj, {exps.p, exps.q});
            ratios[trial] = lhs / data;
        };
        if (threads == 1 || trials == 1) {
            for (std::size_t trial = 0; trial < trials; ++trial) run_trial(trial);
        } else {
            std::vector<std::thread> pool;
            const std::size_t workers = std::min(threads, trials);
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&, w]() {
                    for (std::size_t trial = w; trial < trials; trial += workers) run_trial(trial);
                });
            for (auto& th : pool) th.join();
        }
        for (std::size_t trial = 0; trial < trials; ++trial) {
            if (ratios[trial] == 0.0) ++fit.degenerate_draws;
            fit.max_ratio[it] = std::max(fit.max_ratio[it], ratios[trial]);
        }
    }

    // least squares of log(ratio) vs log(1+T), horizons >= 1 only
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t it = 0; it < horizons.size(); ++it) {
        if (horizons[it] < 1.0 || fit.max_ratio[it] <= 0.0) continue;
        const double x = std::log(1.0 + horizons[it]);
        const double y = std::log(fit.max_ratio[it]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2) {
        const double denom = static_cast<double>(n) * sxx - sx * sx;
        fit.delta_hat = (static_cast<double>(n) * sxy - sx * sy) / denom;
        fit.c0_hat = std::exp((sy - fit.delta_hat * sx) / static_cast<double>(n));
    } else if (n == 1) {
        fit.delta_hat = 0.0;
        fit.c0_hat = std::exp(sy);
    }
    return fit;
}

}  // namespace fracwave::strichartz
