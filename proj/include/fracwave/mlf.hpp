#pragma once

// Two-parameter Mittag-Leffler function on the nonpositive real axis,
// together with the kernel moments used by the product-integration solver.
//
// Evaluation strategy:
//   |x| < 10   defining power series, summed in long double
//   |x| >= 10  exact residue/branch-cut representation: the conjugate pole
//              pair of 1/(p^alpha + x) plus a quadrature of the branch-cut
//              integral along the negative real axis. Both pieces together
//              are an identity, not a truncated expansion, so the crossover
//              region stays consistent to ~1e-12.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracwave/gauss.hpp"

namespace fracwave::mlf {

struct MLParams {
    double alpha = 1.5;
    double beta = 1.0;

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("MLParams: alpha must be positive");
        if (!(alpha <= 2.0)) throw std::invalid_argument("MLParams: alpha must be <= 2");
        if (!std::isfinite(beta)) throw std::invalid_argument("MLParams: beta must be finite");
    }
};

namespace detail {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

/// 1/Gamma(y), entire in y; reflection below 0.5 so zeros at 0, -1, -2, ...
/// come out exactly from sin.
inline long double recip_gamma(long double y) {
    if (y >= 0.5L) return 1.0L / std::tgamma(y);
    return std::sin(kPi * y) / kPi * std::tgamma(1.0L - y);
}

/// Defining series, long double accumulation. Usable for |x| <~ 30;
/// production switch point is 10.
inline long double series(double alpha, double beta, double x) {
    const long double z = static_cast<long double>(x);
    long double sum = 0.0L, zk = 1.0L;
    int tiny_streak = 0;
    for (int k = 0; k < 500; ++k) {
        const long double term = zk * recip_gamma(static_cast<long double>(alpha) * k + static_cast<long double>(beta));
        sum += term;
        const long double scale = std::max(std::fabs(sum), 1e-300L);
        if (std::fabs(term) < 1e-25L * scale) {
            if (++tiny_streak >= 3) break;
        } else {
            tiny_streak = 0;
        }
        zk *= z;
    }
    return sum;
}

inline const GaussRule& panel_rule() {
    static const GaussRule rule = gauss_legendre(24);
    return rule;
}

/// Branch-cut integral
///   -(1/pi) Int_0^inf e^{-r} r^{alpha-beta} Im[e^{i pi (alpha-beta)} /
///                                              (r^alpha e^{i pi alpha} + x)] dr
/// for x > 0, beta <= alpha. The [0,1] part is mapped through r = u^3 to
/// flatten the algebraic endpoint; panels are refined around the
/// quasi-resonance at r = x^{1/alpha} when it lands in range.
inline long double branch_cut_integral(double alpha, double beta, double x) {
    const long double a = alpha, b = beta, X = x;
    const std::complex<long double> eab = std::polar(1.0L, kPi * (a - b));
    const std::complex<long double> ea = std::polar(1.0L, kPi * a);

    const auto integrand = [&](long double r) -> long double {
        const long double ra = std::pow(r, a);
        const std::complex<long double> den = ra * ea + X;
        const long double im = std::imag(eab / den);
        return std::exp(-r) * std::pow(r, a - b) * im;
    };

    const long double rstar = std::pow(X, 1.0L / a);

    std::vector<double> ub = {0.0, 0.25, 0.5, 0.75, 1.0};
    if (rstar > 0.0L && rstar < 1.0L) {
        const double us = static_cast<double>(std::pow(rstar, 1.0L / 3.0L));
        for (double f : {0.8, 0.9, 1.0, 1.1, 1.2}) {
            const double v = us * f;
            if (v > 0.0 && v < 1.0) ub.push_back(v);
        }
    }
    std::sort(ub.begin(), ub.end());
    ub.erase(std::unique(ub.begin(), ub.end()), ub.end());

    std::vector<double> br = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 60.0};
    if (rstar > 1.0L && rstar < 80.0L) {
        for (double f : {0.7, 0.85, 0.95, 1.0, 1.05, 1.15, 1.3}) {
            const double v = static_cast<double>(rstar) * f;
            if (v > 1.0 && v < 60.0) br.push_back(v);
        }
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());
    }

    const GaussRule& rule = panel_rule();
    long double total = 0.0L;
    // r in [0,1] via r = u^3
    for (std::size_t i = 0; i + 1 < ub.size(); ++i) {
        const long double lo = ub[i], hi = ub[i + 1];
        const long double mid = 0.5L * (lo + hi), half = 0.5L * (hi - lo);
        long double panel = 0.0L;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const long double u = mid + half * static_cast<long double>(rule.nodes[j]);
            if (u <= 0.0L) continue;
            panel += static_cast<long double>(rule.weights[j]) * 3.0L * u * u * integrand(u * u * u);
        }
        total += half * panel;
    }
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const long double lo = br[i], hi = br[i + 1];
        const long double mid = 0.5L * (lo + hi), half = 0.5L * (hi - lo);
        long double panel = 0.0L;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            panel += static_cast<long double>(rule.weights[j]) * integrand(mid + half * static_cast<long double>(rule.nodes[j]));
        total += half * panel;
    }
    return -total / kPi;
}

/// Large-argument branch for 1 < alpha <= 2, any real beta (reduced into
/// beta <= alpha by the recurrence E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a))/z).
inline long double asymptotic(double alpha, double beta, double x) {
    if (beta > alpha)
        return (asymptotic(alpha, beta - alpha, x) - recip_gamma(static_cast<long double>(beta) - static_cast<long double>(alpha))) /
               static_cast<long double>(-x);
    const long double a = alpha, b = beta, X = x;
    const std::complex<long double> w = std::polar(std::pow(X, 1.0L / a), kPi / a);
    std::complex<long double> pole_pair = std::exp((1.0L - b) * std::log(w) + w);
    if (!std::isfinite(std::real(pole_pair))) pole_pair = 0.0L;  // exp underflow
    return (2.0L / a) * std::real(pole_pair) + branch_cut_integral(alpha, beta, x);
}

/// alpha = 1 degenerates (the pole sits on the branch cut); closed forms
/// cover the identity tests.
inline long double alpha_one_large(double beta, double x) {
    const long double X = x;
    if (beta == 1.0) return std::exp(-X);
    if (beta == 2.0) return (1.0L - std::exp(-X)) / X;
    if (beta == 3.0) return (std::exp(-X) - 1.0L + X) / (X * X);
    throw std::domain_error("mlf: alpha=1 with |x|>=10 supported only for beta in {1,2,3}");
}

inline bool large_branch_supported(double alpha, double beta) {
    if (alpha > 1.0 && alpha <= 2.0) return true;
    if (alpha == 1.0) return beta == 1.0 || beta == 2.0 || beta == 3.0;
    return false;
}

}  // namespace detail

/// Value of the defining power series (exposed as the crosscheck branch).
inline double series_value(const MLParams& params, double x) {
    params.validate();
    if (x > 0.0) throw std::domain_error("mlf: positive arguments are not supported");
    return static_cast<double>(detail::series(params.alpha, params.beta, x));
}

/// E_{alpha,beta}(x) for x <= 0, relative accuracy ~1e-11 for |x| <= 1e6.
/// In the band |x| in [5, 20] the series and the large-argument branch are
/// both evaluated and must agree to 1e-8.
inline double eval(const MLParams& params, double x) {
    params.validate();
    if (x > 0.0) throw std::domain_error("mlf: positive arguments are not supported");
    const double ax = -x;
    const bool large_ok = detail::large_branch_supported(params.alpha, params.beta);

    long double value;
    if (ax < 10.0) {
        value = detail::series(params.alpha, params.beta, x);
    } else if (params.alpha == 1.0) {
        value = detail::alpha_one_large(params.beta, ax);
    } else if (large_ok) {
        value = detail::asymptotic(params.alpha, params.beta, ax);
    } else {
        throw std::domain_error("mlf: unsupported (alpha, beta) for |x| >= 10");
    }

    if (ax >= 5.0 && ax <= 20.0 && large_ok) {
        const long double other = (ax < 10.0)
                                      ? (params.alpha == 1.0 ? detail::alpha_one_large(params.beta, ax)
                                                             : detail::asymptotic(params.alpha, params.beta, ax))
                                      : detail::series(params.alpha, params.beta, x);
        // absolute floor: near zeros of E (alpha=2 oscillates) and for the
        // exponentially small alpha=1 tail a pure relative test is vacuous
        const long double scale = std::max({std::fabs(value), std::fabs(other), 1e-2L});
        if (std::fabs(value - other) > 1e-8L * scale)
            throw std::runtime_error("mlf: series/large-argument crosscheck failed in the band |x| in [5,20]");
    }
    return static_cast<double>(value);
}

namespace detail {

/// E_{a,beta}(z) - E_{a,beta+1}(z) without subtractive cancellation for
/// small |z| (direct difference series). Used by the first-moment formulas.
inline long double diff_series(double alpha, double beta, double z) {
    const long double a = alpha, b = beta, Z = z;
    long double sum = 0.0L, zk = 1.0L;
    int tiny_streak = 0;
    for (int k = 0; k < 500; ++k) {
        const long double arg = a * k + b;
        // 1/Gamma(arg) - 1/Gamma(arg+1) = (arg-1)/Gamma(arg+1)
        const long double coeff = (arg - 1.0L) * recip_gamma(arg + 1.0L);
        sum += zk * coeff;
        const long double scale = std::max(std::fabs(sum), 1e-300L);
        if (std::fabs(zk * coeff) < 1e-25L * scale) {
            if (++tiny_streak >= 3) break;
        } else {
            tiny_streak = 0;
        }
        zk *= Z;
    }
    return sum;
}

}  // namespace detail

/// Int_0^t s^{alpha-1} E_{alpha,alpha}(-lambda s^alpha) ds
///   = t^alpha E_{alpha,alpha+1}(-lambda t^alpha).
inline double moment(double alpha, double lambda, double t) {
    if (!(lambda > 0.0)) throw std::domain_error("mlf::moment: lambda must be positive");
    if (!(t > 0.0)) throw std::domain_error("mlf::moment: t must be positive");
    const double z = -lambda * std::pow(t, alpha);
    return std::pow(t, alpha) * eval({alpha, alpha + 1.0}, z);
}

/// Int_0^t s^alpha E_{alpha,alpha}(-lambda s^alpha) ds
///   = t^{alpha+1} [E_{alpha,alpha+1}(z) - E_{alpha,alpha+2}(z)],  z = -lambda t^alpha.
/// For |z| >= 10 the bracket is computed as (E_{alpha,1}(z) - E_{alpha,2}(z))/z,
/// whose terms do not share a leading order.
inline double first_moment(double alpha, double lambda, double t) {
    if (!(lambda > 0.0)) throw std::domain_error("mlf::first_moment: lambda must be positive");
    if (!(t > 0.0)) throw std::domain_error("mlf::first_moment: t must be positive");
    const double z = -lambda * std::pow(t, alpha);
    long double bracket;
    if (-z < 10.0) {
        bracket = detail::diff_series(alpha, alpha + 1.0, z);
    } else {
        bracket = (static_cast<long double>(eval({alpha, 1.0}, z)) - static_cast<long double>(eval({alpha, 2.0}, z))) /
                  static_cast<long double>(z);
    }
    return static_cast<double>(std::pow(static_cast<long double>(t), static_cast<long double>(alpha) + 1.0L) * bracket);
}

/// Int_0^t s^{alpha-2} E_{alpha,alpha-1}(-lambda s^alpha) ds
///   = t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha)  (integrable for alpha > 1).
inline double dmoment(double alpha, double lambda, double t) {
    if (!(alpha > 1.0)) throw std::domain_error("mlf::dmoment: requires alpha > 1");
    if (!(lambda > 0.0)) throw std::domain_error("mlf::dmoment: lambda must be positive");
    if (!(t > 0.0)) throw std::domain_error("mlf::dmoment: t must be positive");
    const double z = -lambda * std::pow(t, alpha);
    return std::pow(t, alpha - 1.0) * eval({alpha, alpha}, z);
}

/// Int_0^t s^{alpha-1} E_{alpha,alpha-1}(-lambda s^alpha) ds
///   = t^alpha [E_{alpha,alpha}(z) - E_{alpha,alpha+1}(z)],  z = -lambda t^alpha.
inline double dfirst_moment(double alpha, double lambda, double t) {
    if (!(alpha > 1.0)) throw std::domain_error("mlf::dfirst_moment: requires alpha > 1");
    if (!(lambda > 0.0)) throw std::domain_error("mlf::dfirst_moment: lambda must be positive");
    if (!(t > 0.0)) throw std::domain_error("mlf::dfirst_moment: t must be positive");
    const double z = -lambda * std::pow(t, alpha);
    long double bracket;
    if (-z < 10.0) {
        bracket = detail::diff_series(alpha, alpha, z);
    } else {
        bracket = static_cast<long double>(eval({alpha, alpha}, z)) - static_cast<long double>(eval({alpha, alpha + 1.0}, z));
    }
    return static_cast<double>(std::pow(static_cast<long double>(t), static_cast<long double>(alpha)) * bracket);
}

namespace detail {

/// Branch selection without the band crosscheck; internal fast path for the
/// moment helpers (their accuracy is covered by the quadrature oracles).
inline long double eval_raw(double alpha, double beta, double x) {
    if (-x < 10.0) return series(alpha, beta, x);
    return asymptotic(alpha, beta, -x);
}

}  // namespace detail

/// Zeroth and first kernel moments over [0, t], sharing Mittag-Leffler
/// evaluations: for |z| >= 10 both reduce to E_{alpha,1}(z) and
/// E_{alpha,2}(z) via the beta-recurrence.
struct KernelMoments {
    double m0 = 0.0;
    double m1 = 0.0;
};

inline KernelMoments moment_pair(double alpha, double lambda, double t) {
    const double z = -lambda * std::pow(t, alpha);
    const long double ta = std::pow(static_cast<long double>(t), static_cast<long double>(alpha));
    if (-z < 10.0) {
        return {static_cast<double>(ta * detail::series(alpha, alpha + 1.0, z)),
                static_cast<double>(ta * t * detail::diff_series(alpha, alpha + 1.0, z))};
    }
    const long double e1 = detail::eval_raw(alpha, 1.0, z);
    const long double e2 = detail::eval_raw(alpha, 2.0, z);
    return {static_cast<double>(ta * (e1 - 1.0L) / z), static_cast<double>(ta * t * (e1 - e2) / z)};
}

/// Same for the derivative kernel (t-s)^{alpha-2} E_{alpha,alpha-1}:
/// N0 = t^{alpha-1} E_{alpha,alpha}(z), N1 = t^alpha (E_{alpha,alpha} - E_{alpha,alpha+1}).
inline KernelMoments dmoment_pair(double alpha, double lambda, double t) {
    const double z = -lambda * std::pow(t, alpha);
    const long double tm = std::pow(static_cast<long double>(t), static_cast<long double>(alpha) - 1.0L);
    if (-z < 10.0) {
        return {static_cast<double>(tm * detail::series(alpha, alpha, z)),
                static_cast<double>(tm * t * detail::diff_series(alpha, alpha, z))};
    }
    const long double eaa = detail::eval_raw(alpha, alpha, z);
    const long double e1 = detail::eval_raw(alpha, 1.0, z);
    return {static_cast<double>(tm * eaa),
            static_cast<double>(tm * t * (eaa - (e1 - 1.0L) / z))};
}

/// Empirical sup over a log-spaced grid of (1+x)|E_{alpha,beta}(-x)|,
/// x in [0, x_max]. An observed stand-in for the non-constructive decay
/// constant; never a proven bound.
inline double bound_constant(const MLParams& params, double x_max, std::size_t grid_size = 2000) {
    params.validate();
    if (!(x_max > 0.0)) throw std::invalid_argument("mlf::bound_constant: x_max must be positive");
    if (grid_size < 2) throw std::invalid_argument("mlf::bound_constant: grid_size must be >= 2");
    const auto value = [&params](double x) { return (1.0 + x) * std::abs(eval(params, -x)); };
    double sup = std::abs(eval(params, 0.0));  // (1+0)*|E(0)| = 1/|Gamma(beta)|
    double lo = std::log(1e-3), hi = std::log(x_max);
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x =
            std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1));
        const double v = value(x);
        if (v > sup) {
            sup = v;
            best = i;
        }
    }
    // Zoom in around the coarse maximiser: interior peaks can fall between
    // grid points, so refine the bracketing interval a few times.
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    lo += step * (best == 0 ? 0.0 : static_cast<double>(best - 1));
    hi = lo + 2.0 * step;
    for (int round = 0; round < 6; ++round) {
        std::size_t fine_best = 0;
        for (std::size_t i = 0; i <= 32; ++i) {
            const double x = std::exp(lo + (hi - lo) * static_cast<double>(i) / 32.0);
            const double v = value(x);
            if (v > sup) {
                sup = v;
                fine_best = i;
            }
        }
        const double fine_step = (hi - lo) / 32.0;
        lo += fine_step * (fine_best == 0 ? 0.0 : static_cast<double>(fine_best - 1));
        hi = lo + 2.0 * fine_step;
    }
    return sup;
}

}  // namespace fracwave::mlf
