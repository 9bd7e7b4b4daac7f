#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fracwave/spectral.hpp"
#include "fracwave/strichartz.hpp"

namespace st = fracwave::strichartz;
namespace sp = fracwave::spectral;

namespace {

constexpr double kInf = st::kInf;

// Independent transcription of the admissibility rules, written against the
// source statements rather than the library code, used as a cross-check.
struct OracleRules {
    bool q_is_range;
    double q;
    bool p_is_inf;
    double p_sup;
};

OracleRules oracle(int d, double alpha, double gamma) {
    OracleRules o{false, 0.0, false, kInf};
    if (4.0 * gamma > d) {
        o.q = kInf;
    } else if (4.0 * gamma == d) {
        o.q_is_range = true;
    } else {
        o.q = (2.0 * d) / (d - 4.0 * gamma);
    }
    if (gamma <= (alpha - 1.0) / alpha) {
        o.p_is_inf = true;
    } else {
        o.p_sup = 1.0 / (1.0 - alpha + alpha * gamma);
    }
    return o;
}

double oracle_delta(double alpha, double gamma, double p) {
    const double s = gamma > 1.0 / alpha ? gamma - 1.0 / alpha : 0.0;
    const double r = gamma < 1.0 - 1.0 / alpha ? gamma : 1.0 - 1.0 / alpha;
    std::vector<double> terms;
    if (p == kInf) {
        terms = {alpha * (1.0 - gamma) - 1.0, 1.0 - alpha * (gamma - s), 1.0 - alpha * (r - s),
                 alpha * (1.0 - r) - 1.0};
    } else {
        terms = {1.0 / p,
                 1.0 - alpha * (gamma - s) + 1.0 / p,
                 1.0 - alpha * (r - s),
                 alpha * (1.0 - r) - 1.0,
                 alpha * (1.0 - gamma) - 1.0 + 1.0 / p};
    }
    double m = terms[0];
    for (double v : terms) m = std::max(m, v);
    return m;
}

}  // namespace

TEST_CASE("admissibility agrees with an independent transcription on a dense grid") {
    // alpha, gamma on a dyadic grid: the p-branch boundary gamma = 1 - 1/alpha
    // is never within 1e-4 of a grid point (64 + ia never divides 4096), so
    // both transcriptions make identical branch decisions
    std::size_t disagreements = 0;
    for (int d = 1; d <= 3; ++d) {
        for (int ia = 1; ia <= 63; ++ia) {
            const double alpha = 1.0 + ia / 64.0;
            for (int ig = 1; ig <= 63; ++ig) {
                const double gamma = ig / 64.0;
                const auto got = st::admissible_exponents(d, alpha, gamma);
                const auto want = oracle(d, alpha, gamma);
                const bool same_q = got.q_is_range == want.q_is_range &&
                                    (got.q_is_range || got.q == want.q ||
                                     std::abs(got.q - want.q) <= 1e-13 * want.q);
                const bool same_p = got.p_must_be_inf == want.p_is_inf &&
                                    (want.p_is_inf || std::abs(got.p_sup - want.p_sup) <=
                                                          1e-9 * want.p_sup);
                if (!(same_q && same_p)) ++disagreements;
            }
        }
    }
    CHECK(disagreements == 0);  // 11907 grid points
}

TEST_CASE("hand-computed growth exponents") {
    // d = 3, alpha = 3/2, gamma = 3/8, p = 4: q = 4, s = 0, r = 1/3,
    // terms {1/4, 11/16, 1/2, 0, 3/16} -> delta = 11/16
    {
        const auto e = st::make_exponent_set(3, 1.5, 0.375, 4.0, 4.0);
        CHECK(e.q == Catch::Approx(4.0).epsilon(1e-14));
        CHECK(e.s == 0.0);
        CHECK(e.r == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(e.delta == Catch::Approx(0.6875).epsilon(1e-14));
    }
    // d = 1, alpha = 3/2, gamma = 1/3 (= 1 - 1/alpha): p forced to infinity,
    // q = infinity (gamma > 1/4), s = 0, r = 1/3, terms {0, 1/2, 1/2, 0}
    {
        const auto a = st::admissible_exponents(1, 1.5, 1.0 / 3.0);
        REQUIRE(a.p_must_be_inf);
        REQUIRE(a.q == kInf);
        const auto e = st::make_exponent_set(1, 1.5, 1.0 / 3.0, kInf, kInf);
        CHECK(e.delta == Catch::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("growth exponent properties") {
    for (int ia = 1; ia <= 20; ++ia) {
        const double alpha = 1.0 + ia / 21.0;
        for (int ig = 1; ig <= 20; ++ig) {
            const double gamma = ig / 21.0;
            const auto so = st::derived_orders(alpha, gamma);
            CHECK(so.s >= 0.0);
            CHECK(so.r <= gamma + 1e-15);
            // delta is nonnegative and nonincreasing in p
            double prev = st::growth_exponent(alpha, gamma, so.s, so.r, 1.0);
            CHECK(prev >= -1e-15);
            for (double p : {1.5, 2.0, 4.0, 8.0, 32.0, 1e4}) {
                const double cur = st::growth_exponent(alpha, gamma, so.s, so.r, p);
                CHECK(cur <= prev + 1e-15);
                CHECK(cur == Catch::Approx(oracle_delta(alpha, gamma, p)).margin(1e-15));
                prev = cur;
            }
            CHECK(st::growth_exponent(alpha, gamma, so.s, so.r, kInf) <= prev + 1e-15);
        }
    }
}

TEST_CASE("inadmissible pairs are rejected") {
    CHECK_THROWS_AS(st::make_exponent_set(3, 1.5, 0.375, 16.0, 4.0), std::invalid_argument);  // p = sup
    CHECK_THROWS_AS(st::make_exponent_set(3, 1.5, 0.375, 4.0, 5.0), std::invalid_argument);   // wrong q
    CHECK_THROWS_AS(st::make_exponent_set(1, 1.5, 1.0 / 3.0, 4.0, kInf), std::invalid_argument);
    CHECK_THROWS_AS(st::make_exponent_set(4, 1.5, 0.5, 2.0, kInf), std::domain_error);
    CHECK_THROWS_AS(st::make_exponent_set(3, 2.5, 0.5, 2.0, kInf), std::domain_error);
    // gamma = d/4 = 0.75: open q range, p_sup = 1/(1 - 1.5/4) = 1.6
    CHECK(st::is_admissible(3, 1.5, 0.75, 1.5, 8.0));
    CHECK_FALSE(st::is_admissible(3, 1.5, 0.75, 4.0, 8.0));   // p beyond the sup
    CHECK_FALSE(st::is_admissible(3, 1.5, 0.75, 1.5, 2.0));   // q at the closed end
    CHECK_FALSE(st::is_admissible(3, 1.5, 0.75, 1.5, kInf));
}

TEST_CASE("empirical constant fit is bounded by the predicted growth") {
    const auto basis = sp::build_interval_basis(3.14159265358979323846, 8);
    const auto e = st::make_exponent_set(1, 1.5, 0.375, 4.0, kInf);
    const std::vector<double> horizons = {1.0, 2.0, 4.0, 8.0};
    const auto fit = st::estimate_constant(basis, e, horizons, 12, 2024u, 32);

    REQUIRE(fit.max_ratio.size() == horizons.size());
    for (double r : fit.max_ratio) CHECK(r > 0.0);
    CHECK(fit.degenerate_draws == 0);
    CHECK(fit.c0_hat > 0.0);
    CHECK(fit.delta_theory == Catch::Approx(0.6875).epsilon(1e-14));
    // the empirical growth rate must not exceed the predicted exponent
    CHECK(fit.delta_hat <= e.delta + 0.15);

    // determinism: identical seed reproduces the fit exactly
    const auto fit2 = st::estimate_constant(basis, e, horizons, 12, 2024u, 32);
    CHECK(fit2.delta_hat == fit.delta_hat);
    CHECK(fit2.c0_hat == fit.c0_hat);
    CHECK(fit2.max_ratio == fit.max_ratio);

    // a different seed still yields comparable ratios
    const auto fit3 = st::estimate_constant(basis, e, horizons, 12, 7u, 32);
    for (std::size_t i = 0; i < horizons.size(); ++i)
        CHECK(fit3.max_ratio[i] < 50.0 * fit.max_ratio[i] + 50.0);
}
