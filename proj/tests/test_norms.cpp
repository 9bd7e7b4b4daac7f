#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "fracwave/linear.hpp"
#include "fracwave/norms.hpp"
#include "support/oracles.hpp"

namespace fn = fracwave::norms;
namespace fl = fracwave::linear;
namespace sp = fracwave::spectral;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("spectral Sobolev norm weights") {
    const auto basis = sp::build_interval_basis(kPi / 2.0, 3);  // lambda = 4, 16, 36
    CHECK(fn::sobolev_norm(basis, {1.0, 0.0, 0.0}, 0.5) == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(fn::sobolev_norm(basis, {3.0, -4.0, 0.0}, 0.0) == Catch::Approx(5.0).epsilon(1e-13));
    // negative order: lambda^{-1/2} weights
    CHECK(fn::sobolev_norm(basis, {2.0, 0.0, 0.0}, -0.5) == Catch::Approx(1.0).epsilon(1e-13));
    // weight algebra on a 3-mode toy: c_k = lambda_k^{-1}
    const auto b2 = sp::build_interval_basis(kPi, 3);  // lambda = 1, 4, 9
    const sp::ModalCoeffs c = {1.0, 0.25, 1.0 / 9.0};
    const double plus = fn::sobolev_norm(b2, c, 0.5);   // sqrt(sum lambda^{-1})
    const double minus = fn::sobolev_norm(b2, c, -0.5); // sqrt(sum lambda^{-3})
    CHECK(plus == Catch::Approx(std::sqrt(1.0 + 0.25 + 1.0 / 9.0)).epsilon(1e-13));
    CHECK(minus == Catch::Approx(std::sqrt(1.0 + std::pow(4.0, -3) + std::pow(9.0, -3))).epsilon(1e-13));
}

TEST_CASE("spatial Lq norms of the first sine mode") {
    const auto basis = sp::build_interval_basis(kPi, 2, 2);
    const sp::ModalCoeffs e1 = {1.0, 0.0};
    CHECK(fn::spatial_lq(basis, e1, 2.0) == Catch::Approx(1.0).epsilon(1e-10));
    // grid max: accuracy limited by node spacing around the peak
    CHECK(fn::spatial_lq(basis, e1, fn::kInf) == Catch::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-3));
    // int_0^pi (sqrt(2/pi) sin x)^4 dx = (2/pi)^2 (3 pi / 8)
    const double expected = std::pow(std::pow(2.0 / kPi, 2) * 3.0 * kPi / 8.0, 0.25);
    CHECK(fn::spatial_lq(basis, e1, 4.0) == Catch::Approx(expected).epsilon(1e-10));
}

namespace {
fl::SolutionTrajectory manual_trajectory(const sp::EigenBasis& basis, const fl::TimeGrid& grid) {
    fl::SolutionTrajectory traj;
    traj.alpha = 1.5;
    traj.grid = grid;
    traj.mode_count = basis.mode_count;
    traj.eigenvalues = basis.eigenvalues;
    traj.modal_u.assign(basis.mode_count * grid.nodes.size(), 0.0);
    return traj;
}
}  // namespace

TEST_CASE("mixed norms on hand-made trajectories") {
    const auto basis = sp::build_interval_basis(kPi, 2);
    const auto grid = fl::TimeGrid::uniform(1.0, 64);
    auto traj = manual_trajectory(basis, grid);

    // constant in time, single mode, p = q = 2 on T = 1 -> coefficient value
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) traj.modal_u[j] = 0.7;
    CHECK(fn::mixed_lp_lq(basis, traj, {2.0, 2.0}) == Catch::Approx(0.7).epsilon(1e-10));

    // u(t) = t e_1, p = 3, q = 2 -> (int t^3)^{1/3} = (1/4)^{1/3}
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) traj.modal_u[j] = grid.nodes[j];
    CHECK(fn::mixed_lp_lq(basis, traj, {3.0, 2.0}) ==
          Catch::Approx(std::pow(0.25, 1.0 / 3.0)).epsilon(1e-8));

    // p = inf -> max over nodes
    CHECK(fn::mixed_lp_lq(basis, traj, {fn::kInf, 2.0}) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("every norm is homogeneous of degree one") {
    const auto basis = sp::build_interval_basis(2.0, 4);
    const auto grid = fl::TimeGrid::uniform(1.0, 32);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    auto traj = manual_trajectory(basis, grid);
    for (auto& v : traj.modal_u) v = gauss(rng);
    traj.modal_du.resize(traj.modal_u.size());
    for (auto& v : traj.modal_du) v = gauss(rng);

    const double scale = 3.7;
    auto scaled = traj;
    for (auto& v : scaled.modal_u) v *= scale;
    for (auto& v : scaled.modal_du) v *= scale;

    for (const fn::MixedNormSpec spec : {fn::MixedNormSpec{2.0, 2.0}, fn::MixedNormSpec{4.0, 4.0},
                                         fn::MixedNormSpec{fn::kInf, fn::kInf}}) {
        const double a = fn::mixed_lp_lq(basis, traj, spec);
        const double b = fn::mixed_lp_lq(basis, scaled, spec);
        CHECK(b == Catch::Approx(scale * a).epsilon(1e-12));
    }
    CHECK(fn::w1l_norm(scaled, 1.5) == Catch::Approx(scale * fn::w1l_norm(traj, 1.5)).epsilon(1e-12));
    sp::ModalCoeffs c(4), cs(4);
    for (std::size_t k = 0; k < 4; ++k) {
        c[k] = gauss(rng);
        cs[k] = scale * c[k];
    }
    CHECK(fn::sobolev_norm(basis, cs, 0.375) ==
          Catch::Approx(scale * fn::sobolev_norm(basis, c, 0.375)).epsilon(1e-12));
}

TEST_CASE("W^{1,ell} norm against an adaptive quadrature oracle") {
    const auto basis = sp::build_interval_basis(kPi, 1);  // lambda_1 = 1
    const double alpha = 1.5;
    const auto grid = fl::TimeGrid::graded(1.0, 512, 2.0);
    const auto traj = fl::solve_linear_derivative(
        fl::solve_linear(basis, alpha, {1.0}, {0.0}, fl::SourceTerm::zero(1, grid), grid));

    const auto u_abs = [&](double t) {
        return std::abs(fracwave::mlf::eval({alpha, 1.0}, -std::pow(t, alpha)));
    };
    const auto du_abs = [&](double t) {
        return std::pow(t, alpha - 1.0) *
               std::abs(fracwave::mlf::eval({alpha, alpha}, -std::pow(t, alpha)));
    };
    const double expected = oracles::adaptive_simpson(u_abs, 0.0, 1.0, 1e-10) +
                            oracles::adaptive_simpson_singular_left(du_abs, 0.0, 1.0, 1e-10);
    CHECK(fn::w1l_norm(traj, 1.0) == Catch::Approx(expected).epsilon(1e-5));
}

TEST_CASE("ell window enforced") {
    const auto basis = sp::build_interval_basis(kPi, 1);
    const auto grid = fl::TimeGrid::uniform(1.0, 16);
    const double alpha = 1.5;
    const auto traj = fl::solve_linear_derivative(
        fl::solve_linear(basis, alpha, {1.0}, {0.0}, fl::SourceTerm::zero(1, grid), grid));
    CHECK_NOTHROW(fn::w1l_norm(traj, 1.9));
    CHECK_THROWS_AS(fn::w1l_norm(traj, 1.0 / (2.0 - alpha)), std::domain_error);
    CHECK_THROWS_AS(fn::w1l_norm(traj, 0.5), std::domain_error);
}

TEST_CASE("Hoelder embedding between mixed norms") {
    // ||u||_{L^b(0,T;L^{2b})} <= T^{(p-b)/(bp)} ||u||_{L^p(0,T;L^{2b})} for p > b
    const auto basis = sp::build_interval_basis(kPi, 3);
    const double T = 2.0;
    const auto grid = fl::TimeGrid::uniform(T, 48);
    std::mt19937_64 rng(5150);
    std::normal_distribution<double> gauss;
    const double b = 2.0, p = 9.7;
    for (int trial = 0; trial < 20; ++trial) {
        auto traj = manual_trajectory(basis, grid);
        for (auto& v : traj.modal_u) v = gauss(rng);
        const double lhs = fn::mixed_lp_lq(basis, traj, {b, 2.0 * b});
        const double rhs =
            std::pow(T, (p - b) / (b * p)) * fn::mixed_lp_lq(basis, traj, {p, 2.0 * b});
        CHECK(lhs <= rhs * (1.0 + 1e-10));
    }
}

TEST_CASE("temporal L^p increases towards the sup on a unit interval") {
    const auto basis = sp::build_interval_basis(kPi, 1);
    const auto grid = fl::TimeGrid::uniform(1.0, 64);
    auto traj = manual_trajectory(basis, grid);
    for (std::size_t j = 0; j < grid.nodes.size(); ++j)
        traj.modal_u[j] = std::sin(3.0 * grid.nodes[j]) + 1.2;
    double prev = 0.0;
    for (double p : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double v = fn::mixed_lp_lq(basis, traj, {p, 2.0});
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(prev <= fn::mixed_lp_lq(basis, traj, {fn::kInf, 2.0}) + 1e-12);
}
