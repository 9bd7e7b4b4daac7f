// Acceptance suite: ten end-to-end criteria, one PASS/FAIL line each.
// Exit code equals the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fracwave/config.hpp"
#include "fracwave/laplace.hpp"
#include "fracwave/linear.hpp"
#include "fracwave/mlf.hpp"
#include "fracwave/norms.hpp"
#include "fracwave/semilinear.hpp"
#include "fracwave/spectral.hpp"
#include "fracwave/strichartz.hpp"

namespace ml = fracwave::mlf;
namespace sp = fracwave::spectral;
namespace fl = fracwave::linear;
namespace fn = fracwave::norms;
namespace st = fracwave::strichartz;
namespace se = fracwave::semilinear;
namespace lp = fracwave::laplace;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
};

// ---- criterion 1: Mittag-Leffler accuracy + classical identities, < 5 s ----
Check criterion_1() {
    Check c;
    const double start = now_seconds();

    std::ifstream in(fs::path(FRACWAVE_TEST_DATA_DIR) / "mlf_reference.csv");
    c.require(static_cast<bool>(in), "reference table missing");
    std::string line;
    std::getline(in, line);  // header
    std::size_t rows = 0;
    double worst = 0.0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        double a, b, x, v;
        char comma;
        ss >> a >> comma >> b >> comma >> x >> comma >> v;
        if (std::abs(x) > 50.0) continue;
        const double got = ml::eval({a, b}, x);
        const double rel = std::abs(got - v) / std::max(std::abs(v), 1e-300);
        worst = std::max(worst, rel);
        ++rows;
    }
    c.require(rows > 500, "too few oracle rows");
    c.require(worst <= 1e-9, "oracle mismatch, worst rel " + std::to_string(worst));

    // exp / cos / sinc identities on x in [0, 100]
    double worst_id = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 100.0 * i / 400.0;
        worst_id = std::max(worst_id, std::abs(ml::eval({1.0, 1.0}, -x) - std::exp(-x)));
        worst_id = std::max(worst_id, std::abs(ml::eval({2.0, 1.0}, -x) - std::cos(std::sqrt(x))));
        const double sinc = x == 0.0 ? 1.0 : std::sin(std::sqrt(x)) / std::sqrt(x);
        worst_id = std::max(worst_id, std::abs(ml::eval({2.0, 2.0}, -x) - sinc));
    }
    c.require(worst_id <= 1e-10, "identity sweep worst " + std::to_string(worst_id));
    c.require(now_seconds() - start < 5.0, "identity sweep exceeded 5 s");
    return c;
}

// ---- criterion 2: decay bound (1+x)|E| bounded, x up to 1e6 ----
Check criterion_2() {
    Check c;
    for (double alpha : {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9}) {
        for (double beta : {1.0, 2.0, alpha - 1.0, alpha, alpha + 1.0}) {
            const ml::MLParams params{alpha, beta};
            const double C = ml::bound_constant(params, 1e6);
            c.require(std::isfinite(C) && C > 0.0, "bound constant not finite/positive");
            // offset grid: check points between the estimator's grid points
            for (int i = 0; i <= 240; ++i) {
                const double x = std::pow(10.0, -3.0 + 9.0 * (i + 0.37) / 241.0);
                if (x > 1e6) break;
                const double v = (1.0 + x) * std::abs(ml::eval(params, -x));
                c.require(v <= C * (1.0 + 1e-6),
                          "decay bound violated at alpha=" + std::to_string(alpha) +
                              " beta=" + std::to_string(beta) + " x=" + std::to_string(x));
            }
        }
    }
    return c;
}

// ---- criterion 3: linear solver correctness, < 60 s ----
Check criterion_3() {
    Check c;
    const double start = now_seconds();
    const auto basis = sp::build_interval_basis(kPi / 2.0, 1);  // lambda = 4
    const double lambda = basis.eigenvalues[0];

    for (double alpha : {1.3, 1.5, 1.7}) {
        const auto grid = fl::TimeGrid::uniform(1.0, 64);
        const auto zero = fl::SourceTerm::zero(1, grid);
        // homogeneous kernels
        const auto t1 = fl::solve_linear(basis, alpha, {1.0}, {0.0}, zero, grid);
        const auto t2 = fl::solve_linear(basis, alpha, {0.0}, {1.0}, zero, grid);
        for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
            const double t = grid.nodes[j];
            const double z = -lambda * std::pow(t, alpha);
            c.require(std::abs(t1.u(0, j) - ml::eval({alpha, 1.0}, z)) <= 1e-10,
                      "S1 kernel mismatch");
            c.require(std::abs(t2.u(0, j) - t * ml::eval({alpha, 2.0}, z)) <= 1e-10,
                      "S2 kernel mismatch");
        }
        // constant source: Duhamel equals the kernel moment
        auto f = fl::SourceTerm::zero(1, grid);
        for (std::size_t j = 0; j < grid.nodes.size(); ++j) f.at(0, j) = 1.0;
        const auto t3 = fl::solve_linear(basis, alpha, {0.0}, {0.0}, f, grid);
        for (std::size_t j = 1; j < grid.nodes.size(); ++j) {
            const double expect = ml::moment(alpha, lambda, grid.nodes[j]);
            c.require(std::abs(t3.u(0, j) - expect) <= 1e-8, "constant-source Duhamel mismatch");
        }
        // L1-scheme Caputo residual decreases under grid halving (>= 3 refinements);
        // measured on the lambda = 1 mode, away from the t = 0 kernel singularity
        const auto rbasis = sp::build_interval_basis(kPi, 1);
        const double rlambda = rbasis.eigenvalues[0];
        std::vector<double> residuals;
        for (std::size_t M : {32, 64, 128, 256}) {
            const auto g = fl::TimeGrid::uniform(1.0, M);
            const auto tr =
                fl::solve_linear(rbasis, alpha, {1.0}, {0.0}, fl::SourceTerm::zero(1, g), g);
            std::vector<double> uk(g.nodes.size());
            for (std::size_t j = 0; j < uk.size(); ++j) uk[j] = tr.u(0, j);
            // exact second differences of the trajectory feed the oracle
            const double h = g.nodes[1] - g.nodes[0];
            const double gam = 1.0 / std::tgamma(3.0 - alpha);
            double worstr = 0.0;
            std::vector<double> upp(uk.size() - 1, 0.0);
            for (std::size_t j = 1; j + 1 < uk.size(); ++j)
                upp[j] = (uk[j + 1] - 2.0 * uk[j] + uk[j - 1]) / (h * h);
            upp[0] = upp[1];
            for (std::size_t j = 2; j < uk.size(); ++j) {
                if (g.nodes[j] < 0.25) continue;
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 <= j; ++i) {
                    const double a1 = g.nodes[j] - g.nodes[i + 1], a0 = g.nodes[j] - g.nodes[i];
                    acc += (std::pow(a0, 2.0 - alpha) - std::pow(a1, 2.0 - alpha)) * gam * upp[i];
                }
                worstr = std::max(worstr, std::abs(acc + rlambda * uk[j]));
            }
            residuals.push_back(worstr);
        }
        for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
            c.require(residuals[i + 1] < residuals[i], "Caputo residual not decreasing");
    }
    c.require(now_seconds() - start < 60.0, "linear suite exceeded 60 s");
    return c;
}

// ---- criterion 4: Laplace-domain verification + negative control ----
Check criterion_4() {
    Check c;
    const auto basis = sp::build_interval_basis(kPi, 4);
    const double alpha = 1.4, T = 1.0;
    const auto grid = fl::TimeGrid::uniform(T, 48);

    const auto probe = lp::LaplaceProbe::log_spaced(0.5, 20.0, 12, 5.0 * T);

    // homogeneous data
    const sp::ModalCoeffs u0 = {1.0, -0.5, 0.25, 0.1};
    const sp::ModalCoeffs u1 = {0.2, 0.4, 0.0, -0.3};
    const auto zero = fl::SourceTerm::zero(4, grid);
    const auto rep_h = lp::verify_weak_solution(basis, alpha, u0, u1, zero, probe, 1e-4);
    c.require(rep_h.pass, "homogeneous residual " + std::to_string(rep_h.max_residual));

    // random band-limited (smoothed) source
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    auto f = fl::SourceTerm::zero(4, grid);
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> raw(grid.nodes.size());
        for (auto& v : raw) v = gauss(rng);
        for (int pass = 0; pass < 3; ++pass) {
            auto s = raw;
            for (std::size_t j = 1; j + 1 < s.size(); ++j)
                s[j] = 0.25 * raw[j - 1] + 0.5 * raw[j] + 0.25 * raw[j + 1];
            raw = s;
        }
        for (std::size_t j = 0; j < raw.size(); ++j) f.at(k, j) = raw[j];
    }
    const auto rep_r = lp::verify_weak_solution(basis, alpha, u0, u1, f, probe, 1e-4);
    c.require(rep_r.pass, "random-source residual " + std::to_string(rep_r.max_residual));

    // corrupted solution must FAIL
    const auto rep_bad = lp::verify_weak_solution(basis, alpha, u0, u1, zero, probe, 1e-4, 1.01);
    c.require(!rep_bad.pass, "corrupted trajectory not detected");
    return c;
}

// ---- criterion 5: exponent calculus vs independent transcription ----
Check criterion_5() {
    Check c;
    std::size_t disagreements = 0;
    for (int d = 1; d <= 3; ++d) {
        for (int ia = 1; ia <= 63; ++ia) {
            const double alpha = 1.0 + ia / 64.0;
            for (int ig = 1; ig <= 63; ++ig) {
                const double gamma = ig / 64.0;
                const auto got = st::admissible_exponents(d, alpha, gamma);
                // independent transcription of the q rule and p bound
                const bool q_range = (4.0 * gamma == d);
                const double q = 4.0 * gamma > d ? st::kInf : (2.0 * d) / (d - 4.0 * gamma);
                const bool p_inf = gamma <= (alpha - 1.0) / alpha;
                const double p_sup = p_inf ? st::kInf : 1.0 / (1.0 - alpha + alpha * gamma);
                const bool same_q =
                    got.q_is_range == q_range && (q_range || got.q == q ||
                                                  std::abs(got.q - q) <= 1e-13 * q);
                const bool same_p =
                    got.p_must_be_inf == p_inf &&
                    (p_inf || std::abs(got.p_sup - p_sup) <= 1e-9 * p_sup);
                if (!(same_q && same_p)) ++disagreements;
            }
        }
    }
    c.require(disagreements == 0,
              std::to_string(disagreements) + " admissibility disagreements");
    const auto so = st::derived_orders(1.5, 0.375);
    c.require(st::growth_exponent(1.5, 0.375, so.s, so.r, 4.0) == 0.6875,
              "hand-computed delta mismatch");
    return c;
}

// ---- criterion 6: Strichartz boundedness at N = 64, < 10 min ----
Check criterion_6() {
    Check c;
    const double start = now_seconds();
    const auto basis = sp::build_interval_basis(kPi, 64);
    const std::vector<double> horizons = {1.0, 2.0, 4.0, 8.0};
    const std::vector<st::ExponentSet> sets = {
        st::make_exponent_set(1, 1.5, 0.375, 4.0, st::kInf),
        st::make_exponent_set(1, 1.3, 0.5, 2.5, st::kInf),
        st::make_exponent_set(3, 1.7, 0.5, 6.0, 6.0),
    };
    for (const auto& e : sets) {
        const auto fit = st::estimate_constant(basis, e, horizons, 100, 321u, 64, 4);
        c.require(fit.delta_hat <= e.delta + 0.15, "fitted slope exceeds theory + 0.15");
        for (std::size_t it = 0; it < horizons.size(); ++it) {
            const double bound = fit.c0_hat * std::pow(1.0 + horizons[it], e.delta);
            c.require(fit.max_ratio[it] <= bound,
                      "ratio exceeds fitted C0 (1+T)^delta at T=" + std::to_string(horizons[it]));
        }
    }
    c.require(now_seconds() - start < 600.0, "estimation exceeded 10 min");
    return c;
}

// ---- criterion 7: contraction certification over the (b, alpha) matrix ----
Check criterion_7() {
    Check c;
    const auto interval = sp::build_interval_basis(kPi, 4, 2);
    const std::vector<double> box_lengths = {kPi, kPi};
    const auto box = sp::build_rectangle_basis(box_lengths, 4, 2);
    std::size_t runs = 0;

    for (int which = 0; which < 2; ++which) {
        const auto& basis = which == 0 ? interval : box;
        // exponent-set dimension: the d = 3 calculus drives interval runs
        // (the d = 1 window excludes b = 2, 2.5 entirely); the box uses d = 2
        const int d = which == 0 ? 3 : 2;
        for (double b : {2.0, 2.5}) {
            for (double alpha : {1.3, 1.5, 1.7}) {
                if (!se::check_b_window(d, alpha, b).admissible) continue;  // skip inadmissible
                const auto e = se::exponent_set_for_b(d, alpha, b);
                sp::ModalCoeffs u0(4, 0.0), u1(4, 0.0);
                u0[0] = 0.02;
                u1[1] = 0.01;
                const double n0 = fn::sobolev_norm(basis, u0, e.gamma);
                const double n1 = fn::sobolev_norm(basis, u1, e.s);
                const auto et = se::existence_time(n0, n1, e, 2.0, 5.0);
                se::PicardOptions opt;
                opt.max_iter = 25;
                opt.ball_radius = et.M;
                const auto res = se::picard_solve(basis, alpha, {b, 1.0}, u0, u1, e, et.T, 24, opt);
                c.require(res.report.status == se::PicardStatus::converged,
                          "no convergence within 25 iterations");
                for (double r : res.report.contraction_ratios)
                    c.require(r <= 2.0 / 3.0 + 0.05, "contraction ratio above 2/3 + 0.05");
                c.require(res.report.final_residual <=
                              2.0 * opt.tolerance * res.report.reference_norm_xt + 1e-15,
                          "fixed-point residual above 2x tolerance");
                ++runs;
            }
        }
    }
    c.require(runs >= 6, "too few admissible matrix entries exercised");
    return c;
}

// ---- criterion 8: fixed-point validity ----
Check criterion_8() {
    Check c;
    const auto basis = sp::build_interval_basis(kPi, 3, 2);
    const double alpha = 1.5;
    const auto e = se::exponent_set_for_b(3, alpha, 2.0);
    const se::NonlinearitySpec nl{2.0, 0.5};
    const sp::ModalCoeffs u0 = {0.3, -0.1, 0.05};
    const sp::ModalCoeffs u1 = {0.0, 0.1, 0.0};

    // Caputo residual with the projected nonlinearity as source, decreasing
    std::vector<double> residuals;
    for (std::size_t M : {32, 64, 128}) {
        const auto res = se::picard_solve(basis, alpha, nl, u0, u1, e, 1.0, M);
        c.require(res.report.status == se::PicardStatus::converged, "Picard did not converge");
        const auto& traj = res.trajectory;
        const auto& t = traj.grid.nodes;
        auto f = fl::SourceTerm::zero(3, traj.grid);
        double bad = 0.0;
        se::detail::nonlinear_source(basis, nl, traj, f, bad);
        const double h = t[1] - t[0];
        const double gam = 1.0 / std::tgamma(3.0 - alpha);
        double worst = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            std::vector<double> uk(t.size());
            for (std::size_t j = 0; j < t.size(); ++j) uk[j] = traj.u(k, j);
            std::vector<double> upp(t.size() - 1, 0.0);
            for (std::size_t j = 1; j + 1 < t.size(); ++j)
                upp[j] = (uk[j + 1] - 2.0 * uk[j] + uk[j - 1]) / (h * h);
            upp[0] = upp[1];
            for (std::size_t j = 2; j < t.size(); ++j) {
                if (t[j] < 0.25) continue;
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 <= j; ++i) {
                    const double a1 = t[j] - t[i + 1], a0 = t[j] - t[i];
                    acc += (std::pow(a0, 2.0 - alpha) - std::pow(a1, 2.0 - alpha)) * gam * upp[i];
                }
                worst = std::max(worst,
                                 std::abs(acc + traj.eigenvalues[k] * uk[j] - f.at(k, j)));
            }
        }
        residuals.push_back(worst);
    }
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i)
        c.require(residuals[i + 1] < residuals[i], "fixed-point Caputo residual not decreasing");

    // mu = 0 is bit-identical to the linear solver
    const auto grid = fl::TimeGrid::uniform(1.0, 32);
    const auto lin = fl::solve_linear(basis, alpha, u0, u1, fl::SourceTerm::zero(3, grid), grid);
    const auto mu0 = se::picard_solve(basis, alpha, {2.0, 0.0}, u0, u1, e, 1.0, 32);
    c.require(mu0.trajectory.modal_u == lin.modal_u, "mu = 0 run differs from the linear solver");
    return c;
}

// ---- criterion 9: small-data scaling of the existence time ----
Check criterion_9() {
    Check c;
    const auto basis = sp::build_interval_basis(kPi, 3, 2);
    const double alpha = 1.5, b = 2.0;
    const auto e = se::exponent_set_for_b(3, alpha, b);
    const sp::ModalCoeffs base_u0 = {0.05, -0.02, 0.01};
    const sp::ModalCoeffs base_u1 = {0.01, 0.02, 0.0};
    const double C = 5.0, T0 = 1e9;  // large cap so the power law is visible
    const double slope = -e.p * (b - 1.0) / (e.p - b);

    double n0 = fn::sobolev_norm(basis, base_u0, e.gamma);
    double n1 = fn::sobolev_norm(basis, base_u1, e.s);
    const double T_ref = se::existence_time(n0, n1, e, T0, C).T;

    for (double eps : {1.0, 0.5, 0.25, 0.125}) {
        const double T_eps = se::existence_time(eps * n0, eps * n1, e, T0, C).T;
        // log-log slope of T(eps) is exactly -p(b-1)/(p-b)
        const double measured = T_eps / (T_ref * std::pow(eps, slope));
        c.require(std::abs(measured - 1.0) <= 1e-10, "scaling slope off at eps");

        sp::ModalCoeffs u0 = base_u0, u1 = base_u1;
        for (auto& v : u0) v *= eps;
        for (auto& v : u1) v *= eps;
        se::PicardOptions opt;
        opt.max_iter = 25;
        opt.ball_radius = 2.0 * C * (eps * n0 + eps * n1);
        const auto res = se::picard_solve(basis, alpha, {b, 1.0}, u0, u1, e,
                                          std::min(T_eps, 8.0), 24, opt);
        c.require(res.report.status == se::PicardStatus::converged,
                  "Picard failed at scaled data eps");
    }
    return c;
}

// ---- criterion 10: byte-identical reports across thread counts ----
Check criterion_10() {
    Check c;
    const fs::path dir = fs::temp_directory_path() / "fracwave_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfgf(dir / "est.json");
        cfgf << R"({"domain": {"type": "interval", "length": 3.14159265358979323846,
                    "modes": 8, "oversample": 1},
                   "alpha": 1.5, "exponents": {"d": 1, "gamma": 0.375, "p": 4.0},
                   "estimate": {"horizons": [1.0, 2.0], "trials": 6, "time_steps": 16},
                   "seed": 77})";
    }
    const std::string cli = FRACWAVE_CLI_PATH;
    const auto run = [&](const std::string& out, const std::string& threads) {
        const std::string cmd = cli + " estimate-constant --config " + (dir / "est.json").string() +
                                " --out " + (dir / out).string() + " --threads " + threads +
                                " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    c.require(run("t1", "1") && run("t4", "4") && run("t1b", "1"), "CLI run failed");
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto a = slurp(dir / "t1" / "estimate.json");
    c.require(!a.empty(), "empty report");
    c.require(a == slurp(dir / "t4" / "estimate.json"), "reports differ across thread counts");
    c.require(a == slurp(dir / "t1b" / "estimate.json"), "reports differ across reruns");
    c.require(slurp(dir / "t1" / "draws.csv") == slurp(dir / "t4" / "draws.csv"),
              "draw CSVs differ across thread counts");
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"Mittag-Leffler accuracy and classical identities", criterion_1},
        {"decay bound (1+x)|E(-x)| across the parameter grid", criterion_2},
        {"linear solver closed forms and Caputo residual refinement", criterion_3},
        {"Laplace-domain weak-solution verification with negative control", criterion_4},
        {"exponent calculus vs independent transcription", criterion_5},
        {"space-time estimate boundedness at N = 64", criterion_6},
        {"Picard contraction certification over the (b, alpha) matrix", criterion_7},
        {"fixed-point validity: Caputo residual and mu = 0 equivalence", criterion_8},
        {"small-data scaling of the existence time", criterion_9},
        {"byte-identical reports across thread counts", criterion_10},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        if (c.ok) {
            std::printf("PASS criterion %zu: %s\n", i + 1, criteria[i].first.c_str());
        } else {
            std::printf("FAIL criterion %zu: %s (%s)\n", i + 1, criteria[i].first.c_str(),
                        c.detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures;
}
