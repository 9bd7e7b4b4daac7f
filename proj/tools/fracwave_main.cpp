// Command-line front end: configuration-driven runs of the linear and
// semilinear solvers, the Laplace-domain verifier, the exponent calculators
// and the constant-estimation experiment. One experiment per invocation;
// artifacts are written atomically into the output directory.
//
// Exit codes: 0 success/PASS, 1 validation error, 2 verification FAIL,
// 3 divergence / non-convergence.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracwave/config.hpp"
#include "fracwave/laplace.hpp"
#include "fracwave/linear.hpp"
#include "fracwave/mlf.hpp"
#include "fracwave/report.hpp"
#include "fracwave/semilinear.hpp"
#include "fracwave/spectral.hpp"
#include "fracwave/strichartz.hpp"

namespace cfg = fracwave::config;
namespace rpt = fracwave::report;
namespace fl = fracwave::linear;
namespace sp = fracwave::spectral;
namespace se = fracwave::semilinear;
namespace st = fracwave::strichartz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerifyFail = 2;
constexpr int kExitDivergence = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;  // 0 = keep the config's seed
    std::size_t threads = 1;
};

cfg::ExperimentConfig load(const CommonArgs& args) {
    auto c = cfg::load_config(args.config_path);
    if (args.seed != 0) c.seed = args.seed;
    return c;
}

void write_json(const CommonArgs& args, const std::string& name, const rpt::Json& doc) {
    std::filesystem::create_directories(args.out_dir);
    rpt::write_atomic(std::filesystem::path(args.out_dir) / name, doc.dump());
}

void write_text(const CommonArgs& args, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(args.out_dir);
    rpt::write_atomic(std::filesystem::path(args.out_dir) / name, text);
}

void write_error(const CommonArgs& args, const std::string& message) {
    rpt::Json doc;
    doc.set("schema", std::int64_t(1));
    doc.set("error", message);
    try {
        write_json(args, "error.json", doc);
    } catch (...) {
        // the error itself is still reported via exit code and stderr
    }
    std::fprintf(stderr, "error: %s\n", message.c_str());
}

fl::TimeGrid make_grid(const cfg::ExperimentConfig& c, double horizon) {
    if (c.time.grading > 1.0) return fl::TimeGrid::graded(horizon, c.time.steps, c.time.grading);
    return fl::TimeGrid::uniform(horizon, c.time.steps);
}

rpt::Json exponents_json(const st::ExponentSet& e) {
    rpt::Json doc;
    doc.set("d", std::int64_t(e.d));
    doc.set("alpha", e.alpha);
    doc.set("b", e.b);
    doc.set("gamma", e.gamma);
    doc.set("q", e.q);
    doc.set("p", e.p);
    doc.set("s", e.s);
    doc.set("r", e.r);
    doc.set("delta", e.delta);
    doc.set("ell", e.ell);
    return doc;
}

// ---------------------------------------------------------------- commands

int cmd_solve_linear(const CommonArgs& args) {
    const auto c = load(args);
    cfg::validate_common(c);
    const auto basis = cfg::build_basis(c.domain);
    const double T = c.time.horizon > 0.0 ? c.time.horizon : c.time.t0;
    const auto grid = make_grid(c, T);
    const auto u0 = cfg::make_coeffs(c.data.u0, basis, c.domain.lengths, c.seed);
    const auto u1 = cfg::make_coeffs(c.data.u1, basis, c.domain.lengths, c.seed + 1);
    const auto f = cfg::make_source(c, basis, grid);

    auto traj = fl::solve_linear_derivative(fl::solve_linear(basis, c.alpha, u0, u1, f, grid));
    const auto stab = fl::stability_report(traj);

    rpt::Json doc;
    doc.set("schema", std::int64_t(1));
    doc.set("command", "solve-linear");
    doc.set("alpha", c.alpha);
    doc.set("modes", basis.mode_count);
    doc.set("horizon", T);
    doc.set("steps", c.time.steps);
    doc.set("grading", c.time.grading);
    doc.set("seed", std::int64_t(c.seed));

    std::vector<double> l2(grid.nodes.size());
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) l2[j] = traj.l2_at(j);
    rpt::Json norms;
    norms.set("sup_l2", stab.sup_l2);
    norms.set("data_c_l2", stab.data_c_l2);
    norms.set("ratio_c_l2", stab.ratio_c_l2);
    norms.set("w11", stab.w11);
    norms.set("data_w11", stab.data_w11);
    norms.set("ratio_w11", stab.ratio_w11);
    norms.set("l2_per_node", l2);
    doc.set("norms", std::move(norms));

    if (c.refine_check) {
        // re-solve at doubled resolution and compare on the shared nodes
        const auto grid2 = fl::TimeGrid::uniform(T, 2 * c.time.steps);
        const auto f2 = cfg::make_source(c, basis, grid2);
        const auto fine = fl::solve_linear(basis, c.alpha, u0, u1, f2, grid2);
        double worst = 0.0;
        for (std::size_t j = 0; j < grid.nodes.size(); ++j)
            for (std::size_t k = 0; k < basis.mode_count; ++k)
                worst = std::max(worst, std::abs(traj.u(k, j) - fine.u(k, 2 * j)));
        rpt::Json refine;
        refine.set("max_difference", worst);
        doc.set("refinement", std::move(refine));
    }

    write_text(args, "trajectory.csv", rpt::trajectory_csv(traj));
    write_json(args, "report.json", doc);
    return kExitOk;
}

int cmd_verify_laplace(const CommonArgs& args) {
    const auto c = load(args);
    cfg::validate_common(c);
    if (!(c.probe.p_min > 0.0 && c.probe.p_max > c.probe.p_min))
        throw cfg::ConfigError("probe requires 0 < p_min < p_max");
    if (c.probe.count < 2) throw cfg::ConfigError("probe.count must be at least 2");
    if (!(c.probe.t_max_factor >= 1.0)) throw cfg::ConfigError("probe.t_max_factor must be >= 1");
    if (c.probe.tail != "laguerre" && c.probe.tail != "bound")
        throw cfg::ConfigError("probe.tail must be \"laguerre\" or \"bound\"");

    const auto basis = cfg::build_basis(c.domain);
    const double T = c.time.horizon > 0.0 ? c.time.horizon : c.time.t0;
    const auto grid = make_grid(c, T);
    const auto u0 = cfg::make_coeffs(c.data.u0, basis, c.domain.lengths, c.seed);
    const auto u1 = cfg::make_coeffs(c.data.u1, basis, c.domain.lengths, c.seed + 1);
    const auto f = cfg::make_source(c, basis, grid);

    auto probe = fracwave::laplace::LaplaceProbe::log_spaced(c.probe.p_min, c.probe.p_max,
                                                             c.probe.count,
                                                             c.probe.t_max_factor * T);
    probe.tail_mode = c.probe.tail == "bound" ? fracwave::laplace::LaplaceProbe::TailMode::bound
                                              : fracwave::laplace::LaplaceProbe::TailMode::laguerre;
    const auto rep = fracwave::laplace::verify_weak_solution(basis, c.alpha, u0, u1, f, probe,
                                                             c.laplace_tolerance,
                                                             c.probe.corruption);

    rpt::Json doc;
    doc.set("schema", std::int64_t(1));
    doc.set("command", "verify-laplace");
    doc.set("alpha", c.alpha);
    doc.set("tolerance", rep.tolerance);
    doc.set("max_residual", rep.max_residual);
    doc.set("p_values", rep.p_values);
    doc.set("per_p_max", rep.per_p_max);
    doc.set("per_mode_max", rep.per_mode_max);
    doc.set("pass", rep.pass);
    write_json(args, "laplace.json", doc);
    return rep.pass ? kExitOk : kExitVerifyFail;
}

int cmd_exponents(const CommonArgs& args) {
    const auto c = load(args);
    cfg::validate_common(c);
    const int d = c.exponents.d.value_or(static_cast<int>(c.domain.lengths.size()));

    rpt::Json doc;
    doc.set("schema", std::int64_t(1));
    doc.set("command", "exponents");
    doc.set("d", std::int64_t(d));
    doc.set("alpha", c.alpha);
    doc.set("b", c.nonlinearity.b);

    const auto w = se::check_b_window(d, c.alpha, c.nonlinearity.b);
    rpt::Json win;
    win.set("degenerate", w.degenerate);
    win.set("lower", w.lower);
    win.set("upper", w.upper);
    win.set("admissible", w.admissible);
    doc.set("b_window", std::move(win));

    if (c.exponents.gamma || w.admissible) {
        const auto e = cfg::resolve_exponents(c);
        doc.set("exponents", exponents_json(e));
        const auto adm = st::admissible_exponents(e.d, e.alpha, e.gamma);
        rpt::Json rules;
        rules.set("q_is_range", adm.q_is_range);
        rules.set("q", adm.q);
        rules.set("p_must_be_inf", adm.p_must_be_inf);
        rules.set("p_sup", adm.p_sup);
        doc.set("admissibility", std::move(rules));
        if (w.admissible) {
            // the p-interval the midpoint default is drawn from
            rpt::Json pw;
            pw.set("lower", std::max(c.nonlinearity.b, w.upper));
            pw.set("upper", 1.0 / (1.0 - c.alpha * (1.0 - e.gamma)));
            doc.set("p_window", std::move(pw));
        }
    } else {
        doc.set("rejected", true);
    }
    write_json(args, "exponents.json", doc);
    return kExitOk;
}

int cmd_estimate_constant(const CommonArgs& args) {
    const auto c = load(args);
    cfg::validate_common(c);
    if (c.estimate.horizons.empty()) throw cfg::ConfigError("estimate.horizons must be nonempty");
    if (c.estimate.trials < 1) throw cfg::ConfigError("estimate.trials must be at least 1");
    const auto basis = cfg::build_basis(c.domain);
    const auto e = cfg::resolve_exponents(c);
    const auto fit = st::estimate_constant(basis, e, c.estimate.horizons, c.estimate.trials,
                                           c.seed, c.estimate.time_steps, args.threads);

    rpt::Json doc;
    doc.set("schema", std::int64_t(1));
    doc.set("command", "estimate-constant");
    doc.set("seed", std::int64_t(c.seed));
    doc.set("trials", c.estimate.trials);
    doc.set("exponents", exponents_json(e));
    doc.set("horizons", fit.horizons);
    doc.set("max_ratio", fit.max_ratio);
    doc.set("degenerate_draws", fit.degenerate_draws);
    doc.set("c0_hat", fit.c0_hat);
    doc.set("delta_hat", fit.delta_hat);
    doc.set("delta_theory", fit.delta_theory);
    write_json(args, "estimate.json", doc);

    std::string csv = "horizon,trial,ratio\n";
    char buf[96];
    for (std::size_t it = 0; it < fit.horizons.size(); ++it)
        for (std::size_t tr = 0; tr < fit.draw_ratios[it].size(); ++tr) {
            std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g\n", fit.horizons[it], tr + 1,
                          fit.draw_ratios[it][tr]);
            csv += buf;
        }
    write_text(args, "draws.csv", csv);
    return kExitOk;
}

int cmd_solve_semilinear(const CommonArgs& args) {
    const auto c = load(args);
    cfg::validate_common(c);
    c.nonlinearity.validate();
    const auto basis = cfg::build_basis(c.domain);
    const auto e = cfg::resolve_exponents(c);
    const auto u0 = cfg::make_coeffs(c.data.u0, basis, c.domain.lengths, c.seed);
    const auto u1 = cfg::make_coeffs(c.data.u1, basis, c.domain.lengths, c.seed + 1);
    const double n0 = fracwave::norms::sobolev_norm(basis, u0, e.gamma);
    const double n1 = fracwave::norms::sobolev_norm(basis, u1, e.s);

    // Strichartz constant: configured, or fitted on the fly (2x safety)
    double c_raw = c.constant;
    double c0_hat = 0.0, delta_hat = 0.0;
    if (c_raw <= 0.0) {
        const auto fit = st::estimate_constant(basis, e, {1.0, 2.0, 4.0}, 8, c.seed, 32,
                                               args.threads);
        c0_hat = fit.c0_hat;
        delta_hat = fit.delta_hat;
        c_raw = 2.0 * fit.c0_hat * std::pow(1.0 + c.time.t0, e.delta);
    }
    const double C = se::assemble_constant(c_raw, c.nonlinearity.cb());
    const auto et = se::existence_time(n0, n1, e, c.time.t0, C);
    const double T = c.time.horizon > 0.0 ? c.time.horizon : et.T;

    se::PicardOptions opt;
    opt.tolerance = c.tolerance;
    opt.max_iter = c.max_iter;
    opt.ball_radius = et.M;
    auto res = se::picard_solve(basis, c.alpha, c.nonlinearity, u0, u1, e, T, c.time.steps, opt);

    rpt::Json doc;
    doc.set("schema", std::int64_t(1));
    doc.set("command", "solve-semilinear");
    doc.set("alpha", c.alpha);
    doc.set("b", c.nonlinearity.b);
    doc.set("mu", c.nonlinearity.mu);
    doc.set("seed", std::int64_t(c.seed));
    doc.set("exponents", exponents_json(e));
    doc.set("data_norm_u0", n0);
    doc.set("data_norm_u1", n1);
    doc.set("constant_raw", c_raw);
    doc.set("constant_assembled", C);
    if (c0_hat > 0.0) {
        doc.set("fitted_c0_hat", c0_hat);
        doc.set("fitted_delta_hat", delta_hat);
    }
    doc.set("existence_time", et.T);
    doc.set("ball_radius", et.M);
    doc.set("horizon_used", T);

    const auto horizon = se::small_data_horizon(n0, n1, e, std::max(c_raw, 1e-300));
    rpt::Json sd;
    sd.set("hypothesis_holds", horizon.hypothesis_holds);
    sd.set("unbounded", horizon.unbounded);
    sd.set("bound", horizon.bound);
    doc.set("small_data_horizon", std::move(sd));

    const auto& rep = res.report;
    rpt::Json picard;
    const char* status = rep.status == se::PicardStatus::converged       ? "converged"
                         : rep.status == se::PicardStatus::diverged      ? "diverged"
                         : rep.status == se::PicardStatus::blow_up       ? "blow_up"
                                                                         : "max_iterations";
    picard.set("status", status);
    picard.set("iterate_count", rep.iterate_count);
    picard.set("contraction_ratios", rep.contraction_ratios);
    picard.set("step_norms_xt", rep.step_norms_xt);
    picard.set("iterate_yt_norms", rep.iterate_yt_norms);
    picard.set("final_residual", rep.final_residual);
    picard.set("reference_norm_xt", rep.reference_norm_xt);
    picard.set("stayed_in_ball", rep.stayed_in_ball);
    if (rep.status == se::PicardStatus::blow_up) picard.set("blow_up_time", rep.blow_up_time);
    doc.set("picard", std::move(picard));

    // derivative via the linear formula with the converged source
    if (rep.status == se::PicardStatus::converged)
        res.trajectory = fl::solve_linear_derivative(std::move(res.trajectory));
    write_text(args, "trajectory.csv", rpt::trajectory_csv(res.trajectory));
    write_json(args, "semilinear.json", doc);
    return rep.status == se::PicardStatus::converged ? kExitOk : kExitDivergence;
}

int cmd_mlf_eval(const CommonArgs& args) {
    const auto c = load(args);
    if (!(c.mlf.alpha > 0.0 && c.mlf.alpha <= 2.0))
        throw cfg::ConfigError("mlf.alpha must lie in (0,2]");
    for (double x : c.mlf.x)
        if (x > 0.0) throw cfg::ConfigError("mlf.x values must be nonpositive");

    std::vector<double> values(c.mlf.x.size());
    for (std::size_t i = 0; i < c.mlf.x.size(); ++i)
        values[i] = fracwave::mlf::eval({c.mlf.alpha, c.mlf.beta}, c.mlf.x[i]);

    rpt::Json doc;
    doc.set("schema", std::int64_t(1));
    doc.set("command", "mlf-eval");
    doc.set("alpha", c.mlf.alpha);
    doc.set("beta", c.mlf.beta);
    doc.set("x", c.mlf.x);
    doc.set("values", values);
    write_json(args, "mlf.json", doc);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracwave: fractional wave equation laboratory"};
    app.require_subcommand(1);

    CommonArgs args;
    int (*handler)(const CommonArgs&) = nullptr;

    const auto add = [&](const std::string& name, const std::string& desc,
                         int (*fn)(const CommonArgs&)) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", args.config_path, "experiment configuration (JSON)")
            ->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--seed", args.seed, "override the config RNG seed");
        sub->add_option("--threads", args.threads, "worker threads for trial batches");
        sub->callback([&, fn]() { handler = fn; });
    };
    add("solve-linear", "solve the linear problem, write trajectory and norms", cmd_solve_linear);
    add("solve-semilinear", "Picard fixed-point solve of the semilinear problem",
        cmd_solve_semilinear);
    add("verify-laplace", "verify the Laplace-domain resolvent identity", cmd_verify_laplace);
    add("exponents", "admissibility windows and derived exponent sets", cmd_exponents);
    add("estimate-constant", "empirical space-time estimate constant fit", cmd_estimate_constant);
    add("mlf-eval", "evaluate the two-parameter Mittag-Leffler function", cmd_mlf_eval);

    CLI11_PARSE(app, argc, argv);

    try {
        return handler(args);
    } catch (const cfg::ConfigError& e) {
        write_error(args, e.what());
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        write_error(args, e.what());
        return kExitValidation;
    } catch (const std::domain_error& e) {
        write_error(args, e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        write_error(args, e.what());
        return kExitValidation;
    }
}
