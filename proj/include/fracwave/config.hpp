#pragma once

// Experiment configuration: JSON document -> validated, typed settings for
// the command-line front end. Every validation failure names the violated
// condition so run logs are self-explanatory.

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwave/semilinear.hpp"
#include "fracwave/spectral.hpp"
#include "fracwave/strichartz.hpp"
#include "fracwave/trajectory.hpp"

namespace fracwave::config {

/// Validation failure; `what()` cites the violated condition.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& condition) : std::runtime_error(condition) {}
};

struct DomainConfig {
    std::string type = "interval";  // "interval" | "rectangle"
    std::vector<double> lengths = {3.14159265358979323846};
    std::size_t modes = 8;
    std::size_t oversample = 2;
};

struct TimeConfig {
    double horizon = 0.0;  // explicit T; 0 means "derive from t0"
    double t0 = 1.0;       // existence-time cap T0 (semilinear)
    std::size_t steps = 64;
    double grading = 1.0;  // 1 = uniform, chi > 1 = graded toward t = 0
};

struct DataConfig {
    std::string u0 = "zero";
    std::string u1 = "zero";
    std::string f_spatial = "zero";
    std::string f_temporal = "constant";
};

struct ExponentOverrides {
    std::optional<int> d;
    std::optional<double> gamma;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<double> ell;
};

struct ProbeConfig {
    double p_min = 0.5;
    double p_max = 20.0;
    std::size_t count = 16;
    double t_max_factor = 5.0;  // t_max = factor * horizon
    std::string tail = "laguerre";
    double corruption = 1.0;  // negative-control hook
};

struct EstimateConfig {
    std::vector<double> horizons = {1.0, 2.0, 4.0, 8.0};
    std::size_t trials = 100;
    std::size_t time_steps = 64;
};

struct MlfConfig {
    double alpha = 1.5;
    double beta = 1.0;
    std::vector<double> x = {0.0, -1.0};
};

struct ExperimentConfig {
    DomainConfig domain;
    double alpha = 1.5;
    DataConfig data;
    semilinear::NonlinearitySpec nonlinearity{2.0, 0.0};
    TimeConfig time;
    ExponentOverrides exponents;
    ProbeConfig probe;
    EstimateConfig estimate;
    MlfConfig mlf;
    std::uint64_t seed = 1;
    double tolerance = 1e-10;
    std::size_t max_iter = 25;
    double constant = 0.0;  // Strichartz constant for existence_time; 0 = estimate it
    bool refine_check = false;
    double laplace_tolerance = 1e-4;
};

namespace detail {

inline void expect(bool ok, const std::string& condition) {
    if (!ok) throw ConfigError(condition);
}

template <class T>
void read_into(const nlohmann::json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using detail::expect;
    using detail::read_into;
    ExperimentConfig c;

    if (j.contains("domain")) {
        const auto& d = j.at("domain");
        read_into(d, "type", c.domain.type);
        if (d.contains("length")) c.domain.lengths = {d.at("length").get<double>()};
        read_into(d, "lengths", c.domain.lengths);
        read_into(d, "modes", c.domain.modes);
        read_into(d, "oversample", c.domain.oversample);
    }
    read_into(j, "alpha", c.alpha);
    if (j.contains("data")) {
        const auto& d = j.at("data");
        read_into(d, "u0", c.data.u0);
        read_into(d, "u1", c.data.u1);
        if (d.contains("f")) {
            const auto& f = d.at("f");
            if (f.is_string()) {
                c.data.f_spatial = f.get<std::string>();
            } else {
                read_into(f, "spatial", c.data.f_spatial);
                read_into(f, "temporal", c.data.f_temporal);
            }
        }
    }
    if (j.contains("nonlinearity")) {
        const auto& n = j.at("nonlinearity");
        read_into(n, "b", c.nonlinearity.b);
        read_into(n, "mu", c.nonlinearity.mu);
    }
    if (j.contains("time")) {
        const auto& t = j.at("time");
        read_into(t, "horizon", c.time.horizon);
        read_into(t, "t0", c.time.t0);
        read_into(t, "steps", c.time.steps);
        read_into(t, "grading", c.time.grading);
    }
    if (j.contains("exponents")) {
        const auto& e = j.at("exponents");
        if (e.contains("d")) c.exponents.d = e.at("d").get<int>();
        if (e.contains("gamma")) c.exponents.gamma = e.at("gamma").get<double>();
        if (e.contains("p")) c.exponents.p = e.at("p").get<double>();
        if (e.contains("q")) c.exponents.q = e.at("q").get<double>();
        if (e.contains("ell")) c.exponents.ell = e.at("ell").get<double>();
    }
    if (j.contains("probe")) {
        const auto& p = j.at("probe");
        read_into(p, "p_min", c.probe.p_min);
        read_into(p, "p_max", c.probe.p_max);
        read_into(p, "count", c.probe.count);
        read_into(p, "t_max_factor", c.probe.t_max_factor);
        read_into(p, "tail", c.probe.tail);
        read_into(p, "corruption", c.probe.corruption);
    }
    if (j.contains("estimate")) {
        const auto& e = j.at("estimate");
        read_into(e, "horizons", c.estimate.horizons);
        read_into(e, "trials", c.estimate.trials);
        read_into(e, "time_steps", c.estimate.time_steps);
    }
    if (j.contains("mlf")) {
        const auto& m = j.at("mlf");
        read_into(m, "alpha", c.mlf.alpha);
        read_into(m, "beta", c.mlf.beta);
        read_into(m, "x", c.mlf.x);
    }
    read_into(j, "seed", c.seed);
    read_into(j, "tolerance", c.tolerance);
    read_into(j, "max_iter", c.max_iter);
    read_into(j, "constant", c.constant);
    read_into(j, "refine_check", c.refine_check);
    read_into(j, "laplace_tolerance", c.laplace_tolerance);
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not readable: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return parse_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field has wrong type: ") + e.what());
    }
}

/// Common structural checks; command handlers add their own.
inline void validate_common(const ExperimentConfig& c) {
    using detail::expect;
    expect(c.domain.type == "interval" || c.domain.type == "rectangle",
           "domain.type must be \"interval\" or \"rectangle\"");
    if (c.domain.type == "interval")
        expect(c.domain.lengths.size() == 1, "interval domain needs exactly one length");
    else
        expect(c.domain.lengths.size() == 2 || c.domain.lengths.size() == 3,
               "rectangle domain needs 2 or 3 lengths");
    for (double L : c.domain.lengths) expect(L > 0.0, "domain lengths must be positive");
    expect(c.domain.modes >= 1, "domain.modes must be at least 1");
    expect(c.domain.oversample >= 1, "domain.oversample must be at least 1");
    expect(c.alpha > 1.0 && c.alpha < 2.0, "alpha must lie in (1,2)");
    expect(c.time.steps >= 2, "time.steps must be at least 2");
    expect(c.time.grading >= 1.0, "time.grading must be at least 1");
    expect(c.time.horizon >= 0.0, "time.horizon must be nonnegative");
    expect(c.time.t0 > 0.0, "time.t0 must be positive");
    expect(c.tolerance > 0.0, "tolerance must be positive");
}

inline spectral::EigenBasis build_basis(const DomainConfig& d) {
    if (d.type == "interval")
        return spectral::build_interval_basis(d.lengths[0], d.modes, d.oversample);
    return spectral::build_rectangle_basis(d.lengths, d.modes, d.oversample);
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Built-in spatial data profiles:
///   "zero", "mode:k" (k-th eigenfunction), "constant:c" (all coefficients
///   c), "bump" (product of x_i (L_i - x_i), projected), "random" or
///   "random:s" (Gaussian coefficients with lambda_k^{-1} decay).
inline spectral::ModalCoeffs make_coeffs(const std::string& profile,
                                         const spectral::EigenBasis& basis,
                                         const std::vector<double>& lengths, std::uint64_t seed) {
    const std::size_t N = basis.mode_count;
    spectral::ModalCoeffs c(N, 0.0);
    if (profile == "zero") return c;
    if (profile.rfind("mode:", 0) == 0) {
        const long k = std::stol(profile.substr(5));
        if (k < 1 || static_cast<std::size_t>(k) > N)
            throw ConfigError("data profile mode:k needs 1 <= k <= modes");
        c[static_cast<std::size_t>(k - 1)] = 1.0;
        return c;
    }
    if (profile.rfind("constant:", 0) == 0) {
        const double v = std::stod(profile.substr(9));
        for (auto& x : c) x = v;
        return c;
    }
    if (profile == "bump") {
        const auto vals = spectral::sample(basis, [&](std::span<const double> x) {
            double v = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i) v *= x[i] * (lengths[i] - x[i]);
            return v;
        });
        return spectral::project(basis, vals);
    }
    if (profile == "random" || profile.rfind("random:", 0) == 0) {
        std::uint64_t s = seed;
        if (profile.size() > 7) s = std::stoull(profile.substr(7));
        std::mt19937_64 rng(detail::mix_seed(s));
        std::normal_distribution<double> gauss;
        for (std::size_t k = 0; k < N; ++k) c[k] = gauss(rng) / basis.eigenvalues[k];
        return c;
    }
    throw ConfigError("unknown data profile \"" + profile +
                      "\" (expected zero, mode:k, constant:c, bump, random[:seed])");
}

/// Temporal source profiles: "constant", "sin:w", "exp:r".
inline double temporal_factor(const std::string& profile, double t) {
    if (profile == "constant") return 1.0;
    if (profile.rfind("sin:", 0) == 0) return std::sin(std::stod(profile.substr(4)) * t);
    if (profile.rfind("exp:", 0) == 0) return std::exp(std::stod(profile.substr(4)) * t);
    throw ConfigError("unknown temporal profile \"" + profile +
                      "\" (expected constant, sin:w, exp:r)");
}

inline linear::SourceTerm make_source(const ExperimentConfig& c, const spectral::EigenBasis& basis,
                                      const linear::TimeGrid& grid) {
    auto f = linear::SourceTerm::zero(basis.mode_count, grid);
    if (c.data.f_spatial == "zero") return f;
    const auto coeffs = make_coeffs(c.data.f_spatial, basis, c.domain.lengths, c.seed + 2);
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        const double g = temporal_factor(c.data.f_temporal, grid.nodes[j]);
        for (std::size_t k = 0; k < basis.mode_count; ++k) f.at(k, j) = coeffs[k] * g;
    }
    return f;
}

/// Exponent set for the configured problem: derived from the nonlinearity
/// power by default, with per-field overrides applied and re-validated.
inline strichartz::ExponentSet resolve_exponents(const ExperimentConfig& c) {
    const int d = c.exponents.d.value_or(static_cast<int>(c.domain.lengths.size()));
    strichartz::ExponentSet e;
    if (c.exponents.gamma) {
        const double gamma = *c.exponents.gamma;
        const auto adm = strichartz::admissible_exponents(d, c.alpha, gamma);
        double q = c.exponents.q.value_or(adm.q_is_range ? 4.0 : adm.q);
        double p;
        if (c.exponents.p) {
            p = *c.exponents.p;
        } else if (adm.p_must_be_inf) {
            p = strichartz::kInf;
        } else {
            p = 0.5 * (1.0 + adm.p_sup);  // midpoint of (1, sup)
        }
        if (!strichartz::is_admissible(d, c.alpha, gamma, p, q))
            throw ConfigError("exponents (p, q, gamma) violate the admissibility conditions");
        e = strichartz::make_exponent_set(d, c.alpha, gamma, p, q);
    } else {
        const auto w = semilinear::check_b_window(d, c.alpha, c.nonlinearity.b);
        if (w.degenerate)
            throw ConfigError("b-window is empty: d*alpha + 4(1-alpha) <= 0 for this (d, alpha)");
        if (!w.admissible)
            throw ConfigError("nonlinearity.b outside the admissible window (" +
                              std::to_string(w.lower) + ", " + std::to_string(w.upper) + ")");
        e = semilinear::exponent_set_for_b(d, c.alpha, c.nonlinearity.b);
        if (c.exponents.p) {
            if (!strichartz::is_admissible(d, c.alpha, e.gamma, *c.exponents.p, e.q) ||
                !(*c.exponents.p > e.b))
                throw ConfigError("exponents.p override violates b < p < 1/(1-alpha(1-gamma))");
            e.p = *c.exponents.p;
            e.delta = strichartz::growth_exponent(c.alpha, e.gamma, e.s, e.r, e.p);
        }
    }
    if (c.exponents.ell) {
        if (!(*c.exponents.ell >= 1.0 && *c.exponents.ell < 1.0 / (2.0 - c.alpha)))
            throw ConfigError("exponents.ell must lie in [1, 1/(2-alpha))");
        e.ell = *c.exponents.ell;
    }
    return e;
}

}  // namespace fracwave::config
