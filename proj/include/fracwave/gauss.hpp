#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracwave {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes/weights by Newton iteration on P_n; accurate to ~1e-15 for n <= 64.
inline GaussRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // recurrence for P_n(x) and P_n'(x)
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Gauss-Laguerre rule: integrates f against e^{-x} on [0, inf) exactly for
/// polynomials of degree 2n-1. Weights via w_i = x_i / ((n+1) L_{n+1}(x_i))^2.
inline GaussRule gauss_laguerre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_laguerre: n must be positive");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // starting guesses (standard for Laguerre roots)
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * static_cast<double>(n));
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * static_cast<double>(n));
        } else {
            const double ai = static_cast<double>(i - 1);
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p0 = 1.0, p1 = 1.0 - z;  // L_0, L_1
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 =
                    ((2.0 * k - 1.0 - z) * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            pp = static_cast<double>(n) * (p1 - p0) / z;  // L_n'
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, z)) break;
        }
        // L_{n+1} at the root of L_n
        double p0 = 1.0, p1 = 1.0 - z;
        for (std::size_t k = 2; k <= n + 1; ++k) {
            const double p2 = ((2.0 * k - 1.0 - z) * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        rule.nodes[i] = z;
        const double np1 = static_cast<double>(n + 1) * p1;
        rule.weights[i] = z / (np1 * np1);
    }
    return rule;
}

/// Composite quadrature over breakpoints with a fixed per-panel rule.
template <class F>
double integrate_panels(F&& f, std::span<const double> breakpoints, const GaussRule& rule) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i], b = breakpoints[i + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double panel = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            panel += rule.weights[j] * f(mid + half * rule.nodes[j]);
        total += half * panel;
    }
    return total;
}

/// Integral of sampled values over a node set: composite Simpson on
/// consecutive triples (exact for cubics on uniform grids), trapezoid
/// on a trailing odd interval.
inline double integrate_samples(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw std::invalid_argument("integrate_samples: size mismatch");
    if (t.size() < 2) return 0.0;
    double total = 0.0;
    std::size_t i = 0;
    while (i + 2 < t.size()) {
        const double h0 = t[i + 1] - t[i], h1 = t[i + 2] - t[i + 1];
        const double H = h0 + h1;
        // quadratic through (t_i, t_{i+1}, t_{i+2})
        total += H / 6.0 *
                 ((2.0 - h1 / h0) * y[i] + H * H / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
        i += 2;
    }
    if (i + 1 < t.size()) total += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
    return total;
}

}  // namespace fracwave
