#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "varex/constants.hpp"
#include "varex/errors.hpp"

namespace varex {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_legendre(int m) {
    GaussRule rule;
    rule.nodes.assign(m, 0.0);
    rule.weights.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        // Newton on P_m from the Chebyshev guess; roots are simple and interior.
        double x = std::cos(kPi * (4.0 * i + 3.0) / (4.0 * m + 2.0));
        double p1 = x, p0 = 1.0, dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            p0 = 1.0;
            p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int j = 2; j <= m; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[m - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[m - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
    return rule;
}

}  // namespace detail

/// Cached rule lookup; safe for concurrent readers.
inline const GaussRule& gauss_legendre(int m) {
    if (m < 1) throw InvalidGrid("Gauss-Legendre order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, detail::compute_gauss_legendre(m)).first;
    return it->second;
}

/// ∫_a^b f(t) dt with an m-point Gauss-Legendre rule.
template <typename F>
double integrate_gl(F&& f, double a, double b, int m) {
    const GaussRule& rule = gauss_legendre(m);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

/// ∫_a^b f(t) dt under t = a + (b-a)(1-cos phi)/2. The vanishing Jacobian at
/// the endpoints absorbs square-root kinks there (sphere-tangency behavior).
template <typename F>
double integrate_sqrt_endpoints(F&& f, double a, double b, int m) {
    const double half = 0.5 * (b - a);
    return half * integrate_gl(
                      [&](double phi) {
                          return f(a + half * (1.0 - std::cos(phi))) * std::sin(phi);
                      },
                      0.0, kPi, m);
}

}  // namespace varex
