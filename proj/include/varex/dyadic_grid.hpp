#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "varex/constants.hpp"
#include "varex/errors.hpp"
#include "varex/quadrature.hpp"

namespace varex {

/// Radial quadrature over the dyadic annuli A_k = B_k \ B_{k-1},
/// k in [k_min, k_max]. Nodes are Gauss-Legendre in log-radius per annulus;
/// weights carry sigma_n r^{n-1} and the log-substitution Jacobian, so
/// sum(w_i g(r_i)) approximates the n-dimensional integral of the radial
/// integrand g over the selected annuli.
class DyadicGrid {
public:
    static DyadicGrid build(int n, int k_min, int k_max, int nodes_per_annulus) {
        if (n < 1) throw InvalidGrid("dimension must be >= 1");
        if (k_min >= k_max) throw InvalidGrid("k_min must be < k_max");
        if (nodes_per_annulus < 4) throw InvalidGrid("nodes_per_annulus must be >= 4");
        DyadicGrid g;
        g.n_ = n;
        g.k_min_ = k_min;
        g.k_max_ = k_max;
        g.m_ = nodes_per_annulus;
        g.sphere_ = SphereConstants::make(n);
        const GaussRule& rule = gauss_legendre(nodes_per_annulus);
        const double ln2 = std::log(2.0);
        g.radii_.reserve(static_cast<std::size_t>(g.annulus_count()) * nodes_per_annulus);
        g.weights_.reserve(g.radii_.capacity());
        for (int k = k_min; k <= k_max; ++k) {
            const double u0 = (k - 1) * ln2;
            const double u1 = k * ln2;
            const double mid = 0.5 * (u0 + u1);
            const double half = 0.5 * (u1 - u0);
            for (int i = 0; i < nodes_per_annulus; ++i) {
                const double u = mid + half * rule.nodes[i];
                g.radii_.push_back(std::exp(u));
                g.weights_.push_back(half * rule.weights[i] * g.sphere_.sigma_n *
                                     std::exp(n * u));
            }
        }
        return g;
    }

    int dimension() const { return n_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    int nodes_per_annulus() const { return m_; }
    int annulus_count() const { return k_max_ - k_min_ + 1; }
    std::size_t size() const { return radii_.size(); }
    const SphereConstants& sphere() const { return sphere_; }

    std::span<const double> radii() const { return radii_; }
    std::span<const double> weights() const { return weights_; }

    /// Half-open node index range [begin, end) of annulus k.
    std::pair<std::size_t, std::size_t> annulus_slice(int k) const {
        check_annulus(k);
        const std::size_t b = static_cast<std::size_t>(k - k_min_) * m_;
        return {b, b + m_};
    }

    int annulus_of(std::size_t index) const {
        return k_min_ + static_cast<int>(index / m_);
    }

    /// |A_k| = v_n 2^{kn} (1 - 2^{-n}), exact.
    double annulus_measure(int k) const {
        check_annulus(k);
        return sphere_.v_n * std::ldexp(1.0, k * n_) * (1.0 - std::ldexp(1.0, -n_));
    }

    /// |B_k| = v_n 2^{kn}, exact.
    double ball_measure(int k) const { return sphere_.v_n * std::ldexp(1.0, k * n_); }

    double inner_radius() const { return dyadic(k_min_ - 1); }
    double outer_radius() const { return dyadic(k_max_); }

private:
    void check_annulus(int k) const {
        if (k < k_min_ || k > k_max_) throw InvalidGrid("annulus index outside grid");
    }

    int n_ = 0, k_min_ = 0, k_max_ = 0, m_ = 0;
    SphereConstants sphere_;
    std::vector<double> radii_;
    std::vector<double> weights_;
};

inline DyadicGrid build_grid(int n, int k_min, int k_max, int nodes_per_annulus) {
    return DyadicGrid::build(n, k_min, k_max, nodes_per_annulus);
}

/// Integral of the radial integrand g over annuli [k_lo, k_hi] (defaults to
/// the whole grid). Signals NonFiniteIntegrand on non-finite node values.
template <typename G>
double integrate_radial(const DyadicGrid& grid, G&& g,
                        std::optional<std::pair<int, int>> k_range = std::nullopt) {
    int k_lo = grid.k_min(), k_hi = grid.k_max();
    if (k_range) {
        k_lo = k_range->first;
        k_hi = k_range->second;
        if (k_lo > k_hi || k_lo < grid.k_min() || k_hi > grid.k_max())
            throw InvalidGrid("annulus range outside grid");
    }
    const auto [b, unused] = grid.annulus_slice(k_lo);
    const auto [b2, e] = grid.annulus_slice(k_hi);
    (void)unused;
    (void)b2;
    double sum = 0.0;
    const auto radii = grid.radii();
    const auto weights = grid.weights();
    for (std::size_t i = b; i < e; ++i) {
        const double v = g(radii[i]);
        if (!std::isfinite(v)) throw NonFiniteIntegrand("integrand not finite at node");
        sum += weights[i] * v;
    }
    return sum;
}

}  // namespace varex
