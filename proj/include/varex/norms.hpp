#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varex/dyadic_grid.hpp"
#include "varex/errors.hpp"
#include "varex/exponent_field.hpp"
#include "varex/radial_function.hpp"

namespace varex {

enum class NormStatus { Converged, ZeroFunction, TailWarning };

/// A computed norm with its convergence diagnostics. modular_at_value is set
/// for plain/weighted Luxemburg norms (F_q(f/value)); the Herz-Morrey norm
/// has no single modular and leaves it empty.
struct NormResult {
    double value = 0.0;
    std::optional<double> modular_at_value;
    int bisection_iterations = 0;
    std::pair<double, double> bracket{0.0, 0.0};
    NormStatus status = NormStatus::Converged;
    double tail_estimate = 0.0;

    bool zero() const { return status == NormStatus::ZeroFunction; }
};

/// Herz-Morrey space parameters: dyadic weight 2^{k alpha}, Morrey factor
/// 2^{-k0 lambda}, outer exponent p, inner space L^{q(.)}.
struct SpaceParams {
    double alpha = 0.0;
    double lambda = 0.0;
    double p = 1.0;
    ExponentField exponent;
};

using NodeValues = std::vector<double>;

inline NodeValues sample_on_grid(const RadialFunction& f, const DyadicGrid& grid) {
    NodeValues v(grid.size());
    const auto radii = grid.radii();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(radii[i]);
    return v;
}

inline NodeValues sample_exponent(const ExponentField& q, const DyadicGrid& grid) {
    NodeValues v(grid.size());
    const auto radii = grid.radii();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = q(radii[i]);
    return v;
}

namespace detail {

constexpr double kZeroFloor = 1e-300;
constexpr double kTailRelThreshold = 1e-12;

inline double modular_slice(const NodeValues& values, const NodeValues& qv,
                            const DyadicGrid& grid, double eta, std::size_t begin,
                            std::size_t end) {
    if (!(eta > 0.0)) throw Error("modular requires eta > 0");
    const auto weights = grid.weights();
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double a = std::abs(values[i]);
        if (!std::isfinite(a)) throw NonFiniteIntegrand("norm input not finite at node");
        if (a > 0.0) sum += weights[i] * std::pow(a / eta, qv[i]);
    }
    return sum;
}

inline double constant_norm_slice(const NodeValues& values, const DyadicGrid& grid,
                                  double q, std::size_t begin, std::size_t end) {
    const auto weights = grid.weights();
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double a = std::abs(values[i]);
        if (a > 0.0) sum += weights[i] * std::pow(a, q);
    }
    return std::pow(sum, 1.0 / q);
}

/// Smallest eta with F_q(f/eta) <= 1, by bracket expansion from the
/// constant-exponent guesses and bisection to relative width 1e-10.
inline NormResult luxemburg_slice(const NodeValues& values, const NodeValues& qv,
                                  const DyadicGrid& grid, std::size_t begin,
                                  std::size_t end) {
    NormResult res;
    double vmax = 0.0, q_lo = std::numeric_limits<double>::infinity(), q_hi = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        vmax = std::max(vmax, std::abs(values[i]));
        q_lo = std::min(q_lo, qv[i]);
        q_hi = std::max(q_hi, qv[i]);
    }
    if (vmax < kZeroFloor) {
        res.status = NormStatus::ZeroFunction;
        return res;
    }
    const double n_lo = constant_norm_slice(values, grid, q_lo, begin, end);
    const double n_hi = constant_norm_slice(values, grid, q_hi, begin, end);
    double guess = std::max({n_lo, n_hi, kZeroFloor});
    const auto modular_at = [&](double eta) {
        return modular_slice(values, qv, grid, eta, begin, end);
    };

    double lo, hi;
    int guard = 0;
    if (modular_at(guess) > 1.0) {
        lo = guess;
        hi = guess;
        while (modular_at(hi) > 1.0) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 200) throw Error("Luxemburg bracket expansion failed");
        }
    } else {
        hi = guess;
        lo = guess;
        while (modular_at(lo) <= 1.0) {
            hi = lo;
            lo *= 0.5;
            if (++guard > 2000) throw Error("Luxemburg bracket contraction failed");
        }
    }
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (modular_at(mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
        ++res.bisection_iterations;
        if (res.bisection_iterations > 400) break;
    }
    res.bracket = {lo, hi};
    res.value = 0.5 * (lo + hi);
    res.modular_at_value = modular_at(res.value);
    res.status = NormStatus::Converged;
    return res;
}

/// True when f is still nonzero just outside the grid (truncation suspect).
inline bool has_outer_tail(const RadialFunction& f, const DyadicGrid& grid,
                           double vmax) {
    const double boundary = grid.outer_radius() * (1.0 + 1e-9);
    return std::abs(f(boundary)) > kTailRelThreshold * std::max(vmax, kZeroFloor);
}

inline void mark_tail(NormResult& res, double estimate) {
    if (res.status == NormStatus::Converged) {
        res.status = NormStatus::TailWarning;
        res.tail_estimate = estimate;
    }
}

}  // namespace detail

/// F_q(f/eta) over the grid (the modular of Lebesgue spaces with variable
/// exponent); strictly decreasing in eta whenever f is nonzero on the grid.
inline double modular(const RadialFunction& f, const ExponentField& q,
                      const DyadicGrid& grid, double eta) {
    const NodeValues values = sample_on_grid(f, grid);
    const NodeValues qv = sample_exponent(q, grid);
    return detail::modular_slice(values, qv, grid, eta, 0, grid.size());
}

inline NormResult luxemburg_norm_values(const NodeValues& values, const ExponentField& q,
                                        const DyadicGrid& grid) {
    const NodeValues qv = sample_exponent(q, grid);
    NormResult res = detail::luxemburg_slice(values, qv, grid, 0, grid.size());
    if (res.status == NormStatus::Converged && !values.empty()) {
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, std::abs(v));
        // Node values are presumed to extend outward (operator outputs do).
        if (std::abs(values.back()) > detail::kTailRelThreshold * vmax)
            detail::mark_tail(res, std::abs(values.back()));
    }
    return res;
}

inline NormResult luxemburg_norm(const RadialFunction& f, const ExponentField& q,
                                 const DyadicGrid& grid) {
    const NodeValues values = sample_on_grid(f, grid);
    const NodeValues qv = sample_exponent(q, grid);
    NormResult res = detail::luxemburg_slice(values, qv, grid, 0, grid.size());
    if (res.status == NormStatus::Converged) {
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, std::abs(v));
        if (detail::has_outer_tail(f, grid, vmax))
            detail::mark_tail(res, std::abs(f(grid.outer_radius() * (1.0 + 1e-9))));
    }
    return res;
}

/// ||w f||_{L^{q(.)}} for a positive radial weight.
inline NormResult weighted_norm(const RadialFunction& f, const ExponentField& q,
                                const DyadicGrid& grid,
                                const std::function<double(double)>& weight) {
    NodeValues values = sample_on_grid(f, grid);
    const auto radii = grid.radii();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = weight(radii[i]);
        if (!(w > 0.0) || !std::isfinite(w))
            throw Error("weight must be positive and finite at all nodes");
        values[i] *= w;
    }
    const NodeValues qv = sample_exponent(q, grid);
    NormResult res = detail::luxemburg_slice(values, qv, grid, 0, grid.size());
    if (res.status == NormStatus::Converged) {
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, std::abs(v));
        const double boundary = grid.outer_radius() * (1.0 + 1e-9);
        if (std::abs(f(boundary)) * weight(grid.outer_radius()) >
            detail::kTailRelThreshold * std::max(vmax, detail::kZeroFloor))
            detail::mark_tail(res, std::abs(f(boundary)));
    }
    return res;
}

/// sup_{k0} 2^{-k0 lambda} ( sum_{k<=k0} 2^{k alpha p} ||f chi_k||^p )^{1/p}
/// over the grid range. The truncated sup is audited: partial sums at
/// k_max-1 vs k_max must agree to tail_rel relative or a TailWarning is
/// raised.
inline NormResult herz_morrey_norm_values(const NodeValues& values, const SpaceParams& sp,
                                          const DyadicGrid& grid,
                                          double tail_rel = 1e-6) {
    if (!(sp.p > 0.0)) throw Error("Herz-Morrey requires p > 0");
    if (sp.lambda < 0.0) throw Error("Herz-Morrey requires lambda >= 0");
    const NodeValues qv = sample_exponent(sp.exponent, grid);

    NormResult res;
    double running = 0.0;
    double best = 0.0;
    double prev_partial = 0.0, last_partial = 0.0;
    bool any_nonzero = false;
    std::pair<double, double> best_bracket{0.0, 0.0};
    double best_annulus_norm = -1.0;

    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
        const auto [b, e] = grid.annulus_slice(k);
        NormResult piece = detail::luxemburg_slice(values, qv, grid, b, e);
        res.bisection_iterations += piece.bisection_iterations;
        if (piece.status != NormStatus::ZeroFunction) any_nonzero = true;
        if (piece.value > best_annulus_norm) {
            best_annulus_norm = piece.value;
            best_bracket = piece.bracket;
        }
        running += std::pow(std::exp2(k * sp.alpha) * piece.value, sp.p);
        const double partial = std::pow(running, 1.0 / sp.p);
        prev_partial = last_partial;
        last_partial = partial;
        best = std::max(best, std::exp2(-k * sp.lambda) * partial);
    }
    if (!any_nonzero) {
        res.status = NormStatus::ZeroFunction;
        return res;
    }
    res.value = best;
    res.bracket = best_bracket;
    res.status = NormStatus::Converged;
    if (grid.annulus_count() >= 2 && last_partial > 0.0) {
        const double growth = (last_partial - prev_partial) / last_partial;
        if (growth > tail_rel) detail::mark_tail(res, growth);
    }
    return res;
}

inline NormResult herz_morrey_norm(const RadialFunction& f, const SpaceParams& sp,
                                   const DyadicGrid& grid, double tail_rel = 1e-6) {
    const NodeValues values = sample_on_grid(f, grid);
    NormResult res = herz_morrey_norm_values(values, sp, grid, tail_rel);
    if (res.status == NormStatus::Converged) {
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, std::abs(v));
        if (detail::has_outer_tail(f, grid, vmax)) detail::mark_tail(res, 0.0);
    }
    return res;
}

/// Generalized Holder pairing: lhs = int |f g|, rhs = C_q ||f||_q ||g||_{q'},
/// C_q = 1 + 1/q_- - 1/q_+.
struct HolderCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool holds = false;
};

inline HolderCheck holder_pairing_check(const RadialFunction& f, const RadialFunction& g,
                                        const ExponentField& q, const DyadicGrid& grid) {
    const auto [q_min, q_max] = q.bounds();
    if (!(q_min > 1.0) || !std::isfinite(q_max))
        throw Error("Holder pairing requires an exponent with 1 < q- <= q+ < inf");
    HolderCheck out;
    out.constant = 1.0 + 1.0 / q_min - 1.0 / q_max;
    out.lhs = integrate_radial(grid, [&](double r) { return std::abs(f(r) * g(r)); });
    const double nf = luxemburg_norm(f, q, grid).value;
    const double ng = luxemburg_norm(g, q.conjugate(), grid).value;
    out.rhs = out.constant * nf * ng;
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-300;
    return out;
}

/// (1/|B_k|) ||chi_{B_k}||_{q(.)} ||chi_{B_k}||_{q'(.)}; |B_k| is the exact
/// ball measure, so the grid should extend well below k.
inline double ball_norm_product(const ExponentField& q, const DyadicGrid& grid, int k) {
    if (k < grid.k_min() || k > grid.k_max()) throw InvalidGrid("ball outside grid");
    const auto [b0, unused] = grid.annulus_slice(grid.k_min());
    const auto [b1, e1] = grid.annulus_slice(k);
    (void)unused;
    (void)b1;
    NodeValues ones(grid.size(), 0.0);
    std::fill(ones.begin() + b0, ones.begin() + e1, 1.0);
    const NodeValues qv = sample_exponent(q, grid);
    const NodeValues qcv = sample_exponent(q.conjugate(), grid);
    const double np = detail::luxemburg_slice(ones, qv, grid, b0, e1).value;
    const double npc = detail::luxemburg_slice(ones, qcv, grid, b0, e1).value;
    return np * npc / grid.ball_measure(k);
}

enum class DeltaTarget { Exponent, ConjugateExponent };

struct DeltaEstimate {
    double delta = 0.0;
    double residual = 0.0;
    int ball_count = 0;
    double clamp_upper = 0.0;
};

/// Smallest ball index with inner-hole truncation below ~1e-8 relative.
inline int safe_ball_start(const DyadicGrid& grid) {
    const int margin = static_cast<int>(std::ceil(26.6 / grid.dimension())) + 1;
    return grid.k_min() + margin;
}

/// Least-squares slope of log ||chi_{B_k}|| against log |B_k| over nested
/// balls, clamped to (0, 1/(target)_+]. This is the empirical exponent of the
/// characteristic-function norm-ratio bound.
inline DeltaEstimate delta_estimate(const ExponentField& q, const DyadicGrid& grid,
                                    DeltaTarget which) {
    const ExponentField target =
        which == DeltaTarget::ConjugateExponent ? q.conjugate() : q;
    const int k_start = std::max(grid.k_min() + 1, safe_ball_start(grid));
    const int count = grid.k_max() - k_start + 1;
    if (count < 4) throw InsufficientData("need at least 4 nested balls for delta");

    const NodeValues qv = sample_exponent(target, grid);
    NodeValues ones(grid.size(), 1.0);
    std::vector<double> xs, ys;
    xs.reserve(count);
    ys.reserve(count);
    const auto [b0, unused] = grid.annulus_slice(grid.k_min());
    (void)unused;
    for (int k = k_start; k <= grid.k_max(); ++k) {
        const auto [bb, ee] = grid.annulus_slice(k);
        (void)bb;
        const double norm = detail::luxemburg_slice(ones, qv, grid, b0, ee).value;
        xs.push_back(std::log(grid.ball_measure(k)));
        ys.push_back(std::log(norm));
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < count; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < count; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    DeltaEstimate est;
    est.ball_count = count;
    const double slope = sxy / sxx;
    for (int i = 0; i < count; ++i)
        est.residual = std::max(est.residual,
                                std::abs(ys[i] - (my + slope * (xs[i] - mx))));
    const auto [t_min, t_max] = target.bounds();
    (void)t_min;
    est.clamp_upper = 1.0 / t_max;
    est.delta = std::clamp(slope, 1e-9, est.clamp_upper);
    return est;
}

}  // namespace varex
