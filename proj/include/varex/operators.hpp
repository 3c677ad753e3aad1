#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "varex/dyadic_grid.hpp"
#include "varex/errors.hpp"
#include "varex/exponent_field.hpp"
#include "varex/norms.hpp"
#include "varex/quadrature.hpp"
#include "varex/radial_function.hpp"

namespace varex {

/// An operator evaluated on the grid nodes.
struct SampledOperatorOutput {
    std::string op;
    std::string input;
    std::vector<double> radii;
    NodeValues values;
    std::vector<std::string> notes;
};

namespace detail {

/// Evaluation view of a radial function: callable plus the radii where it is
/// discontinuous or kinked, and support bounds. The quadratures split at the
/// breakpoints, which is what keeps indicator test functions at spectral
/// accuracy.
struct RadialProfile {
    std::function<double(double)> eval;
    std::vector<double> breaks;
    double support_inner = 0.0;
    double support_outer = 0.0;
};

inline RadialProfile profile_of(const RadialFunction& f) {
    RadialProfile p;
    p.eval = [f](double r) { return f(r); };
    p.breaks = f.breakpoints();
    p.support_inner = f.support_inner();
    p.support_outer = f.support_outer();
    return p;
}

inline RadialProfile abs_profile_of(const RadialFunction& f) {
    RadialProfile p = profile_of(f);
    p.eval = [f](double r) { return std::abs(f(r)); };
    return p;
}

/// sigma_n * int_a^b f(t) t^{n-1+extra} dt, 0 < a <= b, by Gauss-Legendre in
/// log-t on segments split at f's breakpoints and at most a factor 4 wide.
inline double radial_segment_integral(const RadialProfile& f, int n, double sigma_n,
                                      double a, double b, int m, double extra = 0.0) {
    if (!(b > a) || a <= 0.0) return 0.0;
    std::vector<double> cuts{a};
    for (double br : f.breaks)
        if (br > a && br < b) cuts.push_back(br);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const double power = n + extra;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u0 = std::log(cuts[i]);
        const double u1 = std::log(cuts[i + 1]);
        const int parts = std::max(1, static_cast<int>(std::ceil((u1 - u0) / std::log(4.0))));
        for (int pth = 0; pth < parts; ++pth) {
            const double ua = u0 + (u1 - u0) * pth / parts;
            const double ub = u0 + (u1 - u0) * (pth + 1) / parts;
            total += integrate_gl(
                [&](double u) { return f.eval(std::exp(u)) * std::exp(power * u); }, ua,
                ub, m);
        }
    }
    return sigma_n * total;
}

/// sigma_n * int_0^b f(t) t^{n-1} dt by dyadic descent toward 0.
inline double inner_integral(const RadialProfile& f, int n, double sigma_n, double b,
                             int m) {
    if (!(b > 0.0) || f.support_inner >= b) return 0.0;
    double acc = 0.0;
    int quiet = 0;
    for (int j = 1; j <= 1100; ++j) {
        const double hi = b * std::ldexp(1.0, 1 - j);
        const double lo = b * std::ldexp(1.0, -j);
        const double seg = radial_segment_integral(f, n, sigma_n, lo, hi, m);
        acc += seg;
        if (lo <= f.support_inner) break;
        quiet = (std::abs(seg) <= 1e-18 * (std::abs(acc) + 1e-300)) ? quiet + 1 : 0;
        if (quiet >= 2 && j >= 8) break;
    }
    return acc;
}

inline double sphere_angle_total(int n) {
    return std::sqrt(kPi) * std::tgamma(0.5 * (n - 1)) / std::tgamma(0.5 * n);
}

/// Mean of f over the sphere {|y - c| = s} with |c| = rho. The theta
/// quadrature is split where the sphere crosses a breakpoint radius of f.
inline double mean_on_sphere(const RadialProfile& f, double rho, double s, int n,
                             int angular_nodes) {
    if (n == 1) return 0.5 * (f.eval(std::abs(rho - s)) + f.eval(rho + s));
    if (rho == 0.0 || s == 0.0) return f.eval(rho + s);
    std::vector<double> cuts{0.0};
    const double rr = rho * rho + s * s;
    for (double br : f.breaks) {
        const double c = (br * br - rr) / (2.0 * rho * s);
        if (c > -1.0 && c < 1.0) cuts.push_back(std::acos(c));
    }
    cuts.push_back(kPi);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-300) continue;
        total += integrate_gl(
            [&](double theta) {
                const double rad = rr + 2.0 * rho * s * std::cos(theta);
                const double y = std::sqrt(std::max(rad, 0.0));
                const double w = n == 2 ? 1.0 : std::pow(std::sin(theta), n - 2);
                return f.eval(y) * w;
            },
            cuts[i], cuts[i + 1], angular_nodes);
    }
    return total / sphere_angle_total(n);
}

}  // namespace detail

/// Mean of the radial function f over the sphere of radius s about a center
/// at distance rho from the origin (the n = 1 "sphere" is the two points
/// rho +- s).
inline double spherical_mean(const RadialFunction& f, double rho, double s, int n,
                             int angular_nodes = 48) {
    if (rho < 0.0 || s < 0.0) throw Error("spherical_mean requires rho, s >= 0");
    if (angular_nodes < 8) throw Error("spherical_mean requires angular_nodes >= 8");
    return detail::mean_on_sphere(detail::profile_of(f), rho, s, n, angular_nodes);
}

/// Fractional Hardy-type operator: |x|^{beta(x)-n} * int_{|t|<|x|} f(t) dt.
/// Cumulative integrals are exact prefix sums over full annuli plus a
/// partial-annulus Gauss segment; mass below the grid is integrated by
/// dyadic descent.
inline SampledOperatorOutput hardy(const RadialFunction& f, const ExponentField& beta,
                                   const DyadicGrid& grid) {
    const detail::RadialProfile prof = detail::profile_of(f);
    const int n = grid.dimension();
    const double sigma = grid.sphere().sigma_n;
    const int m = grid.nodes_per_annulus();
    const NodeValues fv = sample_on_grid(f, grid);

    SampledOperatorOutput out;
    out.op = "hardy";
    out.input = f.describe();
    out.radii.assign(grid.radii().begin(), grid.radii().end());
    out.values.assign(grid.size(), 0.0);

    const double hole = detail::inner_integral(prof, n, sigma, grid.inner_radius(), m);
    std::vector<double> below(grid.annulus_count() + 1, 0.0);
    below[0] = hole;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
        const auto [b, e] = grid.annulus_slice(k);
        double ann = 0.0;
        for (std::size_t i = b; i < e; ++i) ann += grid.weights()[i] * fv[i];
        below[k - grid.k_min() + 1] = below[k - grid.k_min()] + ann;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.radii()[i];
        const int k = grid.annulus_of(i);
        const double volume =
            below[k - grid.k_min()] +
            detail::radial_segment_integral(prof, n, sigma, dyadic(k - 1), r, m);
        out.values[i] = std::pow(r, beta(r) - n) * volume;
    }
    return out;
}

/// Dual-side Hardy-type operator: int_{|t|>=|x|} f(t) |t|^{beta(x)-n} dt,
/// with beta frozen at the evaluation point.
inline SampledOperatorOutput hardy_star(const RadialFunction& f, const ExponentField& beta,
                                        const DyadicGrid& grid) {
    const detail::RadialProfile prof = detail::profile_of(f);
    const int n = grid.dimension();
    const double sigma = grid.sphere().sigma_n;
    const int m = grid.nodes_per_annulus();
    const NodeValues fv = sample_on_grid(f, grid);

    SampledOperatorOutput out;
    out.op = "hardy_star";
    out.input = f.describe();
    out.radii.assign(grid.radii().begin(), grid.radii().end());
    out.values.assign(grid.size(), 0.0);

    double vmax = 0.0;
    for (double v : fv) vmax = std::max(vmax, std::abs(v));
    if (std::abs(f(grid.outer_radius() * (1.0 + 1e-9))) > 1e-12 * std::max(vmax, 1e-300))
        out.notes.push_back("tail");

    const auto radii = grid.radii();
    const auto weights = grid.weights();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = radii[i];
        const int k = grid.annulus_of(i);
        const double ex = beta(r) - n;
        double sum = detail::radial_segment_integral(prof, n, sigma, r, dyadic(k), m, ex);
        const auto [b, e] = grid.annulus_slice(k);
        (void)b;
        for (std::size_t j = e; j < grid.size(); ++j)
            if (fv[j] != 0.0) sum += weights[j] * fv[j] * std::pow(radii[j], ex);
        out.values[i] = sum;
    }
    return out;
}

struct RieszOptions {
    int angular_nodes = 48;
    int radial_nodes = 16;
    double shell_budget = 0.10;   // max admissible near-field fraction
    int max_refinements = 8;
};

namespace detail {

/// Riesz-type potential at a single point |x| = rho, in spherical coordinates
/// centered at x: I(x) = sigma_n int_0^{rho+R} s^{b-1} A_f(rho, s) ds with
/// A_f the spherical mean of f about x. The s^{b-1} endpoint singularity is
/// removed exactly by tau = s^b on the near field s <= h; h is halved until
/// the near field is below the shell budget.
inline double riesz_point(const RadialProfile& f, double b, double rho, int n,
                          double sigma_n, const RieszOptions& opts) {
    if (!(b > 0.0)) throw Error("Riesz-type potential requires beta > 0");
    const double R = f.support_outer;
    if (R <= 0.0) return 0.0;
    const double s_max = rho + R;

    std::vector<double> cuts;
    auto push = [&](double s) {
        if (s > 0.0 && s < s_max) cuts.push_back(s);
    };
    for (double br : f.breaks) {
        push(std::abs(rho - br));
        push(rho + br);
    }
    push(std::abs(rho - R));
    push(rho);  // the sphere through the origin; A is not C^2 there
    if (f.support_inner > 0.0 && std::isfinite(f.support_inner)) {
        push(std::abs(rho - f.support_inner));
        push(rho + f.support_inner);
    }
    cuts.push_back(s_max);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double first = cuts.front();
    double h = first;
    if (rho > 0.0) h = std::min(h, rho * std::log(2.0) / 32.0);

    const auto mean = [&](double s) {
        return mean_on_sphere(f, rho, s, n, opts.angular_nodes);
    };

    for (int attempt = 0;; ++attempt) {
        // near field via tau = s^b: sigma_n/b * int_0^{h^b} A(tau^{1/b}) dtau
        const double near =
            (sigma_n / b) *
            integrate_gl([&](double tau) { return mean(std::pow(tau, 1.0 / b)); }, 0.0,
                         std::pow(h, b), opts.radial_nodes + 8);
        double far = 0.0, far_abs = 0.0;
        std::vector<double> segs{h};
        for (double c : cuts)
            if (c > h) segs.push_back(c);
        for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
            // Geometric subdivision keeps s^{b-1} tame; the spherical mean
            // has sqrt kinks at the segment endpoints (tangency radii).
            const double lo = segs[i], hi_s = segs[i + 1];
            const int parts = std::max(
                1, static_cast<int>(std::ceil(std::log(hi_s / lo) / std::log(4.0))));
            for (int pth = 0; pth < parts; ++pth) {
                const double sa = lo * std::pow(hi_s / lo, double(pth) / parts);
                const double sb = lo * std::pow(hi_s / lo, double(pth + 1) / parts);
                const double seg =
                    sigma_n * integrate_sqrt_endpoints(
                                  [&](double s) {
                                      return std::pow(s, b - 1.0) * mean(s);
                                  },
                                  sa, sb, opts.radial_nodes);
                far += seg;
                far_abs += std::abs(seg);
            }
        }
        const double denom = std::abs(near) + far_abs;
        if (denom <= 0.0) return 0.0;
        if (std::abs(near) <= opts.shell_budget * denom) return near + far;
        if (attempt >= opts.max_refinements)
            throw SingularityBudgetExceeded(
                "near-field fraction " + std::to_string(std::abs(near) / denom) +
                " above budget after refinement limit");
        h *= 0.5;
    }
}

}  // namespace detail

/// Riesz-type potential at one radius; usable at rho = 0 where the grid has
/// no node.
inline double riesz_at(const RadialFunction& f, const ExponentField& beta, double rho,
                       int n, const RieszOptions& opts = {}) {
    const double sigma_n = SphereConstants::make(n).sigma_n;
    return detail::riesz_point(detail::profile_of(f), beta(rho), rho, n, sigma_n, opts);
}

/// Riesz-type potential of variable order on the grid nodes.
inline SampledOperatorOutput riesz_radial(const RadialFunction& f,
                                          const ExponentField& beta,
                                          const DyadicGrid& grid, int angular_nodes = 48,
                                          RieszOptions opts = {}) {
    opts.angular_nodes = angular_nodes;
    const detail::RadialProfile prof = detail::profile_of(f);
    const int n = grid.dimension();
    SampledOperatorOutput out;
    out.op = "riesz";
    out.input = f.describe();
    out.radii.assign(grid.radii().begin(), grid.radii().end());
    out.values.assign(grid.size(), 0.0);
    const NodeValues fv = sample_on_grid(f, grid);
    double vmax = 0.0;
    for (double v : fv) vmax = std::max(vmax, std::abs(v));
    if (std::abs(f(grid.outer_radius() * (1.0 + 1e-9))) > 1e-12 * std::max(vmax, 1e-300))
        out.notes.push_back("tail");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.radii()[i];
        out.values[i] =
            detail::riesz_point(prof, beta(r), r, n, grid.sphere().sigma_n, opts);
    }
    return out;
}

/// Fractional maximal operator: max over scanned r of
/// |B(x,r)|^{beta(x)/n - 1} int_{B(x,r)} |f|. The scan approximates the sup
/// from below.
inline SampledOperatorOutput fractional_maximal(const RadialFunction& f,
                                                const ExponentField& beta,
                                                const DyadicGrid& grid,
                                                std::vector<double> radii_scan,
                                                int angular_nodes = 32) {
    if (radii_scan.empty()) throw Error("fractional_maximal requires scan radii");
    std::sort(radii_scan.begin(), radii_scan.end());
    if (radii_scan.front() <= 0.0) throw Error("scan radii must be positive");
    const detail::RadialProfile prof = detail::abs_profile_of(f);
    const int n = grid.dimension();
    const double sigma_n = grid.sphere().sigma_n;
    const double v_n = grid.sphere().v_n;

    SampledOperatorOutput out;
    out.op = "fractional_maximal";
    out.input = f.describe();
    out.radii.assign(grid.radii().begin(), grid.radii().end());
    out.values.assign(grid.size(), 0.0);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rho = grid.radii()[i];
        const double bv = beta(rho);
        // Ball integrals accumulate over the sorted scan; s-segments split at
        // the radii where the spherical mean kinks.
        std::vector<double> s_breaks;
        for (double br : prof.breaks) {
            s_breaks.push_back(std::abs(rho - br));
            s_breaks.push_back(rho + br);
        }
        s_breaks.push_back(rho);
        std::sort(s_breaks.begin(), s_breaks.end());
        double acc = 0.0, prev = 0.0, best = 0.0;
        for (double r : radii_scan) {
            std::vector<double> cuts{prev};
            for (double sb : s_breaks)
                if (sb > prev && sb < r) cuts.push_back(sb);
            cuts.push_back(r);
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                acc += sigma_n *
                       integrate_sqrt_endpoints(
                           [&](double s) {
                               return std::pow(s, n - 1) *
                                      detail::mean_on_sphere(prof, rho, s, n,
                                                             angular_nodes);
                           },
                           cuts[c], cuts[c + 1], 16);
            }
            prev = r;
            best = std::max(best, std::pow(v_n * std::pow(r, n), bv / n - 1.0) * acc);
        }
        out.values[i] = best;
    }
    return out;
}

/// Multiplies node values by the weight (1+r)^{-gamma(r)} with
/// gamma(r) = c_infinity beta(r) (1 - beta(r)/n).
inline SampledOperatorOutput apply_weight(SampledOperatorOutput out,
                                          const ExponentField& beta, double c_infinity,
                                          int n) {
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double g = gamma_weight(beta, c_infinity, n, out.radii[i]);
        out.values[i] *= std::pow(1.0 + out.radii[i], -g);
    }
    return out;
}

/// min over sampled x in A_k of I_{beta(.)}(chi_{B_k})(x) / |x|^{beta(x)};
/// the theorems' proof route needs this bounded below uniformly in k.
inline double riesz_lower_bound_check(const ExponentField& beta, const DyadicGrid& grid,
                                      int k, int sample_count,
                                      const RieszOptions& opts = {}) {
    if (k < grid.k_min() || k > grid.k_max()) throw InvalidGrid("ball outside grid");
    if (sample_count < 1) throw Error("sample_count must be positive");
    const RadialFunction ball = RadialFunction::char_ball(k);
    const detail::RadialProfile prof = detail::profile_of(ball);
    const int n = grid.dimension();
    const double sigma_n = grid.sphere().sigma_n;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sample_count; ++i) {
        const double rho = dyadic(k - 1) * std::exp2((i + 0.5) / sample_count);
        const double value = detail::riesz_point(prof, beta(rho), rho, n, sigma_n, opts);
        min_ratio = std::min(min_ratio, value / std::pow(rho, beta(rho)));
    }
    return min_ratio;
}

}  // namespace varex
