#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "varex/constants.hpp"
#include "varex/errors.hpp"

namespace varex {

enum class ExponentRole { LebesgueExponent, FractionalOrder };

/// Conjugate index q' = q/(q-1); requires q > 1.
inline double conjugate_exponent(double q) {
    if (!(q > 1.0)) throw NonConjugable("conjugate index requires q > 1");
    return q / (q - 1.0);
}

/// A variable exponent q(.) or fractional order beta(.) as an evaluable
/// symbolic family on R^n. All supported forms are radial, so evaluation is
/// by |x|. Derived forms (conjugate, Sobolev target) keep the family closed
/// under the operations the estimates need.
class ExponentField {
public:
    static ExponentField constant(double value, ExponentRole role, int n) {
        return ExponentField(Constant{value}, role, n);
    }

    /// q(x) = base + amplitude / ln(e + |x|).
    static ExponentField log_decay(double base, double amplitude, ExponentRole role, int n) {
        return ExponentField(LogDecay{base, amplitude}, role, n);
    }

    /// log_decay plus a Lipschitz bump b*(1-(r/R)^2)^2 supported in |x| <= R.
    static ExponentField log_decay_shifted(double base, double amplitude,
                                           double bump_amplitude, double bump_radius,
                                           ExponentRole role, int n) {
        if (bump_radius <= 0.0) throw Error("bump radius must be positive");
        return ExponentField(LogDecayShifted{base, amplitude, bump_amplitude, bump_radius},
                             role, n);
    }

    double operator()(double r) const {
        return std::visit([r, this](const auto& f) { return eval(f, r); }, form_);
    }

    double value_at_infinity() const {
        return std::visit([this](const auto& f) { return at_infinity(f); }, form_);
    }

    ExponentRole role() const { return role_; }
    int dimension() const { return n_; }

    /// The pointwise conjugate field q'(x) = q(x)/(q(x)-1).
    ExponentField conjugate() const {
        if (role_ != ExponentRole::LebesgueExponent)
            throw NonConjugable("conjugate defined for Lebesgue exponents only");
        return ExponentField(Conjugate{std::make_shared<const ExponentField>(*this)},
                             role_, n_);
    }

    /// Closed-form inf/sup over R^n where the family admits one.
    std::optional<double> exact_min() const {
        return std::visit([this](const auto& f) { return lower(f); }, form_);
    }

    std::optional<double> exact_max() const {
        return std::visit([this](const auto& f) { return upper(f); }, form_);
    }

    /// (min, max) over a dense deterministic radial scan, with closed-form
    /// values overlaid when available.
    std::pair<double, double> bounds() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double r : scan_radii()) {
            const double q = (*this)(r);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        const double qi = value_at_infinity();
        lo = std::min(lo, qi);
        hi = std::max(hi, qi);
        if (auto e = exact_min()) lo = *e;
        if (auto e = exact_max()) hi = *e;
        return {lo, hi};
    }

    std::string describe() const {
        return std::visit([](const auto& f) { return name(f); }, form_);
    }

    /// Radii used by the dense internal scans: {0} plus log-spaced coverage
    /// of [2^-40, 2^40].
    static const std::vector<double>& scan_radii() {
        static const std::vector<double> radii = [] {
            std::vector<double> r;
            const int count = 4096;
            r.reserve(count + 1);
            r.push_back(0.0);
            for (int i = 0; i < count; ++i)
                r.push_back(std::exp2(-40.0 + 80.0 * (i + 0.5) / count));
            return r;
        }();
        return radii;
    }

private:
    struct Constant { double value; };
    struct LogDecay { double base, amplitude; };
    struct LogDecayShifted { double base, amplitude, bump_amplitude, bump_radius; };
    struct Conjugate { std::shared_ptr<const ExponentField> inner; };
    struct SobolevTarget {
        std::shared_ptr<const ExponentField> q1;
        std::shared_ptr<const ExponentField> order;
    };
    using Form = std::variant<Constant, LogDecay, LogDecayShifted, Conjugate, SobolevTarget>;

    ExponentField(Form f, ExponentRole role, int n)
        : form_(std::move(f)), role_(role), n_(n) {
        if (n < 1) throw Error("dimension must be >= 1");
    }

    static double bump_profile(double t) {
        if (t >= 1.0) return 0.0;
        const double u = 1.0 - t * t;
        return u * u;
    }

    double eval(const Constant& f, double) const { return f.value; }
    double eval(const LogDecay& f, double r) const {
        return f.base + f.amplitude / std::log(kE + r);
    }
    double eval(const LogDecayShifted& f, double r) const {
        return f.base + f.amplitude / std::log(kE + r) +
               f.bump_amplitude * bump_profile(r / f.bump_radius);
    }
    double eval(const Conjugate& f, double r) const {
        return conjugate_exponent((*f.inner)(r));
    }
    double eval(const SobolevTarget& f, double r) const {
        const double inv = 1.0 / (*f.q1)(r) - (*f.order)(r) / n_;
        if (inv <= 0.0) throw InvalidSobolev("1/q1 - beta/n not positive");
        return 1.0 / inv;
    }

    double at_infinity(const Constant& f) const { return f.value; }
    double at_infinity(const LogDecay& f) const { return f.base; }
    double at_infinity(const LogDecayShifted& f) const { return f.base; }
    double at_infinity(const Conjugate& f) const {
        return conjugate_exponent(f.inner->value_at_infinity());
    }
    double at_infinity(const SobolevTarget& f) const {
        const double inv =
            1.0 / f.q1->value_at_infinity() - f.order->value_at_infinity() / n_;
        if (inv <= 0.0) throw InvalidSobolev("1/q1 - beta/n not positive at infinity");
        return 1.0 / inv;
    }

    std::optional<double> lower(const Constant& f) const { return f.value; }
    std::optional<double> lower(const LogDecay& f) const {
        return f.amplitude >= 0.0 ? f.base : f.base + f.amplitude;
    }
    std::optional<double> lower(const LogDecayShifted&) const { return std::nullopt; }
    std::optional<double> lower(const Conjugate& f) const {
        if (auto hi = f.inner->exact_max()) return conjugate_exponent(*hi);
        return std::nullopt;
    }
    std::optional<double> lower(const SobolevTarget& f) const {
        // Monotone in q1 for a constant order.
        auto c = f.order->exact_min();
        auto cc = f.order->exact_max();
        if (!c || !cc || *c != *cc) return std::nullopt;
        if (auto lo = f.q1->exact_min()) {
            const double inv = 1.0 / *lo - *c / n_;
            if (inv <= 0.0) return std::nullopt;
            return 1.0 / inv;
        }
        return std::nullopt;
    }

    std::optional<double> upper(const Constant& f) const { return f.value; }
    std::optional<double> upper(const LogDecay& f) const {
        return f.amplitude >= 0.0 ? f.base + f.amplitude : f.base;
    }
    std::optional<double> upper(const LogDecayShifted&) const { return std::nullopt; }
    std::optional<double> upper(const Conjugate& f) const {
        if (auto lo = f.inner->exact_min()) return conjugate_exponent(*lo);
        return std::nullopt;
    }
    std::optional<double> upper(const SobolevTarget& f) const {
        auto c = f.order->exact_min();
        auto cc = f.order->exact_max();
        if (!c || !cc || *c != *cc) return std::nullopt;
        if (auto hi = f.q1->exact_max()) {
            const double inv = 1.0 / *hi - *c / n_;
            if (inv <= 0.0) return std::nullopt;
            return 1.0 / inv;
        }
        return std::nullopt;
    }

    static std::string num(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return buf;
    }

    static std::string name(const Constant& f) { return "const:" + num(f.value); }
    static std::string name(const LogDecay& f) {
        return "logdecay:" + num(f.base) + ":" + num(f.amplitude);
    }
    static std::string name(const LogDecayShifted& f) {
        return "logdecayshifted:" + num(f.base) + ":" + num(f.amplitude) + ":" +
               num(f.bump_amplitude) + ":" + num(f.bump_radius);
    }
    static std::string name(const Conjugate& f) {
        return "conjugate(" + f.inner->describe() + ")";
    }
    static std::string name(const SobolevTarget& f) {
        return "sobolev(" + f.q1->describe() + "," + f.order->describe() + ")";
    }

    friend ExponentField sobolev_exponent(const ExponentField&, const ExponentField&, int);

    Form form_;
    ExponentRole role_;
    int n_;
};

inline double evaluate(const ExponentField& field, double r) { return field(r); }

/// Evaluation at a point of R^n; all supported families are radial.
inline double evaluate_at(const ExponentField& field, std::span<const double> x) {
    double rr = 0.0;
    for (double c : x) rr += c * c;
    return field(std::sqrt(rr));
}

inline double conjugate_evaluate(const ExponentField& field, double r) {
    return conjugate_exponent(field(r));
}

/// Empirical summary of a field: extremes, value at infinity and the two
/// log-Holder constants (local and at-infinity).
struct ExponentStats {
    double q_minus = 0.0;
    double q_plus = 0.0;
    double q_infinity = 0.0;
    double c_infinity = 0.0;
    double c_local = 0.0;
    long sample_count = 0;
};

namespace detail {

/// Constant estimators over an explicit value table; the running sups are
/// compared between the two densest sampling levels (all samples vs every
/// second sample) and must not double, otherwise DivergentConstant.
inline ExponentStats estimate_stats_table(std::span<const double> radii,
                                          std::span<const double> values,
                                          double q_infinity) {
    if (radii.size() < 8) throw InsufficientData("need at least 8 sample radii");
    std::vector<std::size_t> order(radii.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });

    ExponentStats st;
    st.q_infinity = q_infinity;
    st.sample_count = static_cast<long>(radii.size());
    st.q_minus = std::numeric_limits<double>::infinity();
    st.q_plus = -st.q_minus;

    double cinf_all = 0.0, cinf_half = 0.0;
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        const double r = radii[order[idx]];
        const double q = values[order[idx]];
        st.q_minus = std::min(st.q_minus, q);
        st.q_plus = std::max(st.q_plus, q);
        const double c = std::abs(q - q_infinity) * std::log(kE + r);
        cinf_all = std::max(cinf_all, c);
        if (idx % 2 == 0) cinf_half = std::max(cinf_half, c);
    }
    if (cinf_all > 2.0 * cinf_half && cinf_all > 1e-12)
        throw DivergentConstant("at-infinity log-Holder constant does not stabilize");
    st.c_infinity = cinf_all;

    double cloc_all = 0.0, cloc_half = 0.0;
    const std::size_t window = 64;
    for (std::size_t a = 0; a + 1 < order.size(); ++a) {
        const double ra = radii[order[a]];
        const double qa = values[order[a]];
        for (std::size_t b = a + 1; b < order.size() && b - a <= window; ++b) {
            const double d = radii[order[b]] - ra;
            if (d > 0.5) break;
            if (d <= 0.0) continue;
            const double c = std::abs(values[order[b]] - qa) * (-std::log(d));
            cloc_all = std::max(cloc_all, c);
            if (a % 2 == 0 && b % 2 == 0) cloc_half = std::max(cloc_half, c);
        }
    }
    if (cloc_all > 2.0 * cloc_half && cloc_all > 1e-12)
        throw DivergentConstant("local log-Holder constant does not stabilize");
    st.c_local = cloc_all;
    return st;
}

inline ExponentStats estimate_stats_fn(const std::function<double(double)>& q,
                                       double q_infinity,
                                       std::span<const double> radii) {
    std::vector<double> values(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) values[i] = q(radii[i]);
    return estimate_stats_table(radii, values, q_infinity);
}

}  // namespace detail

/// Sample radii spanning the dyadic scales [2^k_lo, 2^k_hi], log-spaced with
/// `per_scale` points per octave; includes r = 0.
inline std::vector<double> dyadic_sample_radii(int k_lo, int k_hi, int per_scale) {
    if (k_lo >= k_hi || per_scale < 1) throw Error("bad sampling range");
    std::vector<double> r;
    r.reserve(static_cast<std::size_t>(k_hi - k_lo) * per_scale + 3);
    r.push_back(0.0);
    r.push_back(std::exp2(k_lo));
    const double ln2 = std::log(2.0);
    for (int k = k_lo; k < k_hi; ++k)
        for (int i = 0; i < per_scale; ++i)
            r.push_back(std::exp(ln2 * (k + (i + 0.5) / per_scale)));
    r.push_back(std::exp2(k_hi));
    return r;
}

namespace detail {

/// Golden-section polish of a sampled extremum of a smooth radial field.
inline double refine_extremum(const std::function<double(double)>& f, double lo,
                              double hi, bool maximize) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 120 && b - a > 1e-14 * (1.0 + b); ++i) {
        const bool keep_left = maximize ? (f1 > f2) : (f1 < f2);
        if (keep_left) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    const double mid = 0.5 * (a + b);
    return maximize ? std::max({f(mid), f(lo), f(hi)}) : std::min({f(mid), f(lo), f(hi)});
}

}  // namespace detail

inline ExponentStats estimate_stats(const ExponentField& field,
                                    std::span<const double> sample_radii) {
    ExponentStats st = detail::estimate_stats_fn(
        [&](double r) { return field(r); }, field.value_at_infinity(), sample_radii);
    if (!field.exact_min() || !field.exact_max()) {
        // Polish the sampled extremes: locate the extreme sample and refine
        // within its neighboring interval.
        std::vector<double> radii(sample_radii.begin(), sample_radii.end());
        std::sort(radii.begin(), radii.end());
        const std::function<double(double)> f = [&](double r) { return field(r); };
        std::size_t imin = 0, imax = 0;
        for (std::size_t i = 1; i < radii.size(); ++i) {
            if (field(radii[i]) < field(radii[imin])) imin = i;
            if (field(radii[i]) > field(radii[imax])) imax = i;
        }
        auto bracket = [&](std::size_t i) {
            const double lo = i == 0 ? radii[0] : radii[i - 1];
            const double hi = i + 1 == radii.size() ? radii[i] : radii[i + 1];
            return std::pair{lo, hi};
        };
        const auto [lo1, hi1] = bracket(imin);
        st.q_minus = std::min(st.q_minus, detail::refine_extremum(f, lo1, hi1, false));
        const auto [lo2, hi2] = bracket(imax);
        st.q_plus = std::max(st.q_plus, detail::refine_extremum(f, lo2, hi2, true));
    }
    if (auto e = field.exact_min()) st.q_minus = *e;
    if (auto e = field.exact_max()) st.q_plus = *e;
    return st;
}

/// gamma(x) = c_infinity * beta(x) * (1 - beta(x)/n); bounded by n*c_infinity/4.
inline double gamma_weight(const ExponentField& beta, double c_infinity, int n, double r) {
    if (c_infinity < 0.0) throw Error("c_infinity must be nonnegative");
    const double b = beta(r);
    return c_infinity * b * (1.0 - b / n);
}

struct PairCheck {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double bound = 0.0;
};

struct PairReport {
    std::vector<PairCheck> checks;
    bool pass = false;

    const PairCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

/// Audits the admissibility conditions coupling a Lebesgue exponent q1 and a
/// fractional order beta in dimension n. Failures are reported, not thrown.
inline PairReport validate_pair(const ExponentField& q1, const ExponentField& beta, int n) {
    if (q1.role() != ExponentRole::LebesgueExponent)
        throw Error("validate_pair: q1 must have the Lebesgue exponent role");
    if (beta.role() != ExponentRole::FractionalOrder)
        throw Error("validate_pair: beta must have the fractional order role");

    const auto& radii = ExponentField::scan_radii();
    const double q1_inf = q1.value_at_infinity();
    double beta_min = std::numeric_limits<double>::infinity();
    double beta_max = -beta_min;
    double sup_prod = -std::numeric_limits<double>::infinity();
    double min_gap = std::numeric_limits<double>::infinity();
    double q1_min = std::numeric_limits<double>::infinity();
    double q1_max = -q1_min;
    for (double r : radii) {
        const double b = beta(r);
        const double q = q1(r);
        beta_min = std::min(beta_min, b);
        beta_max = std::max(beta_max, b);
        sup_prod = std::max(sup_prod, q * b);
        min_gap = std::min(min_gap, q - q1_inf);
        q1_min = std::min(q1_min, q);
        q1_max = std::max(q1_max, q);
    }
    const double beta_inf = beta.value_at_infinity();
    beta_min = std::min(beta_min, beta_inf);
    beta_max = std::max(beta_max, beta_inf);
    if (auto e = beta.exact_min()) beta_min = *e;
    if (auto e = beta.exact_max()) beta_max = *e;
    if (auto e = q1.exact_min()) q1_min = *e;
    if (auto e = q1.exact_max()) q1_max = *e;
    sup_prod = std::max(sup_prod, q1_inf * beta_inf);
    min_gap = std::min(min_gap, 0.0);  // the limit itself

    PairReport rep;
    rep.checks.push_back({"order_lower_bound_positive", beta_min > 0.0, beta_min, 0.0});
    rep.checks.push_back({"order_product_bounded", sup_prod < n, sup_prod,
                          static_cast<double>(n)});
    const double sup_inf_prod = q1_inf * beta_max;
    rep.checks.push_back({"order_product_at_infinity_bounded", sup_inf_prod < n,
                          sup_inf_prod, static_cast<double>(n)});
    // LogDecay attains its infimum only in the limit; 1e-12 slack.
    rep.checks.push_back({"exponent_minimal_at_infinity", min_gap >= -1e-12, min_gap, 0.0});
    rep.checks.push_back({"exponent_range",
                          q1_min > 1.0 && std::isfinite(q1_max), q1_min, 1.0});
    rep.pass = true;
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.passed;
    return rep;
}

/// The Sobolev target exponent 1/q2(x) = 1/q1(x) - beta(x)/n.
inline ExponentField sobolev_exponent(const ExponentField& q1, const ExponentField& beta,
                                      int n) {
    if (q1.role() != ExponentRole::LebesgueExponent)
        throw Error("sobolev_exponent: q1 must have the Lebesgue exponent role");
    if (n < 1) throw Error("dimension must be >= 1");
    for (double r : ExponentField::scan_radii()) {
        if (1.0 / q1(r) - beta(r) / n <= 0.0)
            throw InvalidSobolev("1/q1 - beta/n not positive at sampled radius");
    }
    if (1.0 / q1.value_at_infinity() - beta.value_at_infinity() / n <= 0.0)
        throw InvalidSobolev("1/q1 - beta/n not positive at infinity");
    ExponentField::SobolevTarget form{std::make_shared<const ExponentField>(q1),
                                      std::make_shared<const ExponentField>(beta)};
    return ExponentField(ExponentField::Form(std::move(form)),
                         ExponentRole::LebesgueExponent, n);
}

}  // namespace varex
