#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "varex/config.hpp"
#include "varex/dyadic_grid.hpp"
#include "varex/errors.hpp"
#include "varex/exponent_field.hpp"
#include "varex/norms.hpp"
#include "varex/operators.hpp"
#include "varex/quasirandom.hpp"
#include "varex/radial_function.hpp"

namespace varex {

struct AuditEntry {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ReportRow {
    std::string function_id;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    std::vector<std::string> warnings;
    bool skipped = false;
};

/// Per-test-function ratio table plus the hypothesis audit for one verified
/// statement.
struct TheoremReport {
    std::string statement;
    std::vector<AuditEntry> audit;
    bool audit_passed = false;
    std::vector<ReportRow> rows;
    double sup_ratio = 0.0;
    std::vector<std::pair<std::string, DeltaEstimate>> deltas;
    ExponentStats q1_stats;
    std::vector<std::string> warnings;
    // config echo for reproducibility
    std::string q1_desc, beta_desc;
    GridConfig grid;
    SpaceConfig space;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void collect_status(const NormResult& r, std::vector<std::string>& warnings,
                           const char* side) {
    if (r.status == NormStatus::TailWarning)
        warnings.push_back(std::string(side) + "-tail");
}

struct TheoremContext {
    DyadicGrid grid;
    ExponentField q1;
    ExponentField beta;
    ExponentField q2;
    ExponentStats q1_stats;
    PairReport pair;
    std::vector<std::pair<std::string, RadialFunction>> family;
};

inline TheoremContext make_context(const ExperimentConfig& cfg) {
    const int n = cfg.grid.n;
    ExponentField q1 =
        parse_exponent(cfg.q1, ExponentRole::LebesgueExponent, n, "exponents.q1");
    ExponentField beta =
        parse_exponent(cfg.beta, ExponentRole::FractionalOrder, n, "exponents.beta");
    DyadicGrid grid = DyadicGrid::build(n, cfg.grid.k_min, cfg.grid.k_max,
                                        cfg.grid.nodes_per_annulus);
    const auto samples = dyadic_sample_radii(cfg.grid.k_min, cfg.grid.k_max, 32);
    TheoremContext ctx{std::move(grid),
                       q1,
                       beta,
                       sobolev_exponent(q1, beta, n),
                       estimate_stats(q1, samples),
                       validate_pair(q1, beta, n),
                       build_family(cfg)};
    return ctx;
}

inline void audit_common(const TheoremContext& ctx, const ExperimentConfig& cfg,
                         TheoremReport& rep) {
    const auto& pr = ctx.pair;
    auto passed = [&](const char* name) {
        const PairCheck* c = pr.find(name);
        return c != nullptr && c->passed;
    };
    const PairCheck* b0 = pr.find("order_lower_bound_positive");
    const PairCheck* prod = pr.find("order_product_bounded");
    const PairCheck* prod_inf = pr.find("order_product_at_infinity_bounded");
    rep.audit.push_back(
        {"fractional_order_admissible",
         passed("order_lower_bound_positive") && passed("order_product_bounded") &&
             passed("order_product_at_infinity_bounded"),
         "beta_min=" + fmt(b0 ? b0->observed : 0.0) +
             " sup_q1_beta=" + fmt(prod ? prod->observed : 0.0) +
             " sup_q1inf_beta=" + fmt(prod_inf ? prod_inf->observed : 0.0) +
             " n=" + std::to_string(cfg.grid.n)});
    const PairCheck* gap = pr.find("exponent_minimal_at_infinity");
    rep.audit.push_back({"exponent_minimal_at_infinity",
                         passed("exponent_minimal_at_infinity") &&
                             passed("exponent_range"),
                         "min(q1(x)-q1(inf))=" + fmt(gap ? gap->observed : 0.0) +
                             " q1_minus=" + fmt(ctx.q1_stats.q_minus) +
                             " q1_plus=" + fmt(ctx.q1_stats.q_plus)});
    rep.audit.push_back({"log_holder_continuity", true,
                         "c_local=" + fmt(ctx.q1_stats.c_local) +
                             " c_infinity=" + fmt(ctx.q1_stats.c_infinity)});
    rep.audit.push_back({"p_exponents_ordered", cfg.space.p1 <= cfg.space.p2,
                         "p1=" + fmt(cfg.space.p1) + " p2=" + fmt(cfg.space.p2)});
    rep.audit.push_back({"lambda_nonnegative", cfg.space.lambda >= 0.0,
                         "lambda=" + fmt(cfg.space.lambda)});
}

inline void finish_audit(TheoremReport& rep) {
    rep.audit_passed = true;
    for (const auto& a : rep.audit) rep.audit_passed = rep.audit_passed && a.passed;
}

using NumeratorFn = std::function<NormResult(const RadialFunction&)>;

inline void run_rows(const TheoremContext& ctx, const NumeratorFn& numerator,
                     const std::function<NormResult(const RadialFunction&)>& denominator,
                     TheoremReport& rep) {
    const std::size_t count = ctx.family.size();
    std::vector<ReportRow> rows(count);
    auto work = [&](std::size_t i) {
        const auto& [id, f] = ctx.family[i];
        ReportRow row;
        row.function_id = id;
        try {
            const NormResult den = denominator(f);
            if (den.status == NormStatus::ZeroFunction) {
                row.skipped = true;
                row.warnings.push_back("zero-function");
                rows[i] = std::move(row);
                return;
            }
            const NormResult num = numerator(f);
            collect_status(num, row.warnings, "numerator");
            collect_status(den, row.warnings, "denominator");
            row.numerator = num.value;
            row.denominator = den.value;
            row.ratio = num.value / den.value;
        } catch (const std::exception& err) {
            row.skipped = true;
            row.warnings.push_back(std::string("error: ") + err.what());
        }
        rows[i] = std::move(row);
    };
    // Rows are independent pure computations; results assemble in family
    // order, so output is execution-order independent.
    const unsigned workers = std::min<std::size_t>(
        std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) work(i);
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t i = 0; i < count; ++i) work(i);
    }
    for (auto& row : rows) rep.rows.push_back(std::move(row));
    rep.sup_ratio = 0.0;
    for (const auto& row : rep.rows)
        if (!row.skipped) rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    for (const auto& row : rep.rows)
        for (const auto& w : row.warnings)
            if (std::find(rep.warnings.begin(), rep.warnings.end(), w) ==
                rep.warnings.end())
                rep.warnings.push_back(w);
}

inline void echo_config(const ExperimentConfig& cfg, TheoremReport& rep) {
    rep.q1_desc = cfg.q1;
    rep.beta_desc = cfg.beta;
    rep.grid = cfg.grid;
    rep.space = cfg.space;
    rep.seed = cfg.sampling.seed;
}

/// Violation probes blow up across the family; record it as a diagnostic.
inline void flag_ratio_growth(TheoremReport& rep) {
    if (rep.audit_passed) return;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : rep.rows) {
        if (row.skipped || !(row.ratio > 0.0)) continue;
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
    }
    if (hi > 10.0 * lo) rep.warnings.push_back("ratio-growth");
}

}  // namespace detail

/// Weighted boundedness of the fractional Hardy-type operator from the
/// Herz-Morrey space (p1, q1, alpha, lambda) into the weighted space
/// (p2, q2, alpha, lambda).
inline TheoremReport verify_theorem1(const ExperimentConfig& cfg) {
    detail::TheoremContext ctx = detail::make_context(cfg);
    TheoremReport rep;
    rep.statement = "hardy-weighted-herz-morrey";
    detail::echo_config(cfg, rep);
    rep.q1_stats = ctx.q1_stats;

    const DeltaEstimate d1 =
        delta_estimate(ctx.q1, ctx.grid, DeltaTarget::ConjugateExponent);
    rep.deltas.emplace_back("conjugate_q1", d1);
    detail::audit_common(ctx, cfg, rep);
    const double upper = cfg.space.lambda + cfg.grid.n * d1.delta;
    rep.audit.push_back({"alpha_below_admissible_range", cfg.space.alpha < upper,
                         "alpha=" + detail::fmt(cfg.space.alpha) +
                             " lambda+n*delta1=" + detail::fmt(upper) +
                             " delta1=" + detail::fmt(d1.delta) +
                             " residual=" + detail::fmt(d1.residual)});
    detail::finish_audit(rep);

    const double c_inf = ctx.q1_stats.c_infinity;
    const double tail_rel = cfg.tolerances.herz_tail_rel;
    const SpaceParams source{cfg.space.alpha, cfg.space.lambda, cfg.space.p1, ctx.q1};
    const SpaceParams target{cfg.space.alpha, cfg.space.lambda, cfg.space.p2, ctx.q2};
    detail::run_rows(
        ctx,
        [&](const RadialFunction& f) {
            SampledOperatorOutput op = hardy(f, ctx.beta, ctx.grid);
            op = apply_weight(std::move(op), ctx.beta, c_inf, cfg.grid.n);
            return herz_morrey_norm_values(op.values, target, ctx.grid, tail_rel);
        },
        [&](const RadialFunction& f) {
            return herz_morrey_norm(f, source, ctx.grid, tail_rel);
        },
        rep);
    detail::flag_ratio_growth(rep);
    return rep;
}

/// Same statement for the dual-side operator, with the condition
/// alpha > lambda - n*delta2 (delta2 estimated on q2).
inline TheoremReport verify_theorem2(const ExperimentConfig& cfg) {
    detail::TheoremContext ctx = detail::make_context(cfg);
    TheoremReport rep;
    rep.statement = "hardy-star-weighted-herz-morrey";
    detail::echo_config(cfg, rep);
    rep.q1_stats = ctx.q1_stats;

    const DeltaEstimate d2 = delta_estimate(ctx.q2, ctx.grid, DeltaTarget::Exponent);
    rep.deltas.emplace_back("sobolev_target_q2", d2);
    detail::audit_common(ctx, cfg, rep);
    const double lower = cfg.space.lambda - cfg.grid.n * d2.delta;
    rep.audit.push_back({"alpha_above_admissible_range", cfg.space.alpha > lower,
                         "alpha=" + detail::fmt(cfg.space.alpha) +
                             " lambda-n*delta2=" + detail::fmt(lower) +
                             " delta2=" + detail::fmt(d2.delta) +
                             " residual=" + detail::fmt(d2.residual)});
    detail::finish_audit(rep);

    const double c_inf = ctx.q1_stats.c_infinity;
    const double tail_rel = cfg.tolerances.herz_tail_rel;
    const SpaceParams source{cfg.space.alpha, cfg.space.lambda, cfg.space.p1, ctx.q1};
    const SpaceParams target{cfg.space.alpha, cfg.space.lambda, cfg.space.p2, ctx.q2};
    detail::run_rows(
        ctx,
        [&](const RadialFunction& f) {
            SampledOperatorOutput op = hardy_star(f, ctx.beta, ctx.grid);
            op = apply_weight(std::move(op), ctx.beta, c_inf, cfg.grid.n);
            return herz_morrey_norm_values(op.values, target, ctx.grid, tail_rel);
        },
        [&](const RadialFunction& f) {
            return herz_morrey_norm(f, source, ctx.grid, tail_rel);
        },
        rep);
    detail::flag_ratio_growth(rep);
    return rep;
}

/// Weighted Sobolev-type estimate for the Riesz potential: weighted
/// L^{q2(.)} norm of I_{beta(.)}f against the L^{q1(.)} norm of f.
inline TheoremReport verify_proposition2(const ExperimentConfig& cfg) {
    detail::TheoremContext ctx = detail::make_context(cfg);
    TheoremReport rep;
    rep.statement = "riesz-weighted-sobolev";
    detail::echo_config(cfg, rep);
    rep.q1_stats = ctx.q1_stats;
    detail::audit_common(ctx, cfg, rep);

    const double c_inf = ctx.q1_stats.c_infinity;
    RieszOptions opts;
    opts.angular_nodes = cfg.grid.angular_nodes;
    opts.shell_budget = cfg.tolerances.shell_budget;

    // The proof route rests on I(chi_{B_k})(x) >= c |x|^{beta(x)} on A_k,
    // uniformly in k; audit it over the interior scales.
    {
        const int k_lo = std::max(cfg.grid.k_min + 2, -6);
        const int k_hi = std::min(cfg.grid.k_max - 2, 6);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        bool positive = true;
        try {
            for (int k = k_lo; k <= k_hi; ++k) {
                const double m = riesz_lower_bound_check(
                    ctx.beta, ctx.grid, k, cfg.sampling.lower_bound_samples, opts);
                positive = positive && m > 0.0;
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
            rep.audit.push_back({"riesz_lower_bound_uniform",
                                 positive && hi < 5.0 * lo,
                                 "k=[" + std::to_string(k_lo) + "," +
                                     std::to_string(k_hi) + "] min_ratio=" +
                                     detail::fmt(lo) + " max/min=" +
                                     detail::fmt(hi / lo)});
        } catch (const Error& err) {
            rep.audit.push_back(
                {"riesz_lower_bound_uniform", false, std::string(err.what())});
        }
    }
    detail::finish_audit(rep);
    detail::run_rows(
        ctx,
        [&](const RadialFunction& f) {
            SampledOperatorOutput op =
                riesz_radial(f, ctx.beta, ctx.grid, cfg.grid.angular_nodes, opts);
            op = apply_weight(std::move(op), ctx.beta, c_inf, cfg.grid.n);
            return luxemburg_norm_values(op.values, ctx.q2, ctx.grid);
        },
        [&](const RadialFunction& f) { return luxemburg_norm(f, ctx.q1, ctx.grid); },
        rep);
    return rep;
}

/// Generalized Holder inequality over deterministically generated pairs.
inline TheoremReport verify_lemma1(const ExperimentConfig& cfg, int pair_count = 100) {
    const int n = cfg.grid.n;
    ExponentField q1 =
        parse_exponent(cfg.q1, ExponentRole::LebesgueExponent, n, "exponents.q1");
    DyadicGrid grid = DyadicGrid::build(n, cfg.grid.k_min, cfg.grid.k_max,
                                        cfg.grid.nodes_per_annulus);
    TheoremReport rep;
    rep.statement = "generalized-holder";
    detail::echo_config(cfg, rep);
    rep.q1_stats = estimate_stats(q1, dyadic_sample_radii(cfg.grid.k_min,
                                                          cfg.grid.k_max, 32));
    QuasiRandom qr(cfg.sampling.seed);
    const int j_lo = cfg.grid.k_min + 2, j_hi = cfg.grid.k_max - 2;
    auto random_function = [&]() {
        switch (qr.uniform_int(0, 4)) {
            case 0: return RadialFunction::char_annulus(qr.uniform_int(j_lo, j_hi));
            case 1: return RadialFunction::char_ball(qr.uniform_int(j_lo, j_hi));
            case 2: {
                const int a = qr.uniform_int(j_lo, j_hi - 2);
                return RadialFunction::power(qr.uniform(-1.5, 1.5), a,
                                             a + qr.uniform_int(0, 2));
            }
            case 3:
                return RadialFunction::gauss_bump(qr.uniform(0.1, 8.0),
                                                  qr.uniform(0.05, 2.0));
            default:
                return RadialFunction::combination(
                    {{qr.uniform(0.5, 3.0),
                      RadialFunction::char_annulus(qr.uniform_int(j_lo, j_hi))},
                     {qr.uniform(0.5, 3.0),
                      RadialFunction::char_ball(qr.uniform_int(j_lo, j_hi))}});
        }
    };
    bool all_hold = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < pair_count; ++i) {
        const RadialFunction f = random_function();
        const RadialFunction g = random_function();
        const HolderCheck hc = holder_pairing_check(f, g, q1, grid);
        ReportRow row;
        row.function_id = f.describe() + "|" + g.describe();
        row.numerator = hc.lhs;
        row.denominator = hc.rhs;
        row.ratio = hc.rhs > 0.0 ? hc.lhs / hc.rhs : 0.0;
        if (!hc.holds) row.warnings.push_back("violated");
        all_hold = all_hold && hc.holds;
        if (hc.rhs > 0.0) worst_margin = std::min(worst_margin, hc.rhs - hc.lhs);
        rep.rows.push_back(std::move(row));
    }
    for (const auto& row : rep.rows) rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    rep.audit.push_back({"holder_inequality_holds", all_hold,
                         "pairs=" + std::to_string(pair_count) +
                             " worst_margin=" + detail::fmt(worst_margin)});
    detail::finish_audit(rep);
    return rep;
}

/// Characteristic-function norm products over nested balls plus the delta
/// exponents of the norm-ratio bounds.
inline TheoremReport verify_lemma2(const ExperimentConfig& cfg) {
    const int n = cfg.grid.n;
    ExponentField q1 =
        parse_exponent(cfg.q1, ExponentRole::LebesgueExponent, n, "exponents.q1");
    DyadicGrid grid = DyadicGrid::build(n, cfg.grid.k_min, cfg.grid.k_max,
                                        cfg.grid.nodes_per_annulus);
    TheoremReport rep;
    rep.statement = "ball-norm-products";
    detail::echo_config(cfg, rep);
    rep.q1_stats = estimate_stats(q1, dyadic_sample_radii(cfg.grid.k_min,
                                                          cfg.grid.k_max, 32));
    const int k_start = std::max(grid.k_min() + 1, safe_ball_start(grid));
    double c_bound = 1.0;
    for (int k = k_start; k <= grid.k_max(); ++k) {
        const double prod = ball_norm_product(q1, grid, k);
        ReportRow row;
        row.function_id = "char-ball:" + std::to_string(k);
        row.numerator = prod;
        row.denominator = 1.0;
        row.ratio = prod;
        rep.rows.push_back(std::move(row));
        c_bound = std::max({c_bound, prod, 1.0 / prod});
    }
    for (const auto& row : rep.rows) rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    rep.deltas.emplace_back("exponent_q1",
                            delta_estimate(q1, grid, DeltaTarget::Exponent));
    rep.deltas.emplace_back("conjugate_q1",
                            delta_estimate(q1, grid, DeltaTarget::ConjugateExponent));
    rep.audit.push_back({"ball_products_bounded", std::isfinite(c_bound),
                         "C=" + detail::fmt(c_bound) +
                             " balls=" + std::to_string(static_cast<int>(rep.rows.size()))});
    detail::finish_audit(rep);
    return rep;
}

struct SweepCell {
    double alpha = 0.0;
    double lambda = 0.0;
    bool audit_passed = false;
    double sup_ratio = 0.0;
};

struct SweepResult {
    std::string statement;
    std::vector<SweepCell> cells;
};

/// Parameter grid over (alpha, lambda) for one of the Hardy statements.
inline SweepResult sweep(const ExperimentConfig& base, const std::vector<double>& alphas,
                         const std::vector<double>& lambdas, bool use_theorem2) {
    SweepResult out;
    out.statement = use_theorem2 ? "hardy-star-sweep" : "hardy-sweep";
    for (double lambda : lambdas) {
        for (double alpha : alphas) {
            ExperimentConfig cfg = base;
            cfg.space.alpha = alpha;
            cfg.space.lambda = lambda;
            const TheoremReport rep =
                use_theorem2 ? verify_theorem2(cfg) : verify_theorem1(cfg);
            out.cells.push_back({alpha, lambda, rep.audit_passed, rep.sup_ratio});
        }
    }
    return out;
}

}  // namespace varex
