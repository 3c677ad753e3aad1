#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_family.hpp"
#include "varex/varex.hpp"

using namespace varex;
using testutil::direct_constant_norm;
using testutil::unit_family;

namespace {

const ExponentField kConst2 = ExponentField::constant(2.0, ExponentRole::LebesgueExponent, 2);
const ExponentField kLog = ExponentField::log_decay(1.2, 0.3, ExponentRole::LebesgueExponent, 2);

DyadicGrid small_grid() { return build_grid(2, -8, 8, 32); }

}  // namespace

TEST_CASE("modular closed forms", "[norms]") {
    const DyadicGrid grid = small_grid();
    const RadialFunction chi = RadialFunction::char_annulus(0);
    const double a0 = 3.0 * kPi / 4.0;
    CHECK(modular(chi, kConst2, grid, 1.0) == Catch::Approx(a0).epsilon(1e-12));
    CHECK(modular(chi, kConst2, grid, 2.0) == Catch::Approx(a0 / 4.0).epsilon(1e-12));
    CHECK(modular(RadialFunction::zero(), kConst2, grid, 0.7) == 0.0);
}

TEST_CASE("modular is strictly decreasing in eta", "[norms]") {
    const DyadicGrid grid = small_grid();
    for (const auto& [id, f] : unit_family()) {
        double prev = modular(f, kLog, grid, 0.25);
        for (double eta : {0.5, 1.0, 2.0, 8.0}) {
            const double cur = modular(f, kLog, grid, eta);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("Luxemburg norm of an annulus indicator", "[norms]") {
    const DyadicGrid grid = small_grid();
    const RadialFunction chi = RadialFunction::char_annulus(0);
    const double a0 = 3.0 * kPi / 4.0;
    for (double q0 : {1.5, 2.0, 3.0}) {
        const ExponentField q = ExponentField::constant(q0, ExponentRole::LebesgueExponent, 2);
        const NormResult res = luxemburg_norm(chi, q, grid);
        CHECK(res.status == NormStatus::Converged);
        CHECK(res.value == Catch::Approx(std::pow(a0, 1.0 / q0)).epsilon(1e-9));
    }
    CHECK(luxemburg_norm(chi, kConst2, grid).value ==
          Catch::Approx(1.5349900619197572).epsilon(1e-9));
}

TEST_CASE("constant-exponent oracle across the family", "[norms]") {
    const DyadicGrid grid = small_grid();
    for (double q0 : {1.5, 2.0, 3.0}) {
        const ExponentField q = ExponentField::constant(q0, ExponentRole::LebesgueExponent, 2);
        for (const auto& [id, f] : unit_family()) {
            const double expect = direct_constant_norm(f, q0, grid);
            const NormResult got = luxemburg_norm(f, q, grid);
            INFO(id << " q0=" << q0);
            CHECK(std::abs(got.value - expect) <= 1e-8 * expect);
        }
    }
}

TEST_CASE("unit-modular identity", "[norms]") {
    const DyadicGrid grid = small_grid();
    const ExponentField fields[] = {
        ExponentField::constant(1.5, ExponentRole::LebesgueExponent, 2), kConst2, kLog,
        ExponentField::log_decay(2.0, 0.5, ExponentRole::LebesgueExponent, 2)};
    int converged = 0;
    for (const auto& q : fields) {
        for (const auto& [id, f] : unit_family()) {
            const NormResult res = luxemburg_norm(f, q, grid);
            if (res.status != NormStatus::Converged) continue;
            REQUIRE(res.modular_at_value.has_value());
            INFO(id);
            CHECK(std::abs(*res.modular_at_value - 1.0) <= 1e-8);
            ++converged;
        }
    }
    CHECK(converged >= 40);
}

TEST_CASE("Luxemburg homogeneity", "[norms]") {
    const DyadicGrid grid = small_grid();
    for (const auto& [id, f] : unit_family()) {
        const double base = luxemburg_norm(f, kLog, grid).value;
        for (double lam : {0.1, 3.0, 100.0}) {
            const double scaled = luxemburg_norm(f.scaled(lam), kLog, grid).value;
            INFO(id << " lambda=" << lam);
            CHECK(std::abs(scaled - lam * base) <= 1e-9 * lam * base + 1e-290);
        }
    }
}

TEST_CASE("norm monotonicity under pointwise domination", "[norms]") {
    const DyadicGrid grid = small_grid();
    const std::pair<RadialFunction, RadialFunction> pairs[] = {
        {RadialFunction::char_annulus(0), RadialFunction::char_ball(2)},
        {RadialFunction::gauss_bump(1, 0.3), RadialFunction::gauss_bump(1, 0.3).scaled(1.5)},
        {RadialFunction::power(-0.5, 0, 2), RadialFunction::power(-0.5, -1, 3)},
    };
    for (const auto& [f, g] : pairs) {
        for (double r : grid.radii()) REQUIRE(std::abs(f(r)) <= std::abs(g(r)) + 0.0);
        CHECK(luxemburg_norm(f, kLog, grid).value <=
              luxemburg_norm(g, kLog, grid).value + 1e-12);
    }
}

TEST_CASE("triangle inequality", "[norms]") {
    const DyadicGrid grid = small_grid();
    const auto fam = unit_family();
    QuasiRandom qr(17);
    for (int trial = 0; trial < 24; ++trial) {
        const auto& f = fam[qr.uniform_int(0, static_cast<int>(fam.size()) - 1)].second;
        const auto& g = fam[qr.uniform_int(0, static_cast<int>(fam.size()) - 1)].second;
        const double c1 = qr.uniform(-2.0, 2.0), c2 = qr.uniform(-2.0, 2.0);
        const RadialFunction sum = RadialFunction::combination({{c1, f}, {c2, g}});
        const double ns = luxemburg_norm(sum, kLog, grid).value;
        const double nf = luxemburg_norm(f.scaled(c1), kLog, grid).value;
        const double ng = luxemburg_norm(g.scaled(c2), kLog, grid).value;
        CHECK(ns <= nf + ng + 1e-9 * (nf + ng) + 1e-290);
    }
}

TEST_CASE("weighted norms", "[norms]") {
    const DyadicGrid grid = small_grid();
    const RadialFunction f = RadialFunction::gauss_bump(2.0, 0.5);
    const double plain = luxemburg_norm(f, kLog, grid).value;
    CHECK(weighted_norm(f, kLog, grid, [](double) { return 1.0; }).value ==
          Catch::Approx(plain).epsilon(1e-12));
    // gamma = 0 weight (c_infinity = 0) is the identity weight.
    const ExponentField beta = ExponentField::constant(0.5, ExponentRole::FractionalOrder, 2);
    CHECK(weighted_norm(f, kLog, grid,
                        [&](double r) {
                            return std::pow(1.0 + r, -gamma_weight(beta, 0.0, 2, r));
                        })
              .value == Catch::Approx(plain).epsilon(1e-12));
    // 1-D closed form: q = 1, weight (1+r)^{-1} on A_0.
    const DyadicGrid line = build_grid(1, -4, 4, 32);
    const ExponentField one = ExponentField::constant(1.0, ExponentRole::LebesgueExponent, 1);
    const NormResult res = weighted_norm(RadialFunction::char_annulus(0), one, line,
                                         [](double r) { return 1.0 / (1.0 + r); });
    CHECK(res.value == Catch::Approx(2.0 * std::log(4.0 / 3.0)).epsilon(1e-9));
    CHECK_THROWS_AS(weighted_norm(f, kLog, grid, [](double) { return 0.0; }), Error);
}

TEST_CASE("Herz-Morrey norm of a single annulus", "[norms]") {
    const DyadicGrid grid = small_grid();
    const RadialFunction chi = RadialFunction::char_annulus(0);
    const double expect = std::sqrt(3.0 * kPi / 4.0);
    for (double lambda : {0.0, 0.1, 0.7}) {
        for (double alpha : {-0.3, 0.0, 0.5}) {
            for (double p : {0.5, 1.0, 2.0}) {
                const SpaceParams sp{alpha, lambda, p, kConst2};
                const NormResult res = herz_morrey_norm(chi, sp, grid);
                INFO("lambda=" << lambda << " alpha=" << alpha << " p=" << p);
                CHECK(res.value == Catch::Approx(expect).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("Herz-Morrey recombination oracle", "[norms]") {
    const DyadicGrid grid = small_grid();
    for (double q0 : {1.5, 2.0}) {
        const ExponentField q = ExponentField::constant(q0, ExponentRole::LebesgueExponent, 2);
        const SpaceParams sp{0.0, 0.0, q0, q};
        for (const auto& [id, f] : unit_family()) {
            const double expect = direct_constant_norm(f, q0, grid);
            INFO(id << " q0=" << q0);
            CHECK(herz_morrey_norm(f, sp, grid).value ==
                  Catch::Approx(expect).epsilon(1e-8));
        }
    }
    const SpaceParams sp{0.3, 0.2, 1.0, kLog};
    const NormResult zero = herz_morrey_norm(RadialFunction::zero(), sp, grid);
    CHECK(zero.status == NormStatus::ZeroFunction);
    CHECK(zero.value == 0.0);
    const NormResult lzero = luxemburg_norm(RadialFunction::zero(), kLog, grid);
    CHECK(lzero.status == NormStatus::ZeroFunction);
    CHECK(lzero.value == 0.0);
}

TEST_CASE("tail warnings", "[norms]") {
    const DyadicGrid grid = small_grid();
    // Mass at the outer boundary is flagged.
    const RadialFunction escaping = RadialFunction::gauss_bump(grid.outer_radius(), 10.0);
    CHECK(luxemburg_norm(escaping, kLog, grid).status == NormStatus::TailWarning);
    // Indicators ending exactly at the boundary have no tail.
    CHECK(luxemburg_norm(RadialFunction::char_ball(grid.k_max()), kLog, grid).status ==
          NormStatus::Converged);
    // Herz sums still growing at k_max are flagged.
    const SpaceParams sp{0.0, 0.0, 1.0, kLog};
    const NormResult herz =
        herz_morrey_norm(RadialFunction::char_ball(grid.k_max()), sp, grid);
    CHECK(herz.status == NormStatus::TailWarning);
    const NormResult inner = herz_morrey_norm(RadialFunction::char_ball(0), sp, grid);
    CHECK(inner.status == NormStatus::Converged);
}

TEST_CASE("generalized Holder pairing", "[norms]") {
    const DyadicGrid grid = small_grid();
    // C_q = 1 + 1/q_- - 1/q_+ for a field with q_- = 2, q_+ = 4.
    const ExponentField wide = ExponentField::log_decay(2.0, 2.0, ExponentRole::LebesgueExponent, 2);
    const HolderCheck wide_check = holder_pairing_check(
        RadialFunction::char_ball(1), RadialFunction::char_annulus(0), wide, grid);
    CHECK(wide_check.constant == Catch::Approx(1.25).epsilon(1e-12));
    CHECK(wide_check.holds);

    // Cauchy-Schwarz saturation: q = 2, f = g = chi_{A_0}.
    const RadialFunction chi = RadialFunction::char_annulus(0);
    const HolderCheck sat = holder_pairing_check(chi, chi, kConst2, grid);
    CHECK(sat.constant == Catch::Approx(1.0));
    CHECK(sat.lhs == Catch::Approx(sat.rhs).epsilon(1e-9));
    CHECK(sat.holds);

    const HolderCheck zero =
        holder_pairing_check(RadialFunction::zero(), chi, kConst2, grid);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);
    CHECK(zero.holds);
}

TEST_CASE("Holder inequality over random pairs", "[norms]") {
    const DyadicGrid grid = small_grid();
    const auto fam = unit_family();
    QuasiRandom qr(23);
    for (int trial = 0; trial < 30; ++trial) {
        const auto& f = fam[qr.uniform_int(0, static_cast<int>(fam.size()) - 1)].second;
        const auto& g = fam[qr.uniform_int(0, static_cast<int>(fam.size()) - 1)].second;
        const HolderCheck hc = holder_pairing_check(f, g, kLog, grid);
        INFO(f.describe() << " | " << g.describe());
        CHECK(hc.holds);
    }
}

TEST_CASE("ball norm products", "[norms]") {
    const DyadicGrid grid = build_grid(2, -26, 10, 16);
    for (int k : {-10, -4, 0, 5, 10}) {
        CHECK(ball_norm_product(kConst2, grid, k) == Catch::Approx(1.0).epsilon(1e-9));
        const ExponentField q15 =
            ExponentField::constant(1.5, ExponentRole::LebesgueExponent, 2);
        CHECK(ball_norm_product(q15, grid, k) == Catch::Approx(1.0).epsilon(1e-9));
    }
    double c_bound = 1.0;
    for (int k = -10; k <= 10; ++k) {
        const double prod = ball_norm_product(kLog, grid, k);
        c_bound = std::max({c_bound, prod, 1.0 / prod});
    }
    CHECK(c_bound < 3.0);
    // Lower route via the Holder pairing: |B| <= C_q ||chi||_q ||chi||_{q'}.
    const auto [q_min, q_max] = kLog.bounds();
    const double cq = 1.0 + 1.0 / q_min - 1.0 / q_max;
    for (int k : {-6, 0, 6})
        CHECK(ball_norm_product(kLog, grid, k) >= 1.0 / cq - 1e-9);

    // Degenerate two-annulus grid: the Holder route still bounds the product
    // from below once the truncated ball measure is accounted for.
    const DyadicGrid tiny = build_grid(2, 0, 1, 16);
    const double covered = tiny.annulus_measure(0) + tiny.annulus_measure(1);
    const auto [ql, qh] = kLog.bounds();
    const double cq2 = 1.0 + 1.0 / ql - 1.0 / qh;
    CHECK(ball_norm_product(kLog, tiny, 1) >=
          covered / (cq2 * tiny.ball_measure(1)) - 1e-9);
}

TEST_CASE("delta estimates", "[norms]") {
    const DyadicGrid grid = build_grid(2, -26, 10, 16);
    const DeltaEstimate dq = delta_estimate(kConst2, grid, DeltaTarget::Exponent);
    CHECK(dq.delta == Catch::Approx(0.5).epsilon(1e-9));
    CHECK(dq.residual < 1e-8);
    const DeltaEstimate dqc = delta_estimate(kConst2, grid, DeltaTarget::ConjugateExponent);
    CHECK(dqc.delta == Catch::Approx(0.5).epsilon(1e-9));

    const DeltaEstimate dlog = delta_estimate(kLog, grid, DeltaTarget::Exponent);
    CHECK(dlog.delta >= 2.0 / 3.0 - 1e-6);  // 1/q_+
    CHECK(dlog.delta <= 5.0 / 6.0 + 1e-6);  // 1/q_-
    CHECK(dlog.ball_count >= 4);

    const DyadicGrid shallow = build_grid(2, -4, 4, 16);
    CHECK_THROWS_AS(delta_estimate(kLog, shallow, DeltaTarget::Exponent),
                    InsufficientData);
}

TEST_CASE("characteristic-function ratio bound", "[norms]") {
    const DyadicGrid grid = build_grid(2, -26, 10, 16);
    const DeltaEstimate d = delta_estimate(kLog, grid, DeltaTarget::Exponent);
    const int k0 = safe_ball_start(grid);
    std::vector<double> norms, measures;
    const NodeValues qv = sample_exponent(kLog, grid);
    for (int k = k0; k <= grid.k_max(); ++k) {
        NodeValues ones(grid.size(), 0.0);
        const auto [b, e] = grid.annulus_slice(k);
        (void)b;
        std::fill(ones.begin(), ones.begin() + e, 1.0);
        norms.push_back(luxemburg_norm_values(ones, kLog, grid).value);
        measures.push_back(grid.ball_measure(k));
    }
    double c_needed = 0.0;
    for (std::size_t j = 0; j < norms.size(); ++j)
        for (std::size_t k = j + 1; k < norms.size(); ++k) {
            const double ratio = norms[j] / norms[k];
            const double mr = std::pow(measures[j] / measures[k], d.delta);
            c_needed = std::max(c_needed, ratio / mr);
        }
    CHECK(c_needed < 3.0);
    CHECK(c_needed > 0.0);
}
