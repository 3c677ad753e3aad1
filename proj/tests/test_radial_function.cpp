#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "varex/varex.hpp"

using namespace varex;

TEST_CASE("indicator evaluation", "[functions]") {
    const RadialFunction ball = RadialFunction::char_ball(0);
    CHECK(ball(0.5) == 1.0);
    CHECK(ball(1.0) == 1.0);  // B_k is closed
    CHECK(ball(2.0) == 0.0);
    const RadialFunction ann = RadialFunction::char_annulus(0);
    CHECK(ann(0.5) == 0.0);  // A_j is open at 2^{j-1}
    CHECK(ann(0.75) == 1.0);
    CHECK(ann(1.0) == 1.0);
    CHECK(ann(1.5) == 0.0);
}

TEST_CASE("power and bump evaluation", "[functions]") {
    const RadialFunction p = RadialFunction::power(-1.0, 0, 0);
    CHECK(p(0.75) == Catch::Approx(4.0 / 3.0));
    CHECK(p(0.4) == 0.0);
    CHECK(p(1.5) == 0.0);
    const RadialFunction b = RadialFunction::gauss_bump(1.0, 0.5);
    CHECK(b(1.0) == Catch::Approx(1.0));
    CHECK(b(1.5) == Catch::Approx(std::exp(-1.0)));
}

TEST_CASE("combinations with disjoint supports", "[functions]") {
    const RadialFunction f = RadialFunction::combination(
        {{2.0, RadialFunction::char_annulus(0)}, {3.0, RadialFunction::char_annulus(1)}});
    CHECK(f(0.75) == 2.0);
    CHECK(f(1.5) == 3.0);
    CHECK(f(3.0) == 0.0);
}

TEST_CASE("restriction algebra", "[functions]") {
    CHECK(RadialFunction::char_ball(2).restrict_to_annulus(0).describe() ==
          "char-annulus:0");
    CHECK(RadialFunction::char_annulus(3).restrict_to_annulus(0).is_zero());
    CHECK(RadialFunction::char_ball(1).restrict_to_annulus(2).is_zero());
    const RadialFunction p = RadialFunction::power(0.5, -2, 3).restrict_to_annulus(1);
    CHECK(p(1.5) == Catch::Approx(std::sqrt(1.5)));
    CHECK(p(2.5) == 0.0);
    const RadialFunction g = RadialFunction::gauss_bump(1.0, 0.5).restrict_to_annulus(0);
    CHECK(g(0.75) == Catch::Approx(std::exp(-0.25)));
    CHECK(g(1.25) == 0.0);
}

TEST_CASE("partition identity on grid nodes", "[functions]") {
    const DyadicGrid grid = build_grid(2, -6, 6, 16);
    const RadialFunction fns[] = {
        RadialFunction::char_ball(3),
        RadialFunction::power(-0.5, -4, 4),
        RadialFunction::gauss_bump(2.0, 0.7),
        RadialFunction::combination({{1.5, RadialFunction::char_annulus(0)},
                                     {-2.0, RadialFunction::gauss_bump(1.0, 0.3)}}),
    };
    for (const RadialFunction& f : fns) {
        std::vector<RadialFunction> pieces;
        for (int j = grid.k_min(); j <= grid.k_max(); ++j)
            pieces.push_back(f.restrict_to_annulus(j));
        for (double r : grid.radii()) {
            double sum = 0.0;
            for (const auto& piece : pieces) sum += piece(r);
            CHECK(sum == f(r));  // exact: each node lies in exactly one annulus
        }
    }
}

TEST_CASE("restriction preserves nonnegativity", "[functions]") {
    const DyadicGrid grid = build_grid(2, -5, 5, 8);
    const RadialFunction f = RadialFunction::combination(
        {{2.0, RadialFunction::char_ball(2)}, {1.0, RadialFunction::gauss_bump(1, 1)}});
    for (int j = grid.k_min(); j <= grid.k_max(); ++j) {
        const RadialFunction piece = f.restrict_to_annulus(j);
        for (double r : grid.radii()) CHECK(piece(r) >= 0.0);
    }
}

TEST_CASE("support bounds and breakpoints", "[functions]") {
    const RadialFunction ann = RadialFunction::char_annulus(2);
    CHECK(ann.support_inner() == dyadic(1));
    CHECK(ann.support_outer() == dyadic(2));
    CHECK(ann.breakpoints() == std::vector<double>{dyadic(1), dyadic(2)});
    const RadialFunction ball = RadialFunction::char_ball(-1);
    CHECK(ball.support_inner() == 0.0);
    CHECK(ball.breakpoints() == std::vector<double>{0.5});
    CHECK(RadialFunction::zero().support_outer() == 0.0);
    CHECK(RadialFunction::zero().is_zero());
}

TEST_CASE("scaling", "[functions]") {
    const RadialFunction f = RadialFunction::char_ball(0).scaled(3.0);
    CHECK(f(0.5) == 3.0);
    CHECK(f.scaled(0.0).is_zero());
}
