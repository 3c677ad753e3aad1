#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <string>

#include "test_family.hpp"
#include "varex/varex.hpp"

using namespace varex;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.grid = {2, -12, 8, 16, 32};
    cfg.q1 = "logdecay:1.2:0.3";
    cfg.beta = "const:0.5";
    cfg.space = {0.0, 0.1, 1.0, 1.0};
    cfg.family = {{"char_annulus", "-4:4"}};
    return cfg;
}

const std::set<std::string> kExpectedAudit1 = {
    "fractional_order_admissible", "exponent_minimal_at_infinity",
    "log_holder_continuity",       "p_exponents_ordered",
    "lambda_nonnegative",          "alpha_below_admissible_range"};

const std::set<std::string> kExpectedAudit2 = {
    "fractional_order_admissible", "exponent_minimal_at_infinity",
    "log_holder_continuity",       "p_exponents_ordered",
    "lambda_nonnegative",          "alpha_above_admissible_range"};

}  // namespace

TEST_CASE("config parsing round-trips", "[harness]") {
    const std::string text = R"(
# comment
[grid]
n = 2
k_min = -6
k_max = 6
nodes_per_annulus = 16
angular_nodes = 24

[exponents]
q1 = logdecay:1.4:0.2
beta = const:0.3

[space]
alpha = 0.25
lambda = 0.5
p1 = 1
p2 = 2

[family]
char_annulus = -2:2
gauss_bump = 1:0.5

[sampling]
seed = 42

[tolerances]
strict = true

[output]
dir = results
)";
    const ExperimentConfig cfg = parse_config_text(text);
    CHECK(cfg.grid.k_min == -6);
    CHECK(cfg.grid.angular_nodes == 24);
    CHECK(cfg.q1 == "logdecay:1.4:0.2");
    CHECK(cfg.space.alpha == 0.25);
    CHECK(cfg.space.p2 == 2.0);
    CHECK(cfg.sampling.seed == 42);
    CHECK(cfg.tolerances.strict);
    CHECK(cfg.output.dir == "results");
    const auto family = build_family(cfg);
    CHECK(family.size() == 6);
    CHECK(family.front().first == "char-annulus:-2");
    CHECK(family.back().first == "gauss-bump:1:0.5");
}

TEST_CASE("config errors name the offending field", "[harness]") {
    CHECK_THROWS_WITH(parse_config_text("[grid]\nk_min = abc\n"),
                      Catch::Matchers::ContainsSubstring("grid.k_min"));
    CHECK_THROWS_WITH(parse_config_text("[space]\nlambda = -1\n"),
                      Catch::Matchers::ContainsSubstring("space.lambda"));
    CHECK_THROWS_WITH(parse_config_text("[grid]\nbogus = 3\n"),
                      Catch::Matchers::ContainsSubstring("grid.bogus"));
    CHECK_THROWS_WITH(parse_config_text("[space]\np1 = 3\np2 = 1\n"),
                      Catch::Matchers::ContainsSubstring("space.p1"));
    CHECK_THROWS_AS(parse_exponent("logdecay:1.2", ExponentRole::LebesgueExponent, 2),
                    ConfigError);
    CHECK_THROWS_AS(parse_function("wiggle:3"), ConfigError);
}

TEST_CASE("thm1 report structure", "[harness]") {
    const TheoremReport rep = verify_theorem1(small_config());
    std::set<std::string> names;
    for (const auto& a : rep.audit) {
        CHECK(names.insert(a.name).second);  // exactly once
    }
    CHECK(names == kExpectedAudit1);
    CHECK(rep.audit_passed);
    CHECK(rep.rows.size() == 9);
    for (const auto& row : rep.rows) {
        CHECK_FALSE(row.skipped);
        CHECK(std::isfinite(row.ratio));
        CHECK(row.ratio > 0.0);
    }
    CHECK(rep.sup_ratio > 0.0);
    REQUIRE(rep.deltas.size() == 1);
    CHECK(rep.deltas[0].first == "conjugate_q1");
    CHECK(rep.deltas[0].second.delta > 0.0);
    CHECK(rep.deltas[0].second.delta <= 1.0 / 6.0 + 1e-12);  // 1/(q1')_+
}

TEST_CASE("thm2 report structure", "[harness]") {
    ExperimentConfig cfg = small_config();
    cfg.space.lambda = 0.0;
    const TheoremReport rep = verify_theorem2(cfg);
    std::set<std::string> names;
    for (const auto& a : rep.audit) names.insert(a.name);
    CHECK(names == kExpectedAudit2);
    CHECK(rep.audit_passed);
    CHECK(rep.sup_ratio > 0.0);
    REQUIRE(rep.deltas.size() == 1);
    CHECK(rep.deltas[0].first == "sobolev_target_q2");
    // alpha = 0 > lambda - n delta2 must have been audited against q2.
    CHECK(rep.deltas[0].second.delta <= 1.0 / 2.4 + 1e-9);
}

TEST_CASE("zero functions are skipped, not fatal", "[harness]") {
    ExperimentConfig cfg = small_config();
    cfg.family.push_back({"power", "1:10:12"});  // supported outside the grid
    const TheoremReport rep = verify_theorem1(cfg);
    REQUIRE(rep.rows.size() == 10);
    const ReportRow& zero_row = rep.rows.back();
    CHECK(zero_row.skipped);
    REQUIRE_FALSE(zero_row.warnings.empty());
    CHECK(zero_row.warnings.front() == "zero-function");
    CHECK(rep.sup_ratio > 0.0);
}

TEST_CASE("constant-exponent degeneration matches direct norms", "[harness]") {
    ExperimentConfig cfg = small_config();
    cfg.q1 = "const:2";
    cfg.space.lambda = 0.0;
    cfg.family = {{"char_ball", "0:0"}};
    const TheoremReport rep = verify_theorem1(cfg);
    REQUIRE(rep.rows.size() == 1);

    // Direct route: H(chi_{B_0})(r) = pi r^{beta-2} min(r,1)^2, q2 = 4,
    // C_infinity = 0 so the weight is 1; Herz sums with alpha = 0, p = 1.
    const DyadicGrid grid = build_grid(2, -12, 8, 16);
    auto hardy_cf = [](double r) {
        return kPi * std::pow(r, 0.5 - 2.0) * std::pow(std::min(r, 1.0), 2.0);
    };
    double numerator = 0.0, denominator = 0.0;
    for (int k = grid.k_min(); k <= grid.k_max(); ++k) {
        const double n4 = std::pow(
            integrate_radial(grid, [&](double r) { return std::pow(hardy_cf(r), 4.0); },
                             std::pair{k, k}),
            0.25);
        numerator += n4;
        if (k <= 0) {
            denominator += std::pow(
                integrate_radial(
                    grid,
                    [&](double r) { return r <= 1.0 ? 1.0 : 0.0; },
                    std::pair{k, k}),
                0.5);
        }
    }
    CHECK(rep.rows[0].ratio ==
          Catch::Approx(numerator / denominator).epsilon(1e-6));
}

TEST_CASE("prop2 rows are finite and positive", "[harness]") {
    ExperimentConfig cfg;
    cfg.grid = {2, -8, 5, 16, 32};
    cfg.space = {0.0, 0.0, 1.0, 1.0};
    cfg.family = {{"char_ball", "-1:1"}, {"gauss_bump", "1:0.3"}};
    const TheoremReport rep = verify_proposition2(cfg);
    CHECK(rep.audit_passed);
    REQUIRE(rep.rows.size() == 4);
    for (const auto& row : rep.rows) {
        CHECK_FALSE(row.skipped);
        CHECK(std::isfinite(row.ratio));
        CHECK(row.ratio > 0.0);
    }
}

TEST_CASE("riesz singularity errors mark rows but do not abort", "[harness]") {
    // beta barely above zero: the near-field budget is unreachable, every
    // row reports the failure and the run still completes.
    ExperimentConfig cfg;
    cfg.grid = {2, -4, 3, 8, 16};
    cfg.beta = "const:0.02";
    cfg.space = {0.0, 0.0, 1.0, 1.0};
    cfg.family = {{"char_ball", "0:1"}};
    const TheoremReport rep = verify_proposition2(cfg);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        CHECK(row.skipped);
        REQUIRE_FALSE(row.warnings.empty());
        CHECK(row.warnings.front().rfind("error:", 0) == 0);
    }
}

TEST_CASE("lemma reports", "[harness]") {
    ExperimentConfig cfg = small_config();
    cfg.grid = {2, -8, 8, 16, 32};
    const TheoremReport l1 = verify_lemma1(cfg, 40);
    CHECK(l1.audit_passed);
    CHECK(l1.rows.size() == 40);
    for (const auto& row : l1.rows) CHECK(row.numerator <= row.denominator * (1 + 1e-9));

    ExperimentConfig cfg2 = small_config();
    cfg2.grid = {2, -26, 8, 16, 32};
    const TheoremReport l2 = verify_lemma2(cfg2);
    CHECK(l2.audit_passed);
    CHECK(l2.rows.size() >= 4);
    for (const auto& row : l2.rows) {
        CHECK(row.ratio < 3.0);
        CHECK(row.ratio > 1.0 / 3.0);
    }
    CHECK(l2.deltas.size() == 2);
}

TEST_CASE("sweep covers the parameter grid", "[harness]") {
    ExperimentConfig cfg = small_config();
    cfg.family = {{"char_annulus", "-2:2"}};
    const SweepResult sw = sweep(cfg, {0.0, 0.3}, {0.0, 0.2}, false);
    REQUIRE(sw.cells.size() == 4);
    for (const auto& cell : sw.cells) {
        CHECK(std::isfinite(cell.sup_ratio));
        CHECK(cell.audit_passed);  // all inside alpha < lambda + n delta1
    }
    const std::string csv = sweep_to_csv(sw);
    CHECK(csv.rfind("alpha,lambda,audit_passed,sup_ratio\n", 0) == 0);
}

TEST_CASE("reports are deterministic and serializable", "[harness]") {
    const ExperimentConfig cfg = small_config();
    const TheoremReport a = verify_theorem1(cfg);
    const TheoremReport b = verify_theorem1(cfg);
    CHECK(to_json(a).dump(2) == to_json(b).dump(2));
    const std::string csv = rows_to_csv(a);
    CHECK(csv.rfind("function_id,numerator,denominator,ratio,warnings\n", 0) == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == static_cast<int>(a.rows.size()) + 1);
    const json j = to_json(a);
    CHECK(j["audit_passed"].get<bool>());
    CHECK(j["rows"].size() == a.rows.size());
}

TEST_CASE("ratios are stable under node doubling", "[harness]") {
    ExperimentConfig cfg = small_config();
    const TheoremReport coarse = verify_theorem1(cfg);
    cfg.grid.nodes_per_annulus *= 2;
    const TheoremReport fine = verify_theorem1(cfg);
    REQUIRE(coarse.rows.size() == fine.rows.size());
    for (std::size_t i = 0; i < coarse.rows.size(); ++i) {
        INFO(coarse.rows[i].function_id);
        CHECK(std::abs(coarse.rows[i].ratio - fine.rows[i].ratio) <
              1e-4 * fine.rows[i].ratio);
    }
}

TEST_CASE("violation probes are diagnostics, not failures", "[harness]") {
    // alpha far above lambda + n delta1: the audit flags it, rows still run.
    ExperimentConfig cfg = small_config();
    cfg.space.alpha = 2.0;
    const TheoremReport rep = verify_theorem1(cfg);
    CHECK_FALSE(rep.audit_passed);
    bool alpha_failed = false;
    for (const auto& a : rep.audit)
        if (a.name == "alpha_below_admissible_range") alpha_failed = !a.passed;
    CHECK(alpha_failed);
    for (const auto& row : rep.rows) CHECK(std::isfinite(row.ratio));
}

TEST_CASE("violated range flags ratio growth across the family", "[harness]") {
    ExperimentConfig cfg = small_config();
    cfg.space.lambda = 0.0;
    cfg.space.alpha = -1.8;  // far below lambda - n delta2
    cfg.family = {{"char_annulus", "-6:6"}};
    const TheoremReport rep = verify_theorem2(cfg);
    CHECK_FALSE(rep.audit_passed);
    CHECK(std::find(rep.warnings.begin(), rep.warnings.end(), "ratio-growth") !=
          rep.warnings.end());
    // Healthy run: no growth flag.
    cfg.space.alpha = 0.0;
    const TheoremReport ok = verify_theorem2(cfg);
    CHECK(ok.audit_passed);
    CHECK(std::find(ok.warnings.begin(), ok.warnings.end(), "ratio-growth") ==
          ok.warnings.end());
}

TEST_CASE("shifted exponent family runs end to end", "[harness]") {
    ExperimentConfig cfg = small_config();
    cfg.q1 = "logdecayshifted:1.2:0.3:0.1:4";
    cfg.family = {{"char_annulus", "-3:3"}};
    const TheoremReport rep = verify_theorem1(cfg);
    CHECK(rep.audit_passed);
    for (const auto& row : rep.rows) {
        CHECK_FALSE(row.skipped);
        CHECK(std::isfinite(row.ratio));
        CHECK(row.ratio > 0.0);
    }
}

TEST_CASE("csv fields with commas are quoted", "[harness]") {
    TheoremReport rep;
    ReportRow row;
    row.function_id = "combo[2*char-annulus:0,3*char-annulus:1]";
    row.numerator = 1.0;
    row.denominator = 2.0;
    row.ratio = 0.5;
    rep.rows.push_back(row);
    const std::string csv = rows_to_csv(rep);
    CHECK(csv.find("\"combo[2*char-annulus:0,3*char-annulus:1]\"") != std::string::npos);
    // Exactly 4 unquoted commas per data row.
    const std::string line = csv.substr(csv.find('\n') + 1);
    int commas = 0;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) ++commas;
    }
    CHECK(commas == 4);
}
