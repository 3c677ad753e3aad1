// Command-line front end: exponent audits, single norms, operator
// tabulations, theorem verification runs and (alpha, lambda) sweeps.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varex/varex.hpp"

namespace {

using varex::ExperimentConfig;

struct VerifyFlags {
    std::string which;
    std::string config_path;
    bool strict = false;
    int nodes = 0;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) {
        ExperimentConfig cfg;
        varex::validate_config(cfg);
        return cfg;
    }
    return varex::parse_config_file(path);
}

void apply_overrides(ExperimentConfig& cfg, const VerifyFlags& flags) {
    if (flags.nodes > 0) cfg.grid.nodes_per_annulus = flags.nodes;
    if (!flags.out_dir.empty()) cfg.output.dir = flags.out_dir;
    if (flags.seed) cfg.sampling.seed = *flags.seed;
    if (flags.strict) cfg.tolerances.strict = true;
}

void print_summary(const varex::TheoremReport& rep) {
    std::printf("statement: %s\n", rep.statement.c_str());
    for (const auto& a : rep.audit)
        std::printf("  [%s] %s  (%s)\n", a.passed ? "pass" : "FAIL", a.name.c_str(),
                    a.detail.c_str());
    std::printf("audit: %s\n", rep.audit_passed ? "pass" : "FAIL");
    std::printf("rows: %d\n", static_cast<int>(rep.rows.size()));
    std::printf("sup_ratio: %.12g\n", rep.sup_ratio);
    if (!rep.warnings.empty()) {
        std::printf("warnings:");
        for (const auto& w : rep.warnings) std::printf(" %s", w.c_str());
        std::printf("\n");
    }
}

int run_verify(const VerifyFlags& flags) {
    ExperimentConfig cfg = load_config(flags.config_path);
    apply_overrides(cfg, flags);
    const auto start = std::chrono::steady_clock::now();
    varex::TheoremReport rep;
    if (flags.which == "thm1") rep = varex::verify_theorem1(cfg);
    else if (flags.which == "thm2") rep = varex::verify_theorem2(cfg);
    else if (flags.which == "prop2") rep = varex::verify_proposition2(cfg);
    else if (flags.which == "lemma1") rep = varex::verify_lemma1(cfg);
    else if (flags.which == "lemma2") rep = varex::verify_lemma2(cfg);
    else {
        std::fprintf(stderr, "unknown verification target '%s'\n", flags.which.c_str());
        return 1;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    const std::string path = varex::write_report_files(rep, cfg.output.dir, flags.which);
    print_summary(rep);
    std::printf("report: %s\n", path.c_str());
    std::fprintf(stderr, "elapsed: %lld ms\n", static_cast<long long>(elapsed));
    if (cfg.tolerances.strict && !rep.audit_passed) return 2;
    return 0;
}

std::vector<double> parse_list(const std::string& csv, const std::string& field) {
    std::vector<double> out;
    for (const auto& tok : varex::detail::split(csv, ','))
        out.push_back(varex::detail::parse_real(varex::detail::trim(tok), field));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "varex: variable-exponent Lebesgue/Herz-Morrey norms, fractional Hardy-type "
        "operators and a boundedness verification harness"};
    app.require_subcommand(1);

    // check-exponent
    std::string ce_q, ce_role = "lebesgue", ce_beta;
    int ce_n = 2;
    auto* ce = app.add_subcommand("check-exponent",
                                  "exponent statistics and condition audit");
    ce->add_option("--q", ce_q, "exponent descriptor")->required();
    ce->add_option("--n", ce_n, "dimension");
    ce->add_option("--role", ce_role, "lebesgue | order");
    ce->add_option("--beta", ce_beta, "audit the pair (q, beta)");

    // norm
    std::string nm_f, nm_q;
    int nm_n = 2, nm_kmin = -8, nm_kmax = 8, nm_nodes = 32;
    double nm_alpha = 0.0, nm_lambda = 0.0, nm_p = 1.0;
    bool nm_herz = false;
    auto* nm = app.add_subcommand("norm", "single norm computation");
    nm->add_option("--f", nm_f, "function descriptor")->required();
    nm->add_option("--q", nm_q, "exponent descriptor")->required();
    nm->add_option("--n", nm_n, "dimension");
    nm->add_option("--kmin", nm_kmin, "lowest annulus");
    nm->add_option("--kmax", nm_kmax, "highest annulus");
    nm->add_option("--nodes", nm_nodes, "nodes per annulus");
    nm->add_flag("--herz", nm_herz, "Herz-Morrey norm instead of Luxemburg");
    nm->add_option("--alpha", nm_alpha, "Herz weight exponent");
    nm->add_option("--lambda", nm_lambda, "Morrey exponent");
    nm->add_option("--p", nm_p, "outer exponent");

    // apply-op
    std::string op_name, op_f, op_beta = "const:0.5", op_out = "out";
    int op_n = 2, op_kmin = -8, op_kmax = 8, op_nodes = 32, op_angular = 48;
    auto* ap = app.add_subcommand("apply-op", "tabulate an operator to CSV");
    ap->add_option("--op", op_name, "hardy | hardy-star | riesz | maximal")->required();
    ap->add_option("--f", op_f, "function descriptor")->required();
    ap->add_option("--beta", op_beta, "order descriptor");
    ap->add_option("--n", op_n, "dimension");
    ap->add_option("--kmin", op_kmin, "lowest annulus");
    ap->add_option("--kmax", op_kmax, "highest annulus");
    ap->add_option("--nodes", op_nodes, "nodes per annulus");
    ap->add_option("--angular", op_angular, "angular quadrature nodes");
    ap->add_option("--out", op_out, "output directory");

    // verify
    VerifyFlags vf;
    auto* vy = app.add_subcommand("verify", "run a verification report");
    vy->add_option("which", vf.which, "thm1 | thm2 | prop2 | lemma1 | lemma2")->required();
    vy->add_option("--config", vf.config_path, "experiment config file");
    vy->add_flag("--strict", vf.strict, "exit 2 on hypothesis-audit failure");
    vy->add_option("--nodes", vf.nodes, "override nodes_per_annulus");
    vy->add_option("--out", vf.out_dir, "override output directory");
    std::uint64_t vf_seed = 0;
    auto* seed_opt = vy->add_option("--seed", vf_seed, "override sampling seed");

    // sweep
    std::string sw_config, sw_alphas = "0", sw_lambdas = "0", sw_out;
    bool sw_thm2 = false;
    int sw_nodes = 0;
    auto* sw = app.add_subcommand("sweep", "parameter grid over alpha and lambda");
    sw->add_option("--config", sw_config, "experiment config file");
    sw->add_option("--alphas", sw_alphas, "comma-separated alpha values");
    sw->add_option("--lambdas", sw_lambdas, "comma-separated lambda values");
    sw->add_flag("--thm2", sw_thm2, "sweep the dual-side operator");
    sw->add_option("--nodes", sw_nodes, "override nodes_per_annulus");
    sw->add_option("--out", sw_out, "override output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ce) {
            const varex::ExponentRole role = ce_role == "order"
                                                 ? varex::ExponentRole::FractionalOrder
                                                 : varex::ExponentRole::LebesgueExponent;
            const varex::ExponentField q = varex::parse_exponent(ce_q, role, ce_n, "--q");
            const auto samples = varex::dyadic_sample_radii(-24, 24, 64);
            const varex::ExponentStats st = varex::estimate_stats(q, samples);
            std::printf("q_minus = %.12g\n", st.q_minus);
            std::printf("q_plus = %.12g\n", st.q_plus);
            std::printf("q_infinity = %.12g\n", st.q_infinity);
            std::printf("c_infinity = %.12g\n", st.c_infinity);
            std::printf("c_local = %.12g\n", st.c_local);
            std::printf("samples = %ld\n", st.sample_count);
            if (!ce_beta.empty()) {
                const varex::ExponentField beta = varex::parse_exponent(
                    ce_beta, varex::ExponentRole::FractionalOrder, ce_n, "--beta");
                const varex::PairReport pr = varex::validate_pair(q, beta, ce_n);
                for (const auto& c : pr.checks)
                    std::printf("  [%s] %s  observed=%.12g bound=%.12g\n",
                                c.passed ? "pass" : "FAIL", c.name.c_str(), c.observed,
                                c.bound);
                std::printf("pair audit: %s\n", pr.pass ? "pass" : "FAIL");
                if (!pr.pass) return 2;
            }
            return 0;
        }
        if (*nm) {
            const varex::RadialFunction f = varex::parse_function(nm_f, "--f");
            const varex::ExponentField q = varex::parse_exponent(
                nm_q, varex::ExponentRole::LebesgueExponent, nm_n, "--q");
            const varex::DyadicGrid grid =
                varex::DyadicGrid::build(nm_n, nm_kmin, nm_kmax, nm_nodes);
            varex::NormResult res;
            if (nm_herz) {
                varex::SpaceParams sp{nm_alpha, nm_lambda, nm_p, q};
                res = varex::herz_morrey_norm(f, sp, grid);
            } else {
                res = varex::luxemburg_norm(f, q, grid);
            }
            std::printf("%.6g\n", res.value);
            const char* status = res.status == varex::NormStatus::Converged
                                     ? "converged"
                                     : (res.status == varex::NormStatus::ZeroFunction
                                            ? "zero-function"
                                            : "tail-warning");
            std::printf("status = %s, iterations = %d, bracket = [%.12g, %.12g]\n",
                        status, res.bisection_iterations, res.bracket.first,
                        res.bracket.second);
            if (res.modular_at_value)
                std::printf("modular_at_value = %.12g\n", *res.modular_at_value);
            return 0;
        }
        if (*ap) {
            const varex::RadialFunction f = varex::parse_function(op_f, "--f");
            const varex::ExponentField beta = varex::parse_exponent(
                op_beta, varex::ExponentRole::FractionalOrder, op_n, "--beta");
            const varex::DyadicGrid grid =
                varex::DyadicGrid::build(op_n, op_kmin, op_kmax, op_nodes);
            varex::SampledOperatorOutput out;
            if (op_name == "hardy") out = varex::hardy(f, beta, grid);
            else if (op_name == "hardy-star") out = varex::hardy_star(f, beta, grid);
            else if (op_name == "riesz")
                out = varex::riesz_radial(f, beta, grid, op_angular);
            else if (op_name == "maximal") {
                std::vector<double> scan;
                for (int k = op_kmin; k <= op_kmax; ++k)
                    for (int i = 0; i < 4; ++i)
                        scan.push_back(varex::dyadic(k - 1) * std::exp2((i + 1) / 4.0));
                out = varex::fractional_maximal(f, beta, grid, scan, op_angular);
            } else {
                std::fprintf(stderr, "unknown operator '%s'\n", op_name.c_str());
                return 1;
            }
            const std::string path = op_out + "/op_" + out.op + ".csv";
            varex::write_text_file(path, varex::operator_to_csv(out));
            std::printf("wrote %s (%d nodes)\n", path.c_str(),
                        static_cast<int>(out.values.size()));
            for (const auto& note : out.notes) std::printf("note: %s\n", note.c_str());
            return 0;
        }
        if (*vy) {
            if (!seed_opt->empty()) vf.seed = vf_seed;
            return run_verify(vf);
        }
        if (*sw) {
            ExperimentConfig cfg = load_config(sw_config);
            if (sw_nodes > 0) cfg.grid.nodes_per_annulus = sw_nodes;
            if (!sw_out.empty()) cfg.output.dir = sw_out;
            const varex::SweepResult res =
                varex::sweep(cfg, parse_list(sw_alphas, "--alphas"),
                             parse_list(sw_lambdas, "--lambdas"), sw_thm2);
            const std::string path = cfg.output.dir + "/sweep.csv";
            varex::write_text_file(path, varex::sweep_to_csv(res));
            varex::json sj;
            sj["tool"] = "varex";
            sj["statement"] = res.statement;
            varex::json cells = varex::json::array();
            for (const auto& c : res.cells)
                cells.push_back({{"alpha", c.alpha},
                                 {"lambda", c.lambda},
                                 {"audit_passed", c.audit_passed},
                                 {"sup_ratio", c.sup_ratio}});
            sj["cells"] = cells;
            varex::write_text_file(cfg.output.dir + "/sweep.json", sj.dump(2) + "\n");
            for (const auto& c : res.cells)
                std::printf("alpha=%.6g lambda=%.6g audit=%s sup_ratio=%.12g\n", c.alpha,
                            c.lambda, c.audit_passed ? "pass" : "FAIL", c.sup_ratio);
            std::printf("sweep: %s\n", path.c_str());
            return 0;
        }
    } catch (const varex::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const varex::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
