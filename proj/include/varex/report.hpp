#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "varex/errors.hpp"
#include "varex/harness.hpp"

namespace varex {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline json to_json(const TheoremReport& rep) {
    json j;
    j["tool"] = "varex";
    j["statement"] = rep.statement;
    j["seed"] = rep.seed;
    j["grid"] = {{"n", rep.grid.n},
                 {"k_min", rep.grid.k_min},
                 {"k_max", rep.grid.k_max},
                 {"nodes_per_annulus", rep.grid.nodes_per_annulus},
                 {"angular_nodes", rep.grid.angular_nodes}};
    j["exponents"] = {{"q1", rep.q1_desc},
                      {"beta", rep.beta_desc},
                      {"q1_stats",
                       {{"q_minus", rep.q1_stats.q_minus},
                        {"q_plus", rep.q1_stats.q_plus},
                        {"q_infinity", rep.q1_stats.q_infinity},
                        {"c_infinity", rep.q1_stats.c_infinity},
                        {"c_local", rep.q1_stats.c_local},
                        {"sample_count", rep.q1_stats.sample_count}}}};
    j["space"] = {{"alpha", rep.space.alpha},
                  {"lambda", rep.space.lambda},
                  {"p1", rep.space.p1},
                  {"p2", rep.space.p2}};
    json deltas = json::array();
    for (const auto& [name, d] : rep.deltas)
        deltas.push_back({{"which", name},
                          {"delta", d.delta},
                          {"residual", d.residual},
                          {"ball_count", d.ball_count},
                          {"clamp_upper", d.clamp_upper}});
    j["deltas"] = deltas;
    json audit = json::array();
    for (const auto& a : rep.audit)
        audit.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    j["audit"] = audit;
    j["audit_passed"] = rep.audit_passed;
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"function_id", r.function_id},
                        {"numerator", r.numerator},
                        {"denominator", r.denominator},
                        {"ratio", r.ratio},
                        {"skipped", r.skipped},
                        {"warnings", r.warnings}});
    j["rows"] = rows;
    j["sup_ratio"] = rep.sup_ratio;
    j["warnings"] = rep.warnings;
    return j;
}

inline std::string rows_to_csv(const TheoremReport& rep) {
    std::string out = "function_id,numerator,denominator,ratio,warnings\n";
    for (const auto& r : rep.rows) {
        out += detail::csv_field(r.function_id) + "," + detail::csv_num(r.numerator) +
               "," + detail::csv_num(r.denominator) + "," + detail::csv_num(r.ratio) +
               "," + detail::csv_field(detail::join(r.warnings, ';')) + "\n";
    }
    return out;
}

inline std::string sweep_to_csv(const SweepResult& sw) {
    std::string out = "alpha,lambda,audit_passed,sup_ratio\n";
    for (const auto& c : sw.cells) {
        out += detail::csv_num(c.alpha) + "," + detail::csv_num(c.lambda) + "," +
               (c.audit_passed ? "true" : "false") + "," + detail::csv_num(c.sup_ratio) +
               "\n";
    }
    return out;
}

inline std::string operator_to_csv(const SampledOperatorOutput& out) {
    std::string csv = "radius,value\n";
    for (std::size_t i = 0; i < out.values.size(); ++i)
        csv += detail::csv_num(out.radii[i]) + "," + detail::csv_num(out.values[i]) + "\n";
    return csv;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

/// Writes <dir>/report_<name>.json and <dir>/rows_<name>.csv; returns the
/// JSON path.
inline std::string write_report_files(const TheoremReport& rep, const std::string& dir,
                                      const std::string& name) {
    const std::string json_path = dir + "/report_" + name + ".json";
    write_text_file(json_path, to_json(rep).dump(2) + "\n");
    write_text_file(dir + "/rows_" + name + ".csv", rows_to_csv(rep));
    return json_path;
}

}  // namespace varex
