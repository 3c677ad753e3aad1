#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varex/errors.hpp"
#include "varex/exponent_field.hpp"
#include "varex/radial_function.hpp"

namespace varex {

struct GridConfig {
    int n = 2;
    int k_min = -16;
    int k_max = 16;
    int nodes_per_annulus = 32;
    int angular_nodes = 48;
};

struct SpaceConfig {
    double alpha = 0.0;
    double lambda = 0.0;
    double p1 = 1.0;
    double p2 = 1.0;
};

struct ToleranceConfig {
    double herz_tail_rel = 1e-6;
    double shell_budget = 0.10;
    bool strict = false;
};

struct OutputConfig {
    std::string dir = "out";
};

struct SamplingConfig {
    std::uint64_t seed = 0;
    int lower_bound_samples = 8;
};

/// One declared experiment: grid, exponent pair, space parameters and the
/// test-function family.
struct ExperimentConfig {
    GridConfig grid;
    std::string q1 = "logdecay:1.2:0.3";
    std::string beta = "const:0.5";
    SpaceConfig space;
    std::vector<std::pair<std::string, std::string>> family;  // (kind, args)
    ToleranceConfig tolerances;
    OutputConfig output;
    SamplingConfig sampling;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_real(const std::string& value, const std::string& field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "': expected a number, got '" + value + "'");
    }
}

inline int parse_int(const std::string& value, const std::string& field) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "': expected an integer, got '" + value +
                          "'");
    }
}

inline bool parse_bool(const std::string& value, const std::string& field) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("field '" + field + "': expected true/false, got '" + value + "'");
}

}  // namespace detail

/// Exponent descriptors: const:<v>, logdecay:<base>:<amplitude>,
/// logdecayshifted:<base>:<amplitude>:<bump>:<radius>.
inline ExponentField parse_exponent(const std::string& desc, ExponentRole role, int n,
                                    const std::string& field = "exponent") {
    const auto parts = detail::split(detail::trim(desc), ':');
    const std::string& kind = parts[0];
    auto arg = [&](std::size_t i) {
        if (i >= parts.size())
            throw ConfigError("field '" + field + "': descriptor '" + desc +
                              "' is missing arguments");
        return detail::parse_real(parts[i], field);
    };
    if (kind == "const") {
        if (parts.size() != 2)
            throw ConfigError("field '" + field + "': const takes one argument");
        return ExponentField::constant(arg(1), role, n);
    }
    if (kind == "logdecay") {
        if (parts.size() != 3)
            throw ConfigError("field '" + field + "': logdecay takes two arguments");
        return ExponentField::log_decay(arg(1), arg(2), role, n);
    }
    if (kind == "logdecayshifted") {
        if (parts.size() != 5)
            throw ConfigError("field '" + field + "': logdecayshifted takes four arguments");
        return ExponentField::log_decay_shifted(arg(1), arg(2), arg(3), arg(4), role, n);
    }
    throw ConfigError("field '" + field + "': unknown exponent form '" + kind + "'");
}

/// Function descriptors: char-annulus:<j>, char-ball:<k>,
/// power:<a>:<j_lo>:<j_hi>, gauss-bump:<rho>:<w>.
inline RadialFunction parse_function(const std::string& desc,
                                     const std::string& field = "function") {
    const auto parts = detail::split(detail::trim(desc), ':');
    const std::string& kind = parts[0];
    auto want = [&](std::size_t count) {
        if (parts.size() != count + 1)
            throw ConfigError("field '" + field + "': descriptor '" + desc +
                              "' has wrong arity");
    };
    if (kind == "char-annulus") {
        want(1);
        return RadialFunction::char_annulus(detail::parse_int(parts[1], field));
    }
    if (kind == "char-ball") {
        want(1);
        return RadialFunction::char_ball(detail::parse_int(parts[1], field));
    }
    if (kind == "power") {
        want(3);
        return RadialFunction::power(detail::parse_real(parts[1], field),
                                     detail::parse_int(parts[2], field),
                                     detail::parse_int(parts[3], field));
    }
    if (kind == "gauss-bump") {
        want(2);
        return RadialFunction::gauss_bump(detail::parse_real(parts[1], field),
                                          detail::parse_real(parts[2], field));
    }
    if (kind == "zero") return RadialFunction::zero();
    throw ConfigError("field '" + field + "': unknown function form '" + kind + "'");
}

/// Expands the [family] section into named test functions.
inline std::vector<std::pair<std::string, RadialFunction>> build_family(
    const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, RadialFunction>> out;
    for (const auto& [kind, args] : cfg.family) {
        const std::string field = "family." + kind;
        if (kind == "char_annulus" || kind == "char_ball") {
            const auto range = detail::split(args, ':');
            if (range.size() != 2)
                throw ConfigError("field '" + field + "': expected <lo>:<hi>");
            const int lo = detail::parse_int(range[0], field);
            const int hi = detail::parse_int(range[1], field);
            if (lo > hi) throw ConfigError("field '" + field + "': lo > hi");
            for (int j = lo; j <= hi; ++j) {
                if (kind == "char_annulus")
                    out.emplace_back("char-annulus:" + std::to_string(j),
                                     RadialFunction::char_annulus(j));
                else
                    out.emplace_back("char-ball:" + std::to_string(j),
                                     RadialFunction::char_ball(j));
            }
        } else if (kind == "power") {
            RadialFunction f = parse_function("power:" + args, field);
            out.emplace_back(f.describe(), std::move(f));
        } else if (kind == "gauss_bump") {
            RadialFunction f = parse_function("gauss-bump:" + args, field);
            out.emplace_back(f.describe(), std::move(f));
        } else {
            throw ConfigError("field '" + field + "': unknown family kind");
        }
    }
    if (out.empty()) throw ConfigError("field 'family': at least one entry required");
    return out;
}

inline void validate_config(ExperimentConfig& cfg);

inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.family.clear();
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string field = section + "." + key;

        if (section == "grid") {
            if (key == "n") cfg.grid.n = detail::parse_int(value, field);
            else if (key == "k_min") cfg.grid.k_min = detail::parse_int(value, field);
            else if (key == "k_max") cfg.grid.k_max = detail::parse_int(value, field);
            else if (key == "nodes_per_annulus")
                cfg.grid.nodes_per_annulus = detail::parse_int(value, field);
            else if (key == "angular_nodes")
                cfg.grid.angular_nodes = detail::parse_int(value, field);
            else throw ConfigError("unknown field '" + field + "'");
        } else if (section == "exponents") {
            if (key == "q1") cfg.q1 = value;
            else if (key == "beta") cfg.beta = value;
            else throw ConfigError("unknown field '" + field + "'");
        } else if (section == "space") {
            if (key == "alpha") cfg.space.alpha = detail::parse_real(value, field);
            else if (key == "lambda") cfg.space.lambda = detail::parse_real(value, field);
            else if (key == "p1") cfg.space.p1 = detail::parse_real(value, field);
            else if (key == "p2") cfg.space.p2 = detail::parse_real(value, field);
            else throw ConfigError("unknown field '" + field + "'");
        } else if (section == "family") {
            cfg.family.emplace_back(key, value);
        } else if (section == "tolerances") {
            if (key == "herz_tail_rel")
                cfg.tolerances.herz_tail_rel = detail::parse_real(value, field);
            else if (key == "shell_budget")
                cfg.tolerances.shell_budget = detail::parse_real(value, field);
            else if (key == "strict") cfg.tolerances.strict = detail::parse_bool(value, field);
            else throw ConfigError("unknown field '" + field + "'");
        } else if (section == "output") {
            if (key == "dir") cfg.output.dir = value;
            else throw ConfigError("unknown field '" + field + "'");
        } else if (section == "sampling") {
            if (key == "seed")
                cfg.sampling.seed = static_cast<std::uint64_t>(
                    detail::parse_int(value, field));
            else if (key == "lower_bound_samples")
                cfg.sampling.lower_bound_samples = detail::parse_int(value, field);
            else throw ConfigError("unknown field '" + field + "'");
        } else {
            throw ConfigError("unknown section '[" + section + "]'");
        }
    }
    validate_config(cfg);
    return cfg;
}

inline void validate_config(ExperimentConfig& cfg) {
    if (cfg.grid.n < 1) throw ConfigError("field 'grid.n': must be >= 1");
    if (cfg.grid.k_min >= cfg.grid.k_max)
        throw ConfigError("field 'grid.k_min': must be < grid.k_max");
    if (cfg.grid.nodes_per_annulus < 4)
        throw ConfigError("field 'grid.nodes_per_annulus': must be >= 4");
    if (cfg.grid.angular_nodes < 8)
        throw ConfigError("field 'grid.angular_nodes': must be >= 8");
    if (!(cfg.space.p1 > 0.0) || !(cfg.space.p2 > 0.0))
        throw ConfigError("field 'space.p1': exponents p must be positive");
    if (cfg.space.p1 > cfg.space.p2)
        throw ConfigError("field 'space.p1': must be <= space.p2");
    if (cfg.space.lambda < 0.0)
        throw ConfigError("field 'space.lambda': must be >= 0");
    if (cfg.family.empty()) cfg.family.emplace_back("char_annulus", "-8:8");
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace varex
