#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "varex/constants.hpp"

namespace varex {

/// Radial test functions: indicators of dyadic balls/annuli, truncated power
/// laws, Gaussian bumps and finite linear combinations. Evaluation depends on
/// |x| only. Indicator conventions match B_k = {|x| <= 2^k},
/// A_j = (2^{j-1}, 2^j].
class RadialFunction {
public:
    RadialFunction() : form_(Zero{}) {}

    static RadialFunction zero() { return RadialFunction(Zero{}); }

    static RadialFunction char_annulus(int j) { return RadialFunction(CharAnnulus{j}); }

    static RadialFunction char_ball(int k) { return RadialFunction(CharBall{k}); }

    /// r^a restricted to the annulus range (2^{j_lo-1}, 2^{j_hi}].
    static RadialFunction power(double a, int j_lo, int j_hi) {
        return RadialFunction(PowerLaw{a, j_lo, j_hi});
    }

    static RadialFunction gauss_bump(double center, double width) {
        return RadialFunction(GaussBump{center, width});
    }

    static RadialFunction combination(std::vector<std::pair<double, RadialFunction>> parts) {
        Combination c;
        for (auto& [coef, f] : parts) {
            if (coef == 0.0 || f.is_zero()) continue;
            c.parts.emplace_back(coef, std::make_shared<const RadialFunction>(std::move(f)));
        }
        if (c.parts.empty()) return zero();
        return RadialFunction(std::move(c));
    }

    RadialFunction scaled(double c) const {
        if (c == 0.0 || is_zero()) return zero();
        if (c == 1.0) return *this;
        Combination comb;
        comb.parts.emplace_back(c, std::make_shared<const RadialFunction>(*this));
        return RadialFunction(std::move(comb));
    }

    double operator()(double r) const {
        return std::visit(
            [r](const auto& f) -> double { return eval(f, r); }, form_);
    }

    /// f * chi_j: equals f on A_j and 0 elsewhere.
    RadialFunction restrict_to_annulus(int j) const {
        if (const auto* a = std::get_if<CharAnnulus>(&form_))
            return a->j == j ? *this : zero();
        if (const auto* b = std::get_if<CharBall>(&form_))
            return j <= b->k ? char_annulus(j) : zero();
        if (const auto* p = std::get_if<PowerLaw>(&form_))
            return (j >= p->j_lo && j <= p->j_hi) ? power(p->exponent, j, j) : zero();
        if (const auto* rset = std::get_if<Restricted>(&form_))
            return rset->j == j ? *this : zero();
        if (const auto* c = std::get_if<Combination>(&form_)) {
            std::vector<std::pair<double, RadialFunction>> parts;
            for (const auto& [coef, f] : c->parts) {
                RadialFunction g = f->restrict_to_annulus(j);
                if (!g.is_zero()) parts.emplace_back(coef, std::move(g));
            }
            return combination(std::move(parts));
        }
        if (std::holds_alternative<Zero>(form_)) return zero();
        Restricted res{std::make_shared<const RadialFunction>(*this), j};
        return RadialFunction(std::move(res));
    }

    bool is_zero() const { return std::holds_alternative<Zero>(form_); }

    /// Radii where the function is discontinuous, kinked, or (for smooth
    /// bumps) localized; quadratures split their domains here. Sorted,
    /// positive.
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        collect_breakpoints(out);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        while (!out.empty() && out.front() <= 0.0) out.erase(out.begin());
        return out;
    }

    /// Support bounds; outer is 0 for the zero function, inner is +inf.
    double support_outer() const {
        return std::visit([](const auto& f) { return outer(f); }, form_);
    }

    double support_inner() const {
        return std::visit([](const auto& f) { return inner(f); }, form_);
    }

    std::string describe() const {
        return std::visit([](const auto& f) { return name(f); }, form_);
    }

private:
    struct Zero {};
    struct CharAnnulus { int j; };
    struct CharBall { int k; };
    struct PowerLaw { double exponent; int j_lo; int j_hi; };
    struct GaussBump { double center; double width; };
    struct Restricted { std::shared_ptr<const RadialFunction> inner; int j; };
    struct Combination {
        std::vector<std::pair<double, std::shared_ptr<const RadialFunction>>> parts;
    };
    using Form = std::variant<Zero, CharAnnulus, CharBall, PowerLaw, GaussBump,
                              Restricted, Combination>;

    explicit RadialFunction(Form f) : form_(std::move(f)) {}

    // Gaussian support cutoff: exp(-t^2) underflows past |t| ~ 27.3.
    static constexpr double kBumpCut = 27.5;

    static double eval(const Zero&, double) { return 0.0; }
    static double eval(const CharAnnulus& f, double r) {
        return (r > dyadic(f.j - 1) && r <= dyadic(f.j)) ? 1.0 : 0.0;
    }
    static double eval(const CharBall& f, double r) { return r <= dyadic(f.k) ? 1.0 : 0.0; }
    static double eval(const PowerLaw& f, double r) {
        if (r <= dyadic(f.j_lo - 1) || r > dyadic(f.j_hi)) return 0.0;
        return std::pow(r, f.exponent);
    }
    static double eval(const GaussBump& f, double r) {
        const double t = (r - f.center) / f.width;
        return std::exp(-t * t);
    }
    static double eval(const Restricted& f, double r) {
        return (r > dyadic(f.j - 1) && r <= dyadic(f.j)) ? (*f.inner)(r) : 0.0;
    }
    static double eval(const Combination& f, double r) {
        double s = 0.0;
        for (const auto& [coef, g] : f.parts) s += coef * (*g)(r);
        return s;
    }

    static double outer(const Zero&) { return 0.0; }
    static double outer(const CharAnnulus& f) { return dyadic(f.j); }
    static double outer(const CharBall& f) { return dyadic(f.k); }
    static double outer(const PowerLaw& f) { return dyadic(f.j_hi); }
    static double outer(const GaussBump& f) { return f.center + kBumpCut * f.width; }
    static double outer(const Restricted& f) {
        return std::min(dyadic(f.j), f.inner->support_outer());
    }
    static double outer(const Combination& f) {
        double m = 0.0;
        for (const auto& [coef, g] : f.parts) m = std::max(m, g->support_outer());
        return m;
    }

    static double inner(const Zero&) { return std::numeric_limits<double>::infinity(); }
    static double inner(const CharAnnulus& f) { return dyadic(f.j - 1); }
    static double inner(const CharBall&) { return 0.0; }
    static double inner(const PowerLaw& f) { return dyadic(f.j_lo - 1); }
    static double inner(const GaussBump& f) {
        return std::max(0.0, f.center - kBumpCut * f.width);
    }
    static double inner(const Restricted& f) {
        return std::max(dyadic(f.j - 1), f.inner->support_inner());
    }
    static double inner(const Combination& f) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& [coef, g] : f.parts) m = std::min(m, g->support_inner());
        return m;
    }

    void collect_breakpoints(std::vector<double>& out) const {
        if (const auto* a = std::get_if<CharAnnulus>(&form_)) {
            out.push_back(dyadic(a->j - 1));
            out.push_back(dyadic(a->j));
        } else if (const auto* b = std::get_if<CharBall>(&form_)) {
            out.push_back(dyadic(b->k));
        } else if (const auto* p = std::get_if<PowerLaw>(&form_)) {
            out.push_back(dyadic(p->j_lo - 1));
            out.push_back(dyadic(p->j_hi));
        } else if (const auto* gb = std::get_if<GaussBump>(&form_)) {
            // Smooth, but the quadratures split at these feature scales so a
            // narrow bump cannot hide between nodes.
            out.push_back(gb->center);
            for (double k : {1.0, 2.0, 4.0, 8.0, 16.0}) {
                out.push_back(gb->center - k * gb->width);
                out.push_back(gb->center + k * gb->width);
            }
        } else if (const auto* rset = std::get_if<Restricted>(&form_)) {
            out.push_back(dyadic(rset->j - 1));
            out.push_back(dyadic(rset->j));
            rset->inner->collect_breakpoints(out);
        } else if (const auto* c = std::get_if<Combination>(&form_)) {
            for (const auto& [coef, g] : c->parts) g->collect_breakpoints(out);
        }
    }

    static std::string num(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return buf;
    }

    static std::string name(const Zero&) { return "zero"; }
    static std::string name(const CharAnnulus& f) {
        return "char-annulus:" + std::to_string(f.j);
    }
    static std::string name(const CharBall& f) { return "char-ball:" + std::to_string(f.k); }
    static std::string name(const PowerLaw& f) {
        return "power:" + num(f.exponent) + ":" + std::to_string(f.j_lo) + ":" +
               std::to_string(f.j_hi);
    }
    static std::string name(const GaussBump& f) {
        return "gauss-bump:" + num(f.center) + ":" + num(f.width);
    }
    static std::string name(const Restricted& f) {
        return f.inner->describe() + "*chi:" + std::to_string(f.j);
    }
    static std::string name(const Combination& f) {
        std::string s = "combo[";
        bool first = true;
        for (const auto& [coef, g] : f.parts) {
            if (!first) s += ",";
            first = false;
            s += num(coef) + "*" + g->describe();
        }
        return s + "]";
    }

    Form form_;
};

inline double evaluate_fn(const RadialFunction& f, double r) { return f(r); }

inline RadialFunction restrict_to_annulus(const RadialFunction& f, int j) {
    return f.restrict_to_annulus(j);
}

}  // namespace varex
