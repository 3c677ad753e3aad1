#pragma once

#include <cmath>

#include "varex/errors.hpp"

namespace varex {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kE = 2.718281828459045235360287471352662498;

/// Unit-ball volume v_n and unit-sphere area sigma_n = n * v_n.
struct SphereConstants {
    int n = 0;
    double v_n = 0.0;
    double sigma_n = 0.0;

    static SphereConstants make(int n) {
        if (n < 1) throw InvalidGrid("dimension must be >= 1");
        SphereConstants c;
        c.n = n;
        c.v_n = std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
        c.sigma_n = static_cast<double>(n) * c.v_n;
        return c;
    }
};

/// 2^j as an exact double.
inline double dyadic(int j) { return std::ldexp(1.0, j); }

}  // namespace varex
