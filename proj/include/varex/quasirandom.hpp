#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace varex {

/// Additive-recurrence (Kronecker) low-discrepancy sequence. Fully
/// deterministic for a given seed; the seed shifts the starting point.
class QuasiRandom {
public:
    explicit QuasiRandom(std::uint64_t seed = 0) {
        const double s = static_cast<double>(seed % 100003u);
        state1_ = frac(0.5 + s * kAlpha1);
        state2_ = frac(0.25 + s * kAlpha2);
    }

    /// Next value in [0, 1).
    double next() {
        state1_ = frac(state1_ + kAlpha1);
        return state1_;
    }

    /// Next 2-D point in [0, 1)^2 (plastic-constant pair).
    std::pair<double, double> next_pair() {
        state1_ = frac(state1_ + kAlpha1);
        state2_ = frac(state2_ + kAlpha2);
        return {state1_, state2_};
    }

    /// Uniform draw from [a, b).
    double uniform(double a, double b) { return a + (b - a) * next(); }

    /// Integer draw from {lo, ..., hi}.
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int k = lo + static_cast<int>(next() * span);
        return k > hi ? hi : k;
    }

private:
    static constexpr double kAlpha1 = 0.7548776662466927;  // 1/plastic
    static constexpr double kAlpha2 = 0.5698402909980532;  // 1/plastic^2

    static double frac(double x) { return x - std::floor(x); }

    double state1_ = 0.0;
    double state2_ = 0.0;
};

}  // namespace varex
