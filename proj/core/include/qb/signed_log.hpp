#pragma once

#include <cmath>
#include <limits>

namespace qb {

// Signed log-magnitude scalar: value = sign * exp(log_mag). Partition-function
// products over ~1000 modes at beta ~ 20 overflow double; sums and products of
// these quantities are done in this representation and only final ratios are
// exponentiated. sign == 0 represents exact zero (log_mag is then -inf).
struct SignedLog {
    double log_mag = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLog zero() { return {}; }
    static SignedLog one() { return {0.0, 1}; }

    static SignedLog from_value(double v) {
        if (v == 0.0) return zero();
        return {std::log(std::abs(v)), v > 0 ? 1 : -1};
    }
    // value = s * exp(lm); s may carry any magnitude, only its sign is used.
    static SignedLog from_log(double lm, double s = 1.0) {
        if (s == 0.0) return zero();
        return {lm, s > 0 ? 1 : -1};
    }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }
    bool is_zero() const { return sign == 0; }

    friend SignedLog operator*(SignedLog a, SignedLog b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.log_mag + b.log_mag, a.sign * b.sign};
    }
    SignedLog& operator*=(SignedLog o) { return *this = *this * o; }

    friend SignedLog operator/(SignedLog a, SignedLog b) {
        if (a.sign == 0) return zero();
        return {a.log_mag - b.log_mag, a.sign * b.sign};
    }

    friend SignedLog operator-(SignedLog a) {
        a.sign = -a.sign;
        return a;
    }

    friend SignedLog operator+(SignedLog a, SignedLog b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        if (a.log_mag < b.log_mag) std::swap(a, b);
        // |a| >= |b|: a + b = sign_a * exp(la) * (1 + sa*sb*exp(lb-la))
        const double r = a.sign * b.sign * std::exp(b.log_mag - a.log_mag);
        const double f = 1.0 + r;
        if (f == 0.0) return zero();
        return {a.log_mag + std::log(std::abs(f)), f > 0 ? a.sign : -a.sign};
    }
    SignedLog& operator+=(SignedLog o) { return *this = *this + o; }

    friend SignedLog operator-(SignedLog a, SignedLog b) {
        b.sign = -b.sign;
        return a + b;
    }
};

}  // namespace qb
