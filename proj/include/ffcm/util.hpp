#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ffcm {

/// Degree / order of the zero object. Kept far from INT_MIN so that adding
/// desk-scale offsets (r*n, precision slack) can never wrap around.
inline constexpr int kNegInf = std::numeric_limits<int>::min() / 2;

inline constexpr bool is_neg_inf(int v) { return v <= kNegInf / 2; }

/// Exact rational with int64 parts, for strict threshold comparisons.
/// Only comparison and a little arithmetic are needed; values stay tiny
/// (numerators of the form n - 4 r r*^2 n, denominators 4 r*^2 or 8 r*).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;  // > 0

    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num * b.num, a.den * b.den);
    }
    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    double to_double() const { return double(num) / double(den); }
};

/// a < b by integer cross multiplication; no floating point involved.
inline bool rat_less(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
}

/// Strict comparison of an integer (or -inf sentinel) against a rational bound.
inline bool int_lt_rat(int v, const Rational& r) {
    if (is_neg_inf(v)) return true;
    return (__int128)v * r.den < (__int128)r.num;
}

/// Largest integer strictly below r.
inline std::int64_t strict_floor(const Rational& r) {
    std::int64_t q = r.num / r.den;
    std::int64_t rem = r.num % r.den;
    if (rem < 0) --q;          // floor for negatives
    if (rem == 0) return q - 1;  // exact integer: strictly below
    return q;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

}  // namespace ffcm
