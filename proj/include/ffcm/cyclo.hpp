#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ffcm/errors.hpp"

namespace ffcm {

inline std::vector<std::complex<double>> roots_of_unity(int p) {
    std::vector<std::complex<double>> r(p);
    const long double two_pi = 6.283185307179586476925286766559L;
    for (int j = 0; j < p; ++j) {
        long double a = two_pi * j / p;
        r[j] = {double(std::cos(a)), double(std::sin(a))};
    }
    r[0] = {1.0, 0.0};
    if (p == 2) r[1] = {-1.0, 0.0};
    return r;
}

/// Exact accumulator for sums of p-th roots of unity: counts[j] is the number
/// of summands equal to exp(2*pi*i*j/p). The complex value is recovered only
/// at final aggregation.
struct CycloSum {
    int p = 2;
    std::vector<std::int64_t> counts;

    CycloSum() : counts(2, 0) {}
    explicit CycloSum(int p_) : p(p_), counts(p_, 0) {}

    void add_root(int exponent) { ++counts[exponent % p]; }
    std::int64_t total() const {
        std::int64_t s = 0;
        for (auto v : counts) s += v;
        return s;
    }
    void merge(const CycloSum& other) {
        for (int j = 0; j < p; ++j) counts[j] += other.counts[j];
    }

    std::complex<double> to_complex() const {
        auto roots = roots_of_unity(p);
        std::complex<double> s = 0;
        for (int j = 0; j < p; ++j)
            if (counts[j]) s += double(counts[j]) * roots[j];
        return s;
    }
};

/// Element of Z[w], w a primitive p-th root of unity, stored as integer
/// coefficients of w^0..w^(p-1). Representations differ by multiples of
/// (1 + w + ... + w^(p-1)) = 0; equality normalizes the last slot to zero.
struct CycloInt {
    int p = 2;
    std::vector<std::int64_t> v;

    CycloInt() : v(2, 0) {}
    explicit CycloInt(int p_) : p(p_), v(p_, 0) {}
    static CycloInt from_sum(const CycloSum& s) {
        CycloInt r(s.p);
        r.v = s.counts;
        return r;
    }
    static CycloInt root(int p, int exponent) {
        CycloInt r(p);
        r.v[((exponent % p) + p) % p] = 1;
        return r;
    }

    bool is_zero() const {
        for (int j = 0; j + 1 < p; ++j)
            if (v[j] != v.back()) return false;
        return true;
    }

    CycloInt& operator+=(const CycloInt& o) {
        for (int j = 0; j < p; ++j) v[j] += o.v[j];
        return *this;
    }
    CycloInt& operator-=(const CycloInt& o) {
        for (int j = 0; j < p; ++j) v[j] -= o.v[j];
        return *this;
    }
    friend CycloInt operator+(CycloInt a, const CycloInt& b) { return a += b; }
    friend CycloInt operator-(CycloInt a, const CycloInt& b) { return a -= b; }
    friend CycloInt operator*(const CycloInt& a, const CycloInt& b) {
        CycloInt r(a.p);
        for (int i = 0; i < a.p; ++i) {
            if (!a.v[i]) continue;
            for (int j = 0; j < a.p; ++j)
                if (b.v[j]) r.v[(i + j) % a.p] += a.v[i] * b.v[j];
        }
        return r;
    }
    CycloInt& operator*=(std::int64_t s) {
        for (auto& x : v) x *= s;
        return *this;
    }
    friend CycloInt operator*(CycloInt a, std::int64_t s) { return a *= s; }

    /// Rotate by w^e, i.e. multiply by a single root.
    CycloInt rotated(int e) const {
        CycloInt r(p);
        for (int j = 0; j < p; ++j) r.v[(j + e) % p] = v[j];
        return r;
    }
    CycloInt conj() const {
        CycloInt r(p);
        for (int j = 0; j < p; ++j) r.v[(p - j) % p] = v[j];
        return r;
    }

    friend bool operator==(const CycloInt& a, const CycloInt& b) {
        for (int j = 0; j < a.p; ++j)
            if (a.v[j] - a.v.back() != b.v[j] - b.v.back()) return false;
        return true;
    }
    friend bool operator!=(const CycloInt& a, const CycloInt& b) { return !(a == b); }

    /// If the value is a rational integer, returns it; throws otherwise.
    std::int64_t as_integer() const {
        for (int j = 1; j + 1 < p; ++j)
            if (v[j] != v.back()) throw domain_error("CycloInt: value is not a rational integer");
        return v[0] - v.back();
    }

    std::complex<double> to_complex() const {
        auto roots = roots_of_unity(p);
        std::complex<double> s = 0;
        for (int j = 0; j < p; ++j)
            if (v[j]) s += double(v[j]) * roots[j];
        return s;
    }
};

}  // namespace ffcm
