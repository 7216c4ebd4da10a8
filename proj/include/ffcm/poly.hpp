#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "ffcm/errors.hpp"
#include "ffcm/field.hpp"
#include "ffcm/util.hpp"

namespace ffcm {

/// Element of F_q[t]: coefficient vector, index = power of t, no trailing
/// zeros. The zero polynomial is the empty vector with degree kNegInf.
struct Poly {
    std::vector<Fe> c;

    Poly() = default;
    explicit Poly(std::vector<Fe> coeffs) : c(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly one() { return constant(1); }
    static Poly constant(Fe v) {
        Poly r;
        if (v != 0) r.c.assign(1, v);
        return r;
    }
    /// c * t^k
    static Poly monomial(Fe v, int k) {
        Poly r;
        if (v != 0) {
            r.c.assign(k + 1, 0);
            r.c[k] = v;
        }
        return r;
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return c.empty() ? kNegInf : int(c.size()) - 1; }
    Fe coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : Fe(0); }
    Fe lead() const { return c.empty() ? Fe(0) : c.back(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    bool is_one() const { return c.size() == 1 && c[0] == 1; }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
    friend bool operator!=(const Poly& a, const Poly& b) { return a.c != b.c; }
    /// Canonical order: by degree, then coefficient-lexicographic from the top.
    friend bool operator<(const Poly& a, const Poly& b) {
        if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
        return std::lexicographical_compare(a.c.rbegin(), a.c.rend(), b.c.rbegin(), b.c.rend());
    }
};

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.add(a.coeff(int(i)), b.coeff(int(i)));
    r.trim();
    return r;
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.sub(a.coeff(int(i)), b.coeff(int(i)));
    r.trim();
    return r;
}

inline Poly neg(const Field& F, const Poly& a) {
    Poly r = a;
    for (auto& v : r.c) v = F.neg(v);
    return r;
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly::zero();
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    r.trim();
    return r;
}

inline Poly scale(const Field& F, Fe s, const Poly& a) {
    Poly r = a;
    for (auto& v : r.c) v = F.mul(s, v);
    r.trim();
    return r;
}

/// Exact division with remainder: a = q*b + r, deg r < deg b. Requires b != 0.
inline std::pair<Poly, Poly> divmod(const Field& F, const Poly& a, const Poly& b) {
    if (b.is_zero()) throw domain_error("divmod: division by zero polynomial");
    Poly q, r = a;
    if (a.degree() < b.degree()) return {q, r};
    q.c.assign(a.degree() - b.degree() + 1, 0);
    Fe linv = F.inv(b.lead());
    for (int i = a.degree(); i >= b.degree(); --i) {
        Fe cr = r.coeff(i);
        if (cr == 0) continue;
        Fe f = F.mul(cr, linv);
        q.c[i - b.degree()] = f;
        for (int j = 0; j <= b.degree(); ++j) {
            int k = i - b.degree() + j;
            r.c[k] = F.sub(r.c[k], F.mul(f, b.c[j]));
        }
    }
    q.trim();
    r.trim();
    return {q, r};
}

inline Poly mod(const Field& F, const Poly& a, const Poly& b) { return divmod(F, a, b).second; }

/// Scalar-normalize to leading coefficient 1.
inline Poly make_monic(const Field& F, const Poly& a) {
    if (a.is_zero()) throw domain_error("make_monic: zero polynomial");
    return scale(F, F.inv(a.lead()), a);
}

/// Monic greatest common divisor; at least one input must be nonzero.
inline Poly gcd_monic(const Field& F, const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = mod(F, x, y);
        x = y;
        y = r;
    }
    if (x.is_zero()) throw domain_error("gcd_monic: all inputs zero");
    return make_monic(F, x);
}

inline Poly gcd_monic(const Field& F, const std::vector<Poly>& items) {
    if (items.empty()) throw domain_error("gcd_monic: empty input");
    Poly g = Poly::zero();
    for (const auto& it : items) {
        if (g.is_zero()) {
            g = it;
            continue;
        }
        if (it.is_zero()) continue;
        g = gcd_monic(F, g, it);
        if (g.is_one()) return g;
    }
    if (g.is_zero()) throw domain_error("gcd_monic: all inputs zero");
    return make_monic(F, g);
}

/// Monic least common multiple; all inputs must be nonzero.
inline Poly lcm_monic(const Field& F, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) throw domain_error("lcm_monic: zero input");
    Poly g = gcd_monic(F, a, b);
    return make_monic(F, mul(F, divmod(F, a, g).first, b));
}

inline Poly lcm_monic(const Field& F, const std::vector<Poly>& items) {
    if (items.empty()) throw domain_error("lcm_monic: empty input");
    Poly r = Poly::one();
    for (const auto& it : items) r = lcm_monic(F, r, it);
    return r;
}

/// base^e reduced mod modulus at every step (binary exponentiation).
inline Poly pow_mod(const Field& F, const Poly& base, unsigned e, const Poly& modulus) {
    Poly b = mod(F, base, modulus);
    Poly r = mod(F, Poly::one(), modulus);
    while (e) {
        if (e & 1) r = mod(F, mul(F, r, b), modulus);
        e >>= 1;
        if (e) b = mod(F, mul(F, b, b), modulus);
    }
    return r;
}

inline Poly pow(const Field& F, const Poly& base, unsigned e) {
    Poly b = base, r = Poly::one();
    while (e) {
        if (e & 1) r = mul(F, r, b);
        e >>= 1;
        if (e) b = mul(F, b, b);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Canonical enumeration. Order is coefficient-lexicographic with the constant
// coefficient least significant, i.e. by the integer code sum_i c_i q^i.
// ---------------------------------------------------------------------------

inline std::uint64_t poly_code(const Field& F, const Poly& a) {
    std::uint64_t v = 0;
    for (int i = int(a.c.size()) - 1; i >= 0; --i) v = v * F.q() + a.c[i];
    return v;
}

inline Poly poly_from_code(const Field& F, std::uint64_t code) {
    Poly r;
    while (code) {
        r.c.push_back(Fe(code % F.q()));
        code /= F.q();
    }
    return r;
}

/// All q^n polynomials of degree < n, canonical order.
inline std::vector<Poly> enumerate_degree_lt(const Field& F, int n) {
    if (n < 0) throw domain_error("enumerate_degree_lt: negative bound");
    std::uint64_t cnt = ipow((unsigned)F.q(), (unsigned)n);
    guard_count(cnt, "enumerate_degree_lt");
    std::vector<Poly> out;
    out.reserve(cnt);
    for (std::uint64_t i = 0; i < cnt; ++i) out.push_back(poly_from_code(F, i));
    return out;
}

/// Visits the q^n polynomials of degree < n in canonical order without
/// materializing the list. The visited reference is reused between calls.
inline void for_each_degree_lt(const Field& F, int n, const std::function<void(const Poly&)>& fn) {
    if (n < 0) throw domain_error("for_each_degree_lt: negative bound");
    std::uint64_t cnt = ipow((unsigned)F.q(), (unsigned)n);
    guard_count(cnt, "for_each_degree_lt");
    Poly f;
    f.c.assign(n, 0);
    std::vector<Fe>& d = f.c;
    Poly view;
    for (std::uint64_t i = 0; i < cnt; ++i) {
        view.c.assign(d.begin(), d.end());
        view.trim();
        fn(view);
        for (int j = 0; j < n; ++j) {
            if (++d[j] < F.q()) break;
            d[j] = 0;
        }
    }
}

/// All q^s monic polynomials of degree exactly s, canonical order of the tail.
inline std::vector<Poly> enumerate_monic(const Field& F, int s) {
    if (s < 0) throw domain_error("enumerate_monic: negative degree");
    std::uint64_t cnt = ipow((unsigned)F.q(), (unsigned)s);
    guard_count(cnt, "enumerate_monic");
    std::vector<Poly> out;
    out.reserve(cnt);
    for (std::uint64_t i = 0; i < cnt; ++i) {
        Poly f = poly_from_code(F, i);
        f.c.resize(s + 1, 0);
        f.c[s] = 1;
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// ASCII form "t^3+t+1"; coefficients other than 1 render as "2*t^3".
// ---------------------------------------------------------------------------

inline std::string to_string(const Poly& a) {
    if (a.is_zero()) return "0";
    std::string s;
    for (int i = a.degree(); i >= 0; --i) {
        Fe v = a.coeff(i);
        if (v == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += std::to_string(v);
        } else {
            if (v != 1) s += std::to_string(v) + "*";
            s += (i == 1) ? "t" : ("t^" + std::to_string(i));
        }
    }
    return s;
}

inline Poly poly_parse(const Field& F, const std::string& text) {
    Poly r;
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && isspace((unsigned char)text[i])) ++i; };
    bool any = false;
    skip_ws();
    while (i < text.size()) {
        int coeff = 1;
        bool saw_num = false;
        if (isdigit((unsigned char)text[i])) {
            coeff = 0;
            while (i < text.size() && isdigit((unsigned char)text[i]))
                coeff = coeff * 10 + (text[i++] - '0');
            saw_num = true;
        }
        skip_ws();
        if (i < text.size() && text[i] == '*') { ++i; skip_ws(); }
        int expn = 0;
        if (i < text.size() && text[i] == 't') {
            ++i;
            expn = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                if (i >= text.size() || !isdigit((unsigned char)text[i]))
                    throw domain_error("poly_parse: exponent expected in '" + text + "'");
                expn = 0;
                while (i < text.size() && isdigit((unsigned char)text[i]))
                    expn = expn * 10 + (text[i++] - '0');
            }
        } else if (!saw_num) {
            throw domain_error("poly_parse: unexpected character in '" + text + "'");
        }
        if (coeff >= F.q()) throw domain_error("poly_parse: coefficient out of range");
        if (coeff != 0) {
            if ((int)r.c.size() < expn + 1) r.c.resize(expn + 1, 0);
            r.c[expn] = F.add(r.c[expn], Fe(coeff));
        }
        any = true;
        skip_ws();
        if (i < text.size()) {
            if (text[i] != '+') throw domain_error("poly_parse: expected '+' in '" + text + "'");
            ++i;
            skip_ws();
        }
    }
    if (!any) throw domain_error("poly_parse: empty input");
    r.trim();
    return r;
}

// ---------------------------------------------------------------------------
// Code arithmetic for grid keys: a polynomial of degree < n is the integer
// sum_i c_i q^i < q^n; addition is digitwise in the field.
// ---------------------------------------------------------------------------

inline std::uint64_t code_add(const Field& F, std::uint64_t a, std::uint64_t b) {
    if (F.p() == 2 && F.m() == 1) return a ^ b;
    std::uint64_t r = 0, place = 1;
    const unsigned q = F.q();
    while (a || b) {
        r += std::uint64_t(F.add(Fe(a % q), Fe(b % q))) * place;
        a /= q;
        b /= q;
        place *= q;
    }
    return r;
}

inline std::uint64_t code_neg(const Field& F, std::uint64_t a) {
    if (F.p() == 2) return a;
    std::uint64_t r = 0, place = 1;
    const unsigned q = F.q();
    while (a) {
        r += std::uint64_t(F.neg(Fe(a % q))) * place;
        a /= q;
        place *= q;
    }
    return r;
}

inline std::uint64_t code_sub(const Field& F, std::uint64_t a, std::uint64_t b) {
    return code_add(F, a, code_neg(F, b));
}

}  // namespace ffcm
