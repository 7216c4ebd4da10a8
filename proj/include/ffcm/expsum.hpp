#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffcm/cyclo.hpp"
#include "ffcm/errors.hpp"
#include "ffcm/poly.hpp"
#include "ffcm/tail_series.hpp"
#include "ffcm/util.hpp"

namespace ffcm {

/// The exponent set K = {r_1 < ... < r_k} with its derived parameters.
struct ExponentSystem {
    std::vector<int> K;
    int r_star = 1;
    Rational rho;                     // 1/(8 r*), exact
    double delta0 = 0.05;             // decay-report label, configurable
    std::vector<bool> coprime_to_p;   // (r_i, p) = 1 per exponent

    int k() const { return (int)K.size(); }
    bool all_coprime() const {
        for (bool b : coprime_to_p)
            if (!b) return false;
        return true;
    }
};

inline ExponentSystem make_exponent_system(std::vector<int> K, int p, double delta0 = 0.05) {
    if (K.empty()) throw domain_error("ExponentSystem: empty exponent set");
    for (size_t i = 0; i < K.size(); ++i) {
        if (K[i] < 1) throw domain_error("ExponentSystem: exponents must be >= 1");
        if (i && K[i] <= K[i - 1]) throw domain_error("ExponentSystem: exponents must be strictly increasing");
    }
    ExponentSystem sys;
    sys.K = std::move(K);
    sys.r_star = sys.K.back();
    sys.rho = Rational(1, 8 * std::int64_t(sys.r_star));
    sys.delta0 = delta0;
    for (int r : sys.K) sys.coprime_to_p.push_back(r % p != 0);
    return sys;
}

/// One torus coordinate of a frequency vector: either an exact rational a/h
/// (h monic; reduction not required for evaluation) or a truncated series.
struct Frequency {
    bool rational = true;
    Poly num;
    Poly den = Poly::one();
    TailSeries tail;

    static Frequency zero() { return Frequency{}; }
    static Frequency from_rational(const Field& F, Poly a, Poly h) {
        if (h.is_zero()) throw domain_error("Frequency: zero denominator");
        if (!h.is_monic()) {
            Fe inv = F.inv(h.lead());
            a = scale(F, inv, a);
            h = scale(F, inv, h);
        }
        Frequency f;
        f.num = mod(F, a, h);
        f.den = std::move(h);
        return f;
    }
    static Frequency from_tail(TailSeries t) {
        Frequency f;
        f.rational = false;
        f.tail = std::move(t);
        return f;
    }

    /// ord of the fractional part; for a rational a/h this is exact, for a
    /// tail it is exact unless zero to precision (then kNegInf, annotated by
    /// the precision the caller holds).
    int ord(const Field& F) const {
        if (rational) {
            Poly r = mod(F, num, den);
            if (r.is_zero()) return kNegInf;
            return r.degree() - den.degree();
        }
        return ord_of(tail);
    }
};

using FrequencyVec = std::vector<Frequency>;

// ---------------------------------------------------------------------------
// Character evaluation per summand.
//
// For rational coordinates, res(g/h) with deg g < deg h = d and h monic is
// the coefficient of t^(d-1) in g, so e((a f^r)/h) needs only divmod
// arithmetic. For tail coordinates, res(alpha f^r) is the dot product of the
// coefficients of f^r with the stored tail slots, which requires precision
// >= r(n-1) + 1.
// ---------------------------------------------------------------------------

namespace detail {

struct CoordEval {
    bool rational;
    Poly num, den;
    int den_deg = 0;
    std::vector<Fe> tail_coeffs;  // tail_coeffs[j] = coeff of t^(-1-j)

    int residue_trace(const Field& F, const Poly& f_pow) const {
        if (rational) {
            if (den_deg == 0) return 0;
            Poly g = mod(F, mul(F, num, f_pow), den);
            return F.trace(g.coeff(den_deg - 1));
        }
        Fe acc = 0;
        for (size_t j = 0; j < f_pow.c.size(); ++j) {
            if (f_pow.c[j]) acc = F.add(acc, F.mul(f_pow.c[j], tail_coeffs[j]));
        }
        return F.trace(acc);
    }
};

inline std::vector<CoordEval> prepare_coords(const Field& F, const FrequencyVec& freqs,
                                             const ExponentSystem& sys, int n) {
    if ((int)freqs.size() != sys.k())
        throw domain_error("weyl_sum: frequency arity does not match exponent set");
    std::vector<CoordEval> evals;
    for (int i = 0; i < sys.k(); ++i) {
        CoordEval ev;
        ev.rational = freqs[i].rational;
        if (ev.rational) {
            ev.num = freqs[i].num;
            ev.den = freqs[i].den;
            ev.den_deg = freqs[i].den.degree();
        } else {
            const int need = (n >= 1) ? sys.K[i] * (n - 1) + 1 : 1;
            if (freqs[i].tail.precision < need)
                throw precision_error("weyl_sum: coordinate " + std::to_string(i) +
                                      " needs precision >= " + std::to_string(need));
            ev.tail_coeffs.assign(freqs[i].tail.c.begin(), freqs[i].tail.c.end());
            ev.tail_coeffs.resize(size_t(sys.K[i]) * std::max(n - 1, 0) + 1, 0);
        }
        evals.push_back(std::move(ev));
    }
    return evals;
}

// --- carry-less (characteristic 2, prime field) fast path ------------------

using u128 = unsigned __int128;

inline int top_bit(u128 x) {
    std::uint64_t hi = std::uint64_t(x >> 64);
    if (hi) return 127 - __builtin_clzll(hi) - 63;  // 64 + (63 - clz)
    std::uint64_t lo = std::uint64_t(x);
    return lo ? 63 - __builtin_clzll(lo) : -1;
}

inline u128 clmul(u128 a, std::uint64_t b) {
    u128 r = 0;
    while (b) {
        int j = __builtin_ctzll(b);
        r ^= a << j;
        b &= b - 1;
    }
    return r;
}

inline u128 clmod(u128 x, u128 h, int deg_h) {
    int d = top_bit(x);
    while (d >= deg_h) {
        x ^= h << (d - deg_h);
        d = top_bit(x);
    }
    return x;
}

inline u128 clmul128(u128 a, u128 b) {
    u128 r = clmul(a, std::uint64_t(b));
    std::uint64_t hi = std::uint64_t(b >> 64);
    if (hi) r ^= clmul(a, hi) << 64;
    return r;
}

/// f^e as a carry-less (F_2[t]) product; caller guarantees the degree fits.
inline u128 clpow(std::uint64_t f, int e) {
    u128 r = 1, base = f;
    while (e) {
        if (e & 1) r = clmul128(base, r);
        e >>= 1;
        if (e) base = clmul128(base, base);
    }
    return r;
}

inline int parity128(u128 x) {
    return (__builtin_popcountll(std::uint64_t(x)) + __builtin_popcountll(std::uint64_t(x >> 64))) & 1;
}

struct CoordEvalBits {
    bool rational;
    u128 den = 0;
    int den_deg = 0;
    std::uint64_t num = 0;
    u128 tail_mask = 0;  // bit j = tail coeff of t^(-1-j)

    int residue_bit(u128 f_pow) const {
        if (rational) {
            if (den_deg == 0) return 0;
            u128 g = clmod(f_pow, den, den_deg);
            g = clmod(clmul(g, num), den, den_deg);
            return int((g >> (den_deg - 1)) & 1);
        }
        return parity128(f_pow & tail_mask);
    }
};

}  // namespace detail

/// Generic-path Weyl sum over any F_q, one residue trace per coordinate and
/// summand; used directly in tests to cross-check the packed path.
inline CycloSum weyl_sum_generic(const Field& F, const FrequencyVec& freqs,
                                 const ExponentSystem& sys, int n) {
    if (n < 0) throw domain_error("weyl_sum: n must be >= 0");
    const std::uint64_t total = ipow((unsigned)F.q(), (unsigned)n);
    guard_count(total, "weyl_sum");
    CycloSum out(F.p());
    auto evals = detail::prepare_coords(F, freqs, sys, n);
    for_each_degree_lt(F, n, [&](const Poly& f) {
        int expo = 0;
        for (int i = 0; i < sys.k(); ++i) {
            const Poly fr = evals[i].rational ? pow_mod(F, f, (unsigned)sys.K[i], evals[i].den)
                                              : pow(F, f, (unsigned)sys.K[i]);
            expo = (expo + evals[i].residue_trace(F, fr)) % F.p();
        }
        out.add_root(expo);
    });
    return out;
}

/// Exact Weyl sum: sum over deg f < n of e(alpha_1 f^(r_1) + ... ), returned
/// as root-of-unity counts. Total count is q^n.
inline CycloSum weyl_sum(const Field& F, const FrequencyVec& freqs, const ExponentSystem& sys,
                         int n) {
    if (n < 0) throw domain_error("weyl_sum: n must be >= 0");
    const std::uint64_t total = ipow((unsigned)F.q(), (unsigned)n);
    guard_count(total, "weyl_sum");
    CycloSum out(F.p());

    // Packed fast path for F_2: polynomials are bit masks, multiplication is
    // carry-less, and each residue is a single parity or shift.
    const int max_pow_deg = sys.r_star * std::max(n - 1, 0);
    if (F.p() == 2 && F.m() == 1 && max_pow_deg < 120) {
        std::vector<detail::CoordEvalBits> evals;
        bool ok = true;
        for (int i = 0; i < sys.k(); ++i) {
            detail::CoordEvalBits ev;
            ev.rational = freqs[i].rational;
            if (ev.rational) {
                if (freqs[i].den.degree() >= 64 || freqs[i].num.degree() >= 64) { ok = false; break; }
                ev.den_deg = freqs[i].den.degree();
                ev.den = poly_code(F, freqs[i].den);
                ev.num = poly_code(F, freqs[i].num);
            } else {
                const int need = (n >= 1) ? sys.K[i] * (n - 1) + 1 : 1;
                if (freqs[i].tail.precision < need)
                    throw precision_error("weyl_sum: coordinate " + std::to_string(i) +
                                          " needs precision >= " + std::to_string(need));
                if (need > 120) { ok = false; break; }
                detail::u128 mask = 0;
                for (int j = 0; j < std::min(freqs[i].tail.precision, 120); ++j)
                    if (freqs[i].tail.c[j]) mask |= detail::u128(1) << j;
                ev.tail_mask = mask;
            }
            evals.push_back(ev);
        }
        if (ok) {
            for (std::uint64_t f = 0; f < total; ++f) {
                int expo = 0;
                for (int i = 0; i < sys.k(); ++i)
                    expo ^= evals[i].residue_bit(detail::clpow(f, sys.K[i]));
                out.add_root(expo);
            }
            return out;
        }
    }
    return weyl_sum_generic(F, freqs, sys, n);
}

/// Normalized multiplier value: the Weyl sum divided by q^n. |value| <= 1.
inline std::complex<double> multiplier_M(const Field& F, const FrequencyVec& freqs,
                                         const ExponentSystem& sys, int n) {
    CycloSum s = weyl_sum(F, freqs, sys, n);
    return s.to_complex() / double(ipow((unsigned)F.q(), (unsigned)n));
}

// ---------------------------------------------------------------------------
// Gauss sums over a monic modulus.
// ---------------------------------------------------------------------------

struct GaussSum {
    CycloSum sum;   // q^(deg h) summands
    int deg_h = 0;
    int q = 2;

    std::complex<double> value() const {
        return sum.to_complex() / double(ipow((unsigned)q, (unsigned)deg_h));
    }
    double abs() const { return std::abs(value()); }
};

/// Complete normalized character sum mod h: q^(-deg h) * sum over deg f <
/// deg h of e((a_1 f^(r_1) + ... + a_k f^(r_k))/h). Requires the reduced form:
/// h monic, deg a_i < deg h, joint gcd 1.
inline GaussSum gauss_sum(const Field& F, const std::vector<Poly>& a, const Poly& h,
                          const ExponentSystem& sys) {
    if (!h.is_monic()) throw domain_error("gauss_sum: h must be monic");
    if ((int)a.size() != sys.k()) throw domain_error("gauss_sum: arity mismatch");
    for (const auto& ai : a)
        if (!(ai.degree() < h.degree()) && !(ai.is_zero() && h.is_one()))
            throw domain_error("gauss_sum: deg a_i must be < deg h");
    std::vector<Poly> items = a;
    items.push_back(h);
    if (!gcd_monic(F, items).is_one()) throw domain_error("gauss_sum: input is not reduced");

    FrequencyVec freqs;
    for (const auto& ai : a) freqs.push_back(Frequency::from_rational(F, ai, h));
    GaussSum g;
    g.sum = weyl_sum(F, freqs, sys, std::max(h.degree(), 0));
    g.deg_h = std::max(h.degree(), 0);
    g.q = F.q();
    return g;
}

/// All reduced numerator vectors for a monic modulus h: deg a_i < deg h and
/// joint gcd (a_1, ..., a_k, h) = 1. For h = 1 this is exactly {0-vector}.
inline std::vector<std::vector<Poly>> enumerate_a_h(const Field& F, const Poly& h, int k) {
    if (!h.is_monic()) throw domain_error("enumerate_a_h: h must be monic");
    const int s = h.degree();
    if (s == 0) return {std::vector<Poly>(k)};
    const std::uint64_t per = ipow((unsigned)F.q(), (unsigned)s);
    std::uint64_t totalTuples = 1;
    for (int i = 0; i < k; ++i) {
        totalTuples *= per;
        guard_count(totalTuples, "enumerate_a_h");
    }
    std::vector<std::vector<Poly>> out;
    std::vector<std::uint64_t> idx(k, 0);
    std::vector<Poly> a(k);
    for (std::uint64_t c = 0; c < totalTuples; ++c) {
        std::uint64_t t = c;
        for (int i = 0; i < k; ++i) {
            a[i] = poly_from_code(F, t % per);
            t /= per;
        }
        std::vector<Poly> items = a;
        items.push_back(h);
        if (gcd_monic(F, items).is_one()) out.push_back(a);
    }
    return out;
}

struct GaussRow {
    Poly h;
    std::vector<Poly> a;
    GaussSum lambda;
};

struct GaussTable {
    int s = 0;
    std::vector<GaussRow> rows;
    double max_abs = 0.0;
};

/// Exhaustive table of Gauss sums over all monic h of degree s and all
/// reduced numerator vectors, with the per-degree maximum of |Lambda|.
inline GaussTable gauss_table(const Field& F, int s, const ExponentSystem& sys) {
    GaussTable table;
    table.s = s;
    for (const Poly& h : enumerate_monic(F, s)) {
        for (auto& a : enumerate_a_h(F, h, sys.k())) {
            GaussRow row{h, a, gauss_sum(F, a, h, sys)};
            table.max_abs = std::max(table.max_abs, row.lambda.abs());
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

}  // namespace ffcm
