#pragma once

#include <string>
#include <vector>

#include "ffcm/errors.hpp"
#include "ffcm/poly.hpp"

namespace ffcm {

/// Truncated element of the torus: the coefficients of t^-1 ... t^-N of a
/// Laurent series in 1/t, with explicit precision N >= 1. coeff(-j) = c[j-1].
struct TailSeries {
    int precision = 1;
    std::vector<Fe> c;  // size == precision

    TailSeries() : c(1, 0) {}
    explicit TailSeries(int N) : precision(N), c(N, 0) {
        if (N < 1) throw domain_error("TailSeries: precision must be >= 1");
    }

    Fe coeff_at(int exponent) const {  // exponent in [-precision, -1]
        int idx = -exponent - 1;
        return (idx >= 0 && idx < precision) ? c[idx] : Fe(0);
    }
    void set_coeff(int exponent, Fe v) {
        int idx = -exponent - 1;
        if (idx < 0 || idx >= precision)
            throw domain_error("TailSeries: exponent outside [-N,-1]");
        c[idx] = v;
    }
    bool is_zero_to_precision() const {
        for (Fe v : c)
            if (v) return false;
        return true;
    }
    friend bool operator==(const TailSeries& a, const TailSeries& b) {
        return a.precision == b.precision && a.c == b.c;
    }
};

/// Value of the additive character, kept as the exponent j of exp(2*pi*i*j/p).
/// Products of character values add exponents mod p.
struct CharValue {
    int exponent = 0;
};

/// Largest exponent with a nonzero coefficient; kNegInf when the series is
/// zero to its precision (the caller knows the precision annotation).
inline int ord_of(const TailSeries& a) {
    for (int j = -1; j >= -a.precision; --j)
        if (a.coeff_at(j)) return j;
    return kNegInf;
}

/// Coefficient of t^-1.
inline Fe residue(const TailSeries& a) { return a.coeff_at(-1); }

inline CharValue character(const Field& F, const TailSeries& a) {
    return CharValue{F.trace(residue(a))};
}

inline CharValue char_mul(const Field& F, CharValue a, CharValue b) {
    return CharValue{(a.exponent + b.exponent) % F.p()};
}

enum class NonMonicPolicy { Normalize, Reject };

/// First N coefficients of the Laurent expansion of a/h around t = infinity,
/// integral part discarded. Exact long division; h monic (or normalized).
inline TailSeries expand_rational(const Field& F, const Poly& a, Poly h, int N,
                                  NonMonicPolicy policy = NonMonicPolicy::Normalize) {
    if (h.is_zero()) throw domain_error("expand_rational: zero denominator");
    if (N < 1) throw domain_error("expand_rational: precision must be >= 1");
    Poly num = a;
    if (!h.is_monic()) {
        if (policy == NonMonicPolicy::Reject)
            throw domain_error("expand_rational: denominator not monic");
        Fe inv = F.inv(h.lead());
        num = scale(F, inv, num);
        h = scale(F, inv, h);
    }
    TailSeries out(N);
    Poly u = mod(F, num, h);
    const int d = h.degree();
    for (int j = 1; j <= N; ++j) {
        // u <- u * t, then remove the degree-d part
        u.c.insert(u.c.begin(), 0);
        Fe top = u.coeff(d);
        if (top) {
            for (int i = 0; i <= d; ++i) u.c[i] = F.sub(u.coeff(i), F.mul(top, h.c[i]));
            u.trim();
        }
        out.set_coeff(-j, top);
    }
    return out;
}

/// Fractional part of f*alpha at the guaranteed output precision N - deg f.
/// Needs N >= deg f + 1 so that at least the residue slot is exact.
inline TailSeries scalar_mul(const Field& F, const Poly& f, const TailSeries& alpha) {
    if (f.is_zero()) return TailSeries(alpha.precision);
    const int d = f.degree();
    const int outN = alpha.precision - d;
    if (outN < 1)
        throw precision_error("scalar_mul: precision " + std::to_string(alpha.precision) +
                              " insufficient for deg f = " + std::to_string(d));
    TailSeries out(outN);
    // coefficient of t^-j in f*alpha: sum over i of f_i * alpha_{-j-i}... with
    // exponent bookkeeping i + (-j - i) = -j; all needed alpha slots exist.
    for (int j = 1; j <= outN; ++j) {
        Fe acc = 0;
        for (int i = 0; i <= d; ++i) {
            Fe fi = f.coeff(i);
            if (fi) acc = F.add(acc, F.mul(fi, alpha.coeff_at(-j - i)));
        }
        out.set_coeff(-j, acc);
    }
    return out;
}

/// Coefficientwise sum at the smaller of the two precisions.
inline TailSeries tail_add(const Field& F, const TailSeries& a, const TailSeries& b) {
    const int N = std::min(a.precision, b.precision);
    TailSeries out(N);
    for (int j = 1; j <= N; ++j) out.set_coeff(-j, F.add(a.coeff_at(-j), b.coeff_at(-j)));
    return out;
}

inline TailSeries tail_neg(const Field& F, const TailSeries& a) {
    TailSeries out(a.precision);
    for (int j = 1; j <= a.precision; ++j) out.set_coeff(-j, F.neg(a.coeff_at(-j)));
    return out;
}

/// ASCII form "t^-1+t^-3" (coefficients other than 1 as "2*t^-2").
inline std::string to_string(const TailSeries& a) {
    std::string s;
    for (int j = 1; j <= a.precision; ++j) {
        Fe v = a.coeff_at(-j);
        if (!v) continue;
        if (!s.empty()) s += "+";
        if (v != 1) s += std::to_string(v) + "*";
        s += "t^-" + std::to_string(j);
    }
    return s.empty() ? "0" : s;
}

inline TailSeries tail_parse(const Field& F, const std::string& text, int precision) {
    TailSeries out(precision);
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && isspace((unsigned char)text[i])) ++i; };
    skip_ws();
    if (text.substr(i) == "0") return out;
    while (i < text.size()) {
        int coeff = 1;
        if (isdigit((unsigned char)text[i])) {
            coeff = 0;
            while (i < text.size() && isdigit((unsigned char)text[i]))
                coeff = coeff * 10 + (text[i++] - '0');
            skip_ws();
            if (i < text.size() && text[i] == '*') { ++i; skip_ws(); }
        }
        if (i >= text.size() || text[i] != 't')
            throw domain_error("tail_parse: expected 't' in '" + text + "'");
        ++i;
        if (i + 1 >= text.size() || text[i] != '^' || text[i + 1] != '-')
            throw domain_error("tail_parse: expected '^-' in '" + text + "'");
        i += 2;
        int expn = 0;
        if (i >= text.size() || !isdigit((unsigned char)text[i]))
            throw domain_error("tail_parse: exponent expected in '" + text + "'");
        while (i < text.size() && isdigit((unsigned char)text[i]))
            expn = expn * 10 + (text[i++] - '0');
        if (coeff >= F.q()) throw domain_error("tail_parse: coefficient out of range");
        if (expn > precision) throw domain_error("tail_parse: exponent beyond precision");
        out.set_coeff(-expn, F.add(out.coeff_at(-expn), Fe(coeff)));
        skip_ws();
        if (i < text.size()) {
            if (text[i] != '+') throw domain_error("tail_parse: expected '+' in '" + text + "'");
            ++i;
            skip_ws();
        }
    }
    return out;
}

}  // namespace ffcm
