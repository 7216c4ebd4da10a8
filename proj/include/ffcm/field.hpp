#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffcm/errors.hpp"
#include "ffcm/util.hpp"

namespace ffcm {

/// Field element, encoded as an index in [0, q). For q = p^m the index is the
/// base-p encoding of the coordinate vector in the basis 1, x, ..., x^(m-1).
using Fe = std::uint16_t;

/// Defining data of F_q, q = p^m. For m > 1 a monic irreducible modulus over
/// F_p must be supplied (coefficients mod p, constant term first, degree m).
struct FieldParams {
    int p = 2;
    int m = 1;
    std::vector<int> modulus;  // size m+1 when m > 1, leading coefficient 1
};

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Runtime field F_q with dense operation tables (q is tiny at desk scale).
/// Immutable after construction; all operations are pure lookups.
class Field {
public:
    explicit Field(FieldParams params) : params_(std::move(params)) {
        validate();
        q_ = 1;
        for (int i = 0; i < params_.m; ++i) q_ *= params_.p;
        build_tables();
    }

    static Field prime(int p) { return Field(FieldParams{p, 1, {}}); }
    /// F_4 = F_2[x]/(x^2+x+1), the default quartic configuration.
    static Field f4() { return Field(FieldParams{2, 2, {1, 1, 1}}); }

    int p() const { return params_.p; }
    int m() const { return params_.m; }
    int q() const { return q_; }
    const FieldParams& params() const { return params_; }

    Fe add(Fe a, Fe b) const { return add_[a * q_ + b]; }
    Fe sub(Fe a, Fe b) const { return add_[a * q_ + neg_[b]]; }
    Fe neg(Fe a) const { return neg_[a]; }
    Fe mul(Fe a, Fe b) const { return mul_[a * q_ + b]; }
    Fe inv(Fe a) const {
        if (a == 0) throw domain_error("Field::inv: zero element");
        return inv_[a];
    }
    Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }

    /// Tr_{F_q/F_p}(a) = a + a^p + ... + a^(p^(m-1)), reduced mod p.
    int trace(Fe a) const { return trace_[a]; }

    /// Coordinates of a in the F_p-basis 1, x, ..., x^(m-1).
    std::vector<int> coords(Fe a) const {
        std::vector<int> c(params_.m);
        for (int i = 0; i < params_.m; ++i) { c[i] = a % params_.p; a = Fe(a / params_.p); }
        return c;
    }

    bool same_as(const Field& other) const {
        return params_.p == other.params_.p && params_.m == other.params_.m &&
               params_.modulus == other.params_.modulus;
    }

private:
    void validate() const {
        if (!is_prime(params_.p)) throw domain_error("Field: p is not prime");
        if (params_.m < 1) throw domain_error("Field: m must be >= 1");
        if (params_.m == 1) {
            if (!params_.modulus.empty() && params_.modulus != std::vector<int>{0, 1})
                throw domain_error("Field: modulus given for a prime field");
            return;
        }
        if ((int)params_.modulus.size() != params_.m + 1)
            throw domain_error("Field: modulus degree must equal m");
        if (params_.modulus.back() % params_.p != 1)
            throw domain_error("Field: modulus must be monic");
        for (int c : params_.modulus)
            if (c < 0 || c >= params_.p) throw domain_error("Field: modulus coefficient out of range");
        if (!irreducible_over_fp(params_.modulus, params_.p))
            throw domain_error("Field: modulus is reducible over F_p");
    }

    // Trial division by all monic polynomials of degree <= m/2.
    static bool irreducible_over_fp(const std::vector<int>& f, int p) {
        int m = (int)f.size() - 1;
        for (int d = 1; 2 * d <= m; ++d) {
            std::uint64_t cnt = ipow((unsigned)p, (unsigned)d);
            for (std::uint64_t idx = 0; idx < cnt; ++idx) {
                std::vector<int> g(d + 1, 0);
                std::uint64_t t = idx;
                for (int i = 0; i < d; ++i) { g[i] = int(t % p); t /= p; }
                g[d] = 1;
                if (fp_poly_divides(g, f, p)) return false;
            }
        }
        return true;
    }

    static bool fp_poly_divides(const std::vector<int>& g, std::vector<int> r, int p) {
        int dg = (int)g.size() - 1;
        for (int i = (int)r.size() - 1; i >= dg; --i) {
            int c = r[i] % p;
            if (c == 0) continue;
            for (int j = 0; j <= dg; ++j)
                r[i - dg + j] = ((r[i - dg + j] - c * g[j]) % p + p * p) % p;
        }
        for (int i = 0; i < dg; ++i)
            if (r[i] % p != 0) return false;
        return true;
    }

    void build_tables() {
        const int p = params_.p, m = params_.m, q = q_;
        auto dec = [&](Fe a) {
            std::vector<int> c(m);
            for (int i = 0; i < m; ++i) { c[i] = a % p; a = Fe(a / p); }
            return c;
        };
        auto enc = [&](const std::vector<int>& c) {
            int v = 0;
            for (int i = m - 1; i >= 0; --i) v = v * p + c[i];
            return Fe(v);
        };

        add_.resize(q * q);
        mul_.resize(q * q);
        neg_.resize(q);
        inv_.assign(q, 0);
        trace_.resize(q);

        for (int a = 0; a < q; ++a) {
            auto ca = dec(Fe(a));
            std::vector<int> cn(m);
            for (int i = 0; i < m; ++i) cn[i] = (p - ca[i]) % p;
            neg_[a] = enc(cn);
            for (int b = 0; b < q; ++b) {
                auto cb = dec(Fe(b));
                std::vector<int> cs(m);
                for (int i = 0; i < m; ++i) cs[i] = (ca[i] + cb[i]) % p;
                add_[a * q + b] = enc(cs);
                // product in F_p[x] reduced by the modulus
                std::vector<int> prod(2 * m - 1, 0);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
                if (m > 1) {
                    for (int i = 2 * m - 2; i >= m; --i) {
                        int c = prod[i];
                        if (c == 0) continue;
                        prod[i] = 0;
                        for (int j = 0; j < m; ++j)
                            prod[i - m + j] = ((prod[i - m + j] - c * params_.modulus[j]) % p + p * p) % p;
                    }
                }
                prod.resize(m);
                mul_[a * q + b] = enc(prod);
            }
        }
        for (int a = 1; a < q; ++a)
            for (int b = 1; b < q; ++b)
                if (mul_[a * q + b] == 1) { inv_[a] = Fe(b); break; }
        for (int a = 0; a < q; ++a) {
            // Tr(a) = sum of Frobenius images; the result lies in F_p.
            Fe acc = 0, im = Fe(a);
            for (int i = 0; i < m; ++i) {
                acc = add(acc, im);
                Fe sq = im;
                for (int j = 1; j < p; ++j) sq = mul(sq, im);  // im^p
                im = sq;
            }
            trace_[a] = acc % p;  // an F_p-coded value: coordinates (tr,0,...,0)
        }
    }

    FieldParams params_;
    int q_ = 0;
    std::vector<Fe> add_, mul_, neg_, inv_;
    std::vector<int> trace_;
};

}  // namespace ffcm
