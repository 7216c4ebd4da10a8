#pragma once

#include <map>
#include <optional>

#include "ffcm/arcs.hpp"
#include "ffcm/expsum.hpp"
#include "ffcm/grid.hpp"

namespace ffcm {

/// Parameters of the degree-s operators at scale n. Ns is the first scale at
/// which the degree-s piece is active; Qs is the product of all monic
/// polynomials of degree s and Rs its degree (Rs = s q^s).
struct OperatorParams {
    ExponentSystem sys;
    int s = 0;
    int n = 1;
    int Ns = 1;
    Poly Qs;
    int Rs = 0;
    Rational rho_effective;
    bool nonconforming = false;

    /// The activity indicator 1_{s < rho n}.
    bool active() const { return int_lt_rat(s, rho_effective * Rational(n)); }

    /// Large-scale conforming range: n >= max(Ns, Rs^4) and r_i n >= Rs.
    bool large_scale_conforming() const {
        std::int64_t rs4 = std::int64_t(Rs) * Rs * Rs * Rs;
        if (n < Ns || n < rs4) return false;
        for (int r : sys.K)
            if (std::int64_t(r) * n < Rs) return false;
        return true;
    }
};

inline OperatorParams make_operator_params(const Field& F, const ExponentSystem& sys, int s,
                                           int n,
                                           std::optional<Rational> rho_override = std::nullopt) {
    if (s < 0) throw domain_error("OperatorParams: s must be >= 0");
    if (n < 0) throw domain_error("OperatorParams: n must be >= 0");
    OperatorParams P;
    P.sys = sys;
    P.s = s;
    P.n = n;
    P.rho_effective = rho_override.value_or(sys.rho);
    P.nonconforming = rho_override.has_value();
    // smallest positive n with s < rho * n
    P.Ns = 1;
    while (!int_lt_rat(s, P.rho_effective * Rational(P.Ns))) ++P.Ns;
    P.Qs = Poly::one();
    for (const Poly& h : enumerate_monic(F, s)) P.Qs = mul(F, P.Qs, h);
    P.Rs = std::max(P.Qs.degree(), 0);
    return P;
}

namespace opdetail {

struct ComplexAcc {
    using V = std::complex<double>;
    std::vector<std::complex<double>> roots;
    explicit ComplexAcc(const Field& F) : roots(roots_of_unity(F.p())) {}
    void add(V& slot, int e, const V& v) const { slot += roots[e] * v; }
    void add_plain(V& slot, const V& v) const { slot += v; }
};

struct ExactAcc {
    using V = CycloInt;
    explicit ExactAcc(const Field&) {}
    void add(V& slot, int e, const V& v) const { slot += v.rotated(e); }
    void add_plain(V& slot, const V& v) const { slot += v; }
};

/// tab[code] = character exponent of e((a f)/h) for the polynomial f with
/// that code, f over deg f < deg_bound. res((a f)/h) is F_q-linear in f, so
/// the exponent is the digitwise sum of trace(f_j * res(a t^j / h)).
inline std::vector<std::uint8_t> char_table(const Field& F, const Poly& a, const Poly& h,
                                            int deg_bound) {
    const std::uint64_t size = ipow((unsigned)F.q(), (unsigned)deg_bound);
    guard_count(size, "char_table");
    std::vector<std::uint8_t> tab(size, 0);
    if (h.is_one() || a.is_zero()) return tab;
    const int d = h.degree();
    // residues rho_j = res(a t^j / h) = top coefficient of (a t^j mod h)
    std::vector<Fe> rho(deg_bound);
    Poly cur = mod(F, a, h);
    for (int j = 0; j < deg_bound; ++j) {
        rho[j] = cur.coeff(d - 1);
        // cur <- (cur * t) mod h
        cur.c.insert(cur.c.begin(), 0);
        Fe top = cur.coeff(d);
        if (top) {
            for (int i = 0; i <= d; ++i) cur.c[i] = F.sub(cur.coeff(i), F.mul(top, h.c[i]));
        }
        cur.trim();
    }
    // digit tables: contribution of digit v in slot j
    const int q = F.q(), p = F.p();
    std::vector<std::uint8_t> digit(deg_bound * q);
    for (int j = 0; j < deg_bound; ++j)
        for (int v = 0; v < q; ++v) digit[j * q + v] = std::uint8_t(F.trace(F.mul(Fe(v), rho[j])));
    for (std::uint64_t code = 1; code < size; ++code) {
        std::uint64_t c = code;
        int e = 0;
        for (int j = 0; c; ++j, c /= q) e += digit[j * q + int(c % q)];
        tab[code] = std::uint8_t(e % p);
    }
    return tab;
}

/// Shift-average kernel: out(x) = sum over u in the given shift list of
/// g(x + shift(u)), where each shift is a k-tuple of codes, optionally with a
/// per-shift character exponent. Out box must contain every x = y - shift.
template <class Acc>
GridFunction<typename Acc::V> scatter_shifts(
    const Field& F, const Acc& acc, const GridFunction<typename Acc::V>& g,
    const std::vector<int>& out_box,
    const std::vector<std::vector<std::uint64_t>>& shifts,  // [shift][coordinate]
    const std::vector<std::uint8_t>* exponents) {
    auto out = GridFunction<typename Acc::V>::zeros(F, out_box);
    std::vector<std::uint64_t> x(g.arity);
    for_each_nonzero(g, [&](const std::vector<std::uint64_t>& y, const typename Acc::V& v) {
        for (size_t si = 0; si < shifts.size(); ++si) {
            for (int i = 0; i < g.arity; ++i) x[i] = code_sub(F, y[i], shifts[si][i]);
            if (exponents)
                acc.add(out.at(x), (*exponents)[si], v);
            else
                acc.add_plain(out.at(x), v);
        }
    });
    return out;
}

template <class Acc>
GridFunction<typename Acc::V> m_kernel(const Field& F, const Acc& acc,
                                       const GridFunction<typename Acc::V>& g,
                                       const ExponentSystem& sys, int n) {
    if (g.arity != sys.k()) throw domain_error("apply_M: arity mismatch");
    const std::uint64_t cnt = ipow((unsigned)F.q(), (unsigned)n);
    guard_count(cnt, "apply_M");
    std::vector<int> out_box(g.arity);
    for (int i = 0; i < g.arity; ++i)
        out_box[i] = std::max(g.box[i], sys.K[i] * std::max(n - 1, 0) + (n >= 1 ? 1 : 0));
    std::vector<std::vector<std::uint64_t>> shifts;
    shifts.reserve(cnt);
    for_each_degree_lt(F, n, [&](const Poly& u) {
        std::vector<std::uint64_t> sh(g.arity);
        for (int i = 0; i < g.arity; ++i) {
            // shift is +u^{r_i}: x + u^{r_i} = y means x = y - u^{r_i}
            sh[i] = poly_code(F, pow(F, u, (unsigned)sys.K[i]));
        }
        shifts.push_back(std::move(sh));
    });
    return scatter_shifts(F, acc, g, out_box, shifts, nullptr);
}

inline std::complex<double> weighted(const ComplexAcc&, const std::complex<double>& w,
                                     const std::complex<double>& v) {
    return w * v;
}
inline CycloInt weighted(const ExactAcc&, const CycloInt& w, const CycloInt& v) { return w * v; }

/// Common kernel of the degree-s projection and its Gauss-weighted variant:
/// out(x) = sum over centers w(center) sum over f in the box
/// e(-f . a/h) g(x+f). Weights are 1 (projection) or the raw Gauss sums.
template <class Acc>
GridFunction<typename Acc::V> center_modulated_kernel(
    const Field& F, const Acc& acc, const GridFunction<typename Acc::V>& g,
    const OperatorParams& P, const std::vector<typename Acc::V>* weights,
    const std::vector<RationalPoint>& centers) {
    const int k = g.arity;
    std::vector<int> out_box(k);
    std::uint64_t fcount = 1;
    for (int i = 0; i < k; ++i) {
        out_box[i] = std::max(g.box[i], P.sys.K[i] * P.n);
        fcount *= ipow((unsigned)F.q(), (unsigned)(P.sys.K[i] * P.n));
        guard_count(fcount, "degree-s kernel");
    }
    auto out = GridFunction<typename Acc::V>::zeros(F, out_box);

    std::vector<std::uint64_t> fdims(k);
    for (int i = 0; i < k; ++i) fdims[i] = ipow((unsigned)F.q(), (unsigned)(P.sys.K[i] * P.n));

    std::vector<std::uint64_t> x(k), fcodes(k);
    for (size_t ci = 0; ci < centers.size(); ++ci) {
        const auto& c = centers[ci];
        // e(-f_i a_i / h) tables per coordinate
        std::vector<std::vector<std::uint8_t>> tabs(k);
        for (int i = 0; i < k; ++i)
            tabs[i] = char_table(F, neg(F, c.a[i]), c.h, P.sys.K[i] * P.n);
        for_each_nonzero(g, [&](const std::vector<std::uint64_t>& y, const typename Acc::V& v) {
            typename Acc::V wv = weights ? weighted(acc, (*weights)[ci], v) : v;
            for (std::uint64_t fi = 0; fi < fcount; ++fi) {
                std::uint64_t t = fi;
                int e = 0;
                for (int i = 0; i < k; ++i) {
                    fcodes[i] = t % fdims[i];
                    t /= fdims[i];
                    e += tabs[i][fcodes[i]];
                    x[i] = code_sub(F, y[i], fcodes[i]);
                }
                acc.add(out.at(x), e % F.p(), wv);
            }
        });
    }
    return out;
}

template <class Acc>
GridFunction<typename Acc::V> l_kernel(const Field& F, const Acc& acc,
                                       const GridFunction<typename Acc::V>& g,
                                       const OperatorParams& P) {
    const int k = g.arity;
    std::vector<int> out_box(k);
    std::vector<int> ubound(k);
    std::uint64_t ucount = 1;
    for (int i = 0; i < k; ++i) {
        ubound[i] = P.sys.K[i] * P.n - P.Rs;
        if (ubound[i] < 0) throw domain_error("apply_L: r_i n < Rs");
        out_box[i] = std::max(g.box[i], P.sys.K[i] * P.n);
        ucount *= ipow((unsigned)F.q(), (unsigned)ubound[i]);
        guard_count(ucount, "apply_L");
    }
    auto out = GridFunction<typename Acc::V>::zeros(F, out_box);
    std::vector<std::uint64_t> udims(k);
    for (int i = 0; i < k; ++i) udims[i] = ipow((unsigned)F.q(), (unsigned)ubound[i]);
    std::vector<std::uint64_t> x(k);
    for_each_nonzero(g, [&](const std::vector<std::uint64_t>& y, const typename Acc::V& v) {
        for (std::uint64_t ui = 0; ui < ucount; ++ui) {
            std::uint64_t t = ui;
            for (int i = 0; i < k; ++i) {
                std::uint64_t uc = t % udims[i];
                t /= udims[i];
                Poly u = poly_from_code(F, uc);
                x[i] = code_sub(F, y[i], poly_code(F, mul(F, P.Qs, u)));
            }
            acc.add_plain(out.at(x), v);
        }
    });
    return out;
}

template <class Acc>
GridFunction<typename Acc::V> g_kernel(const Field& F, const Acc& acc,
                                       const GridFunction<typename Acc::V>& g,
                                       const OperatorParams& P,
                                       const std::vector<RationalPoint>& centers) {
    const int k = g.arity;
    std::vector<int> out_box(k);
    std::uint64_t bcount = 1;
    for (int i = 0; i < k; ++i) {
        out_box[i] = std::max(g.box[i], P.Rs);
        bcount *= ipow((unsigned)F.q(), (unsigned)P.Rs);
        guard_count(bcount, "build_G");
    }
    auto out = GridFunction<typename Acc::V>::zeros(F, out_box);

    // w(b) = sum over centers of e(-b . a/h), accumulated exactly as counts
    const std::uint64_t bdim = ipow((unsigned)F.q(), (unsigned)P.Rs);
    std::vector<CycloInt> w(bcount, CycloInt(F.p()));
    for (const auto& c : centers) {
        std::vector<std::vector<std::uint8_t>> tabs(k);
        for (int i = 0; i < k; ++i) tabs[i] = char_table(F, neg(F, c.a[i]), c.h, P.Rs);
        for (std::uint64_t bi = 0; bi < bcount; ++bi) {
            std::uint64_t t = bi;
            int e = 0;
            for (int i = 0; i < k; ++i) {
                e += tabs[i][t % bdim];
                t /= bdim;
            }
            w[bi].v[e % F.p()] += 1;
        }
    }

    std::vector<std::complex<double>> wc;
    if constexpr (!std::is_same_v<typename Acc::V, CycloInt>) {
        wc.reserve(bcount);
        for (const auto& cw : w) wc.push_back(cw.to_complex());
    }

    std::vector<std::uint64_t> x(k), bcodes(k);
    for_each_nonzero(g, [&](const std::vector<std::uint64_t>& y, const typename Acc::V& v) {
        for (std::uint64_t bi = 0; bi < bcount; ++bi) {
            std::uint64_t t = bi;
            for (int i = 0; i < k; ++i) {
                bcodes[i] = t % bdim;
                t /= bdim;
                x[i] = code_sub(F, y[i], bcodes[i]);
            }
            if constexpr (std::is_same_v<typename Acc::V, CycloInt>) {
                out.at(x) += w[bi] * v;
            } else {
                out.at(x) += wc[bi] * v;
            }
        }
    });
    return out;
}

}  // namespace opdetail

// ---------------------------------------------------------------------------
// Public operators on complex grids (normalized as defined) and their exact
// unnormalized mirrors (value = num / q^denom_pow).
// ---------------------------------------------------------------------------

struct ScaledGridExact {
    GridExact num;
    int denom_pow = 0;
};

/// Shift average: (M_n g)(x) = q^(-n) sum over deg u < n of
/// g(x_1 + u^(r_1), ..., x_k + u^(r_k)).
inline Grid apply_M(const Field& F, const Grid& g, const ExponentSystem& sys, int n) {
    opdetail::ComplexAcc acc(F);
    Grid out = opdetail::m_kernel(F, acc, g, sys, n);
    const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)n));
    for (auto& v : out.values) v *= inv;
    return out;
}

inline ScaledGridExact apply_M_exact(const Field& F, const GridExact& g,
                                     const ExponentSystem& sys, int n) {
    opdetail::ExactAcc acc(F);
    return {opdetail::m_kernel(F, acc, g, sys, n), n};
}

/// Exact finite Fourier transform value at one frequency vector.
inline std::complex<double> fourier_at(const Field& F, const Grid& g, const FrequencyVec& alpha) {
    if ((int)alpha.size() != g.arity) throw domain_error("fourier_at: arity mismatch");
    // negate the frequency once; then each summand is e(-x.alpha)
    std::vector<detail::CoordEval> evals;
    for (int i = 0; i < g.arity; ++i) {
        detail::CoordEval ev;
        ev.rational = alpha[i].rational;
        if (ev.rational) {
            ev.num = neg(F, alpha[i].num);
            ev.den = alpha[i].den;
            ev.den_deg = alpha[i].den.degree();
        } else {
            if (alpha[i].tail.precision < g.box[i])
                throw precision_error("fourier_at: tail precision below grid box");
            TailSeries nt = tail_neg(F, alpha[i].tail);
            ev.tail_coeffs.assign(nt.c.begin(), nt.c.end());
            ev.tail_coeffs.resize(std::max<size_t>(ev.tail_coeffs.size(), g.box[i] + 1), 0);
        }
        evals.push_back(std::move(ev));
    }
    auto roots = roots_of_unity(F.p());
    std::complex<double> sum = 0;
    for_each_nonzero(g, [&](const std::vector<std::uint64_t>& x, const std::complex<double>& v) {
        int e = 0;
        for (int i = 0; i < g.arity; ++i)
            e = (e + evals[i].residue_trace(F, poly_from_code(F, x[i]))) % F.p();
        sum += roots[e] * v;
    });
    return sum;
}

inline CycloInt fourier_at_exact(const Field& F, const GridExact& g, const FrequencyVec& alpha) {
    if ((int)alpha.size() != g.arity) throw domain_error("fourier_at: arity mismatch");
    std::vector<detail::CoordEval> evals;
    for (int i = 0; i < g.arity; ++i) {
        detail::CoordEval ev;
        ev.rational = alpha[i].rational;
        if (ev.rational) {
            ev.num = neg(F, alpha[i].num);
            ev.den = alpha[i].den;
            ev.den_deg = alpha[i].den.degree();
        } else {
            if (alpha[i].tail.precision < g.box[i])
                throw precision_error("fourier_at: tail precision below grid box");
            TailSeries nt = tail_neg(F, alpha[i].tail);
            ev.tail_coeffs.assign(nt.c.begin(), nt.c.end());
            ev.tail_coeffs.resize(std::max<size_t>(ev.tail_coeffs.size(), g.box[i] + 1), 0);
        }
        evals.push_back(std::move(ev));
    }
    CycloInt sum(F.p());
    for_each_nonzero(g, [&](const std::vector<std::uint64_t>& x, const CycloInt& v) {
        int e = 0;
        for (int i = 0; i < g.arity; ++i)
            e = (e + evals[i].residue_trace(F, poly_from_code(F, x[i]))) % F.p();
        sum += v.rotated(e);
    });
    return sum;
}

/// Degree-s projection, computed from its physical kernel: for each reduced
/// center with deg h = s, a character-modulated box average over
/// deg f_i < r_i n. Zero when the activity indicator is off.
inline Grid apply_D(const Field& F, const Grid& g, const OperatorParams& P) {
    if (!P.active()) return Grid::zeros(F, g.box);
    opdetail::ComplexAcc acc(F);
    auto centers = enumerate_centers(F, P.s, P.sys);
    Grid out = opdetail::center_modulated_kernel(F, acc, g, P, nullptr, centers);
    int total = 0;
    for (int r : P.sys.K) total += r * P.n;
    const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)total));
    for (auto& v : out.values) v *= inv;
    return out;
}

inline ScaledGridExact apply_D_exact(const Field& F, const GridExact& g, const OperatorParams& P) {
    int total = 0;
    for (int r : P.sys.K) total += r * P.n;
    if (!P.active()) return {GridExact::zeros(F, g.box), total};
    opdetail::ExactAcc acc(F);
    auto centers = enumerate_centers(F, P.s, P.sys);
    return {opdetail::center_modulated_kernel(F, acc, g, P, nullptr, centers), total};
}

/// Cache of exhaustive Gauss tables per degree; built once per exponent set.
struct GaussCache {
    std::map<int, GaussTable> tables;
    const GaussTable& get(const Field& F, const ExponentSystem& sys, int s) {
        auto it = tables.find(s);
        if (it == tables.end()) it = tables.emplace(s, gauss_table(F, s, sys)).first;
        return it->second;
    }
};

/// Gauss-weighted degree-s piece: same kernel as the projection with each
/// center weighted by Lambda(a, h).
inline Grid apply_C_piece(const Field& F, const Grid& g, const OperatorParams& P,
                          GaussCache& cache) {
    if (!P.active()) return Grid::zeros(F, g.box);
    const GaussTable& table = cache.get(F, P.sys, P.s);
    std::vector<RationalPoint> centers;
    std::vector<std::complex<double>> weights;
    for (const auto& row : table.rows) {
        RationalPoint c;
        c.a = row.a;
        c.h = row.h;
        centers.push_back(std::move(c));
        weights.push_back(row.lambda.value());
    }
    opdetail::ComplexAcc acc(F);
    Grid out = opdetail::center_modulated_kernel(F, acc, g, P, &weights, centers);
    int total = 0;
    for (int r : P.sys.K) total += r * P.n;
    const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)total));
    for (auto& v : out.values) v *= inv;
    return out;
}

/// Major-arc model: the sum of the degree pieces with s < rho n. maxS may
/// truncate the sum; a truncation below the full range must be explicit.
struct CnResult {
    Grid grid;
    bool truncated = false;
};

inline CnResult apply_C(const Field& F, const Grid& g, const ExponentSystem& sys, int n, int maxS,
                        GaussCache& cache,
                        std::optional<Rational> rho_override = std::nullopt) {
    ArcScale scale(std::max(n, 1), sys, rho_override);
    const int full = scale.max_center_degree();
    CnResult res;
    res.truncated = maxS < full;
    const int top = std::min(maxS, full);
    Grid out = Grid::zeros(F, g.box);
    for (int s = 0; s <= top; ++s) {
        OperatorParams P = make_operator_params(F, sys, s, n, rho_override);
        Grid piece = apply_C_piece(F, g, P, cache);
        // widen and add
        std::vector<int> ub(g.arity);
        for (int i = 0; i < g.arity; ++i) ub[i] = std::max(out.box[i], piece.box[i]);
        Grid widened = Grid::zeros(F, ub);
        std::vector<std::uint64_t> codes(g.arity);
        for (std::uint64_t idx = 0; idx < widened.size(); ++idx) {
            widened.decode(idx, codes);
            widened.values[idx] = out.get(codes) + piece.get(codes);
        }
        out = std::move(widened);
    }
    res.grid = std::move(out);
    return res;
}

/// Long average along the lattice Qs * u: (L_{s,n} g)(x) =
/// q^(-sum(r_i n - Rs)) sum over deg u_i < r_i n - Rs of g(x + Qs u).
inline Grid apply_L(const Field& F, const Grid& g, const OperatorParams& P) {
    if (!P.large_scale_conforming() && !P.nonconforming)
        throw domain_error("apply_L: outside the conforming range (no override set)");
    opdetail::ComplexAcc acc(F);
    Grid out = opdetail::l_kernel(F, acc, g, P);
    int total = 0;
    for (int r : P.sys.K) total += r * P.n - P.Rs;
    const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)total));
    for (auto& v : out.values) v *= inv;
    return out;
}

inline ScaledGridExact apply_L_exact(const Field& F, const GridExact& g, const OperatorParams& P) {
    if (!P.large_scale_conforming() && !P.nonconforming)
        throw domain_error("apply_L: outside the conforming range (no override set)");
    opdetail::ExactAcc acc(F);
    int total = 0;
    for (int r : P.sys.K) total += r * P.n - P.Rs;
    return {opdetail::l_kernel(F, acc, g, P), total};
}

/// Character-compressed input: G_s(x) = q^(-k Rs) sum over deg b_i < Rs of
/// sum over centers e(-b . a/h) g(x + b).
inline Grid build_G(const Field& F, const Grid& g, const OperatorParams& P) {
    opdetail::ComplexAcc acc(F);
    auto centers = enumerate_centers(F, P.s, P.sys);
    Grid out = opdetail::g_kernel(F, acc, g, P, centers);
    const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)(g.arity * P.Rs)));
    for (auto& v : out.values) v *= inv;
    return out;
}

inline ScaledGridExact build_G_exact(const Field& F, const GridExact& g, const OperatorParams& P) {
    opdetail::ExactAcc acc(F);
    auto centers = enumerate_centers(F, P.s, P.sys);
    return {opdetail::g_kernel(F, acc, g, P, centers), g.arity * P.Rs};
}

/// Value of the degree-s projection multiplier at an exact frequency vector:
/// 1 iff some center with deg h = s satisfies ord(alpha_i - a_i/h) < -r_i n
/// for every coordinate. Always 0 or 1 at conforming scales.
inline int multiplier_D_value(const Field& F, const FrequencyVec& alpha, const OperatorParams& P) {
    if (!P.active()) return 0;
    for (const auto& c : enumerate_centers(F, P.s, P.sys)) {
        bool inside = true;
        for (int i = 0; i < P.sys.k() && inside; ++i) {
            int below = 0;
            int o = ord_diff(F, alpha[i], c.a[i], c.h, &below);
            inside = ord_strictly_below(o, below, Rational(-std::int64_t(P.sys.K[i]) * P.n));
        }
        if (inside) return 1;
    }
    return 0;
}

struct LargeScaleReport {
    bool conforming = false;
    bool exact_checked = false;
    bool exact_equal = false;
    double max_abs_error = 0.0;
    std::uint64_t points = 0;
    bool pass(double tol = 1e-9) const {
        return max_abs_error <= tol && (!exact_checked || exact_equal);
    }
};

/// Pointwise comparison of the degree-s projection and the long-average
/// factorization applied to the compressed input. Integer-valued grids are
/// also compared exactly in Z[w].
inline LargeScaleReport verify_large_scale_identity(const Field& F, const Grid& g,
                                                    const OperatorParams& P) {
    LargeScaleReport rep;
    rep.conforming = P.large_scale_conforming();
    Grid lhs = apply_D(F, g, P);
    Grid rhs = apply_L(F, build_G(F, g, P), P);
    rep.max_abs_error = max_abs_difference(lhs, rhs);
    rep.points = std::max(lhs.size(), rhs.size());
    bool integer_valued = true;
    for (const auto& v : g.values)
        if (v.imag() != 0.0 || double(std::llround(v.real())) != v.real()) {
            integer_valued = false;
            break;
        }
    if (integer_valued) {
        GridExact ge = to_exact(F, g);
        ScaledGridExact dl = apply_D_exact(F, ge, P);
        ScaledGridExact gg = build_G_exact(F, ge, P);
        ScaledGridExact lg = apply_L_exact(F, gg.num, P);
        lg.denom_pow += gg.denom_pow;
        rep.exact_checked = true;
        rep.exact_equal = (dl.denom_pow == lg.denom_pow) && exact_equal(dl.num, lg.num);
    }
    return rep;
}

}  // namespace ffcm
