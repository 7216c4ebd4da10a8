#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ffcm/grid.hpp"
#include "ffcm/operators.hpp"

namespace ffcm {

/// Strictly increasing cut points n_1 < ... < n_{t0}, t0 >= 2.
struct CutPoints {
    std::vector<int> ns;
    explicit CutPoints(std::vector<int> ns_) : ns(std::move(ns_)) {
        if (ns.size() < 2) throw domain_error("CutPoints: need at least two cuts");
        for (size_t i = 1; i < ns.size(); ++i)
            if (ns[i] <= ns[i - 1]) throw domain_error("CutPoints: not strictly increasing");
        if (ns.front() < 1) throw domain_error("CutPoints: cuts must be positive");
    }
};

/// Finite sequence (a_n) holding one value per n in [n_start, n_start+len).
struct ValueSequence {
    int n_start = 1;
    std::vector<std::complex<double>> values;

    std::complex<double> at(int n) const {
        int idx = n - n_start;
        if (idx < 0 || idx >= (int)values.size())
            throw domain_error("ValueSequence: index outside covered range");
        return values[idx];
    }
    bool covers(int lo, int hi) const {  // inclusive
        return n_start <= lo && hi < n_start + (int)values.size();
    }
};

/// ( sum_j sup_{n_j <= n < n_{j+1}} |a_n - a_{n_{j+1}}|^2 )^(1/2).
inline double oscillation(const ValueSequence& seq, const CutPoints& cuts) {
    if (!seq.covers(cuts.ns.front(), cuts.ns.back()))
        throw domain_error("oscillation: sequence does not cover the cut range");
    double total = 0;
    for (size_t j = 0; j + 1 < cuts.ns.size(); ++j) {
        double sup = 0;
        const std::complex<double> right = seq.at(cuts.ns[j + 1]);
        for (int n = cuts.ns[j]; n < cuts.ns[j + 1]; ++n)
            sup = std::max(sup, std::norm(seq.at(n) - right));
        total += sup;
    }
    return std::sqrt(total);
}

/// l2 norm over x of the pointwise oscillation of a grid-valued sequence.
/// ops[i] is the value at n = n_start + i; all grids share arity.
inline double oscillation_norm(const std::vector<Grid>& ops, int n_start, const CutPoints& cuts) {
    if (ops.empty()) throw domain_error("oscillation_norm: empty sequence");
    const int arity = ops[0].arity;
    for (const auto& g : ops)
        if (g.arity != arity) throw domain_error("oscillation_norm: arity mismatch");
    if (!(n_start <= cuts.ns.front() && cuts.ns.back() < n_start + (int)ops.size()))
        throw domain_error("oscillation_norm: sequence does not cover the cut range");

    std::vector<int> ubox(arity, 0);
    for (const auto& g : ops)
        for (int i = 0; i < arity; ++i) ubox[i] = std::max(ubox[i], g.box[i]);
    std::uint64_t total_cells = 1;
    std::vector<std::uint64_t> dims(arity);
    for (int i = 0; i < arity; ++i) {
        dims[i] = ipow((unsigned)ops[0].q, (unsigned)ubox[i]);
        total_cells *= dims[i];
        guard_count(total_cells, "oscillation_norm");
    }
    double total = 0;
    std::vector<std::uint64_t> codes(arity);
    for (std::uint64_t idx = 0; idx < total_cells; ++idx) {
        std::uint64_t t = idx;
        for (int i = 0; i < arity; ++i) {
            codes[i] = t % dims[i];
            t /= dims[i];
        }
        for (size_t j = 0; j + 1 < cuts.ns.size(); ++j) {
            double sup = 0;
            const std::complex<double> right = ops[cuts.ns[j + 1] - n_start].get(codes);
            for (int n = cuts.ns[j]; n < cuts.ns[j + 1]; ++n)
                sup = std::max(sup, std::norm(ops[n - n_start].get(codes) - right));
            total += sup;
        }
    }
    return std::sqrt(total);
}

/// Pointwise sup of |.| over a finite family; result is real-valued.
inline Grid maximal_sup(const std::vector<Grid>& ops) {
    if (ops.empty()) throw domain_error("maximal_sup: empty sequence");
    const int arity = ops[0].arity;
    std::vector<int> ubox(arity, 0);
    for (const auto& g : ops) {
        if (g.arity != arity) throw domain_error("maximal_sup: arity mismatch");
        for (int i = 0; i < arity; ++i) ubox[i] = std::max(ubox[i], g.box[i]);
    }
    // rebuild on the union box
    Grid out;
    {
        std::vector<std::uint64_t> dims(arity);
        std::uint64_t total = 1;
        for (int i = 0; i < arity; ++i) {
            dims[i] = ipow((unsigned)ops[0].q, (unsigned)ubox[i]);
            total *= dims[i];
            guard_count(total, "maximal_sup");
        }
        out.arity = arity;
        out.q = ops[0].q;
        out.box = ubox;
        out.dims = dims;
        out.values.assign(total, 0.0);
    }
    std::vector<std::uint64_t> codes(arity);
    for (std::uint64_t idx = 0; idx < out.size(); ++idx) {
        out.decode(idx, codes);
        double m = 0;
        for (const auto& g : ops) m = std::max(m, std::abs(g.get(codes)));
        out.values[idx] = m;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Long-average maximal function over the lattice Qs * u, exact integer form.
//
// The running sums S_n(x) = sum over deg u_i < r_i n - Rs of |F|(x + Qs u)
// are nondecreasing in n and stabilize once the boxes exhaust the reachable
// mass, so the sup over all n >= n_lo is attained within a finite range.
// ---------------------------------------------------------------------------

struct HlMaximalResult {
    Grid sup;              // pointwise sup of the averages over [n_lo, n_hi]
    int n_lo = 1, n_hi = 1;
    int stabilization_n = 1;  // sums constant from here on; averages only shrink
    bool nonconforming = false;
};

namespace hl_detail {

/// One level sweep along coordinate `coord` at digit position `lev`:
/// S(x) <- sum over c in F_q of S(x + c t^lev Qs e_coord). Reads outside the
/// stored region are zero, which is exact as long as the region contains
/// every point whose translate can reach the support. Returns whether any
/// stored value changed.
template <class T>
bool sweep(const Field& F, GridFunction<T>& S, const Poly& Qs, int coord, int lev) {
    const Poly base = mul(F, Qs, Poly::monomial(1, lev));
    std::vector<std::uint64_t> shifts(F.q());
    for (int c = 0; c < F.q(); ++c) shifts[c] = poly_code(F, scale(F, Fe(c), base));
    GridFunction<T> old = S;
    std::vector<std::uint64_t> y(S.arity);
    bool changed = false;
    for (std::uint64_t idx = 0; idx < S.size(); ++idx) {
        S.decode(idx, y);
        const std::uint64_t yc = y[coord];
        T acc{};
        for (int c = 0; c < F.q(); ++c) {
            y[coord] = code_add(F, yc, shifts[c]);
            acc += old.get(y);
        }
        if (acc != S.values[idx]) changed = true;
        S.values[idx] = acc;
    }
    return changed;
}

}  // namespace hl_detail

/// Pointwise sup over n in [n_lo, n_hi] of the long averages of |F|.
/// n_lo must respect H_s = max(Ns, Rs^4) unless the parameters carry an
/// override stamp; every coordinate needs r_i n_lo >= Rs.
inline HlMaximalResult hl_maximal(const Field& F, const Grid& Fin, const OperatorParams& P,
                                  int n_lo, int n_hi) {
    const int k = Fin.arity;
    if (k != P.sys.k()) throw domain_error("hl_maximal: arity mismatch");
    std::int64_t rs4 = std::int64_t(P.Rs) * P.Rs * P.Rs * P.Rs;
    const int H = int(std::max<std::int64_t>(P.Ns, rs4));
    if (n_lo < H && !P.nonconforming)
        throw domain_error("hl_maximal: range starts below H_s and no override is set");
    for (int r : P.sys.K)
        if (r * n_lo < P.Rs) throw domain_error("hl_maximal: r_i n < Rs at range start");
    if (n_hi < n_lo) throw domain_error("hl_maximal: empty range");

    std::vector<int> region(k);
    for (int i = 0; i < k; ++i) region[i] = std::max(Fin.box[i], P.sys.K[i] * n_hi);

    Grid S = Grid::zeros(F, region);
    std::vector<std::uint64_t> codes(k);
    for (std::uint64_t idx = 0; idx < S.size(); ++idx) {
        S.decode(idx, codes);
        S.values[idx] = std::abs(Fin.get(codes));
    }

    HlMaximalResult res;
    res.n_lo = n_lo;
    res.n_hi = n_hi;
    res.nonconforming = P.nonconforming;
    res.sup = Grid::zeros(F, region);

    std::vector<int> level(k, 0);
    res.stabilization_n = n_lo;
    for (int n = n_lo; n <= n_hi; ++n) {
        bool changed = false;
        for (int i = 0; i < k; ++i) {
            const int target = P.sys.K[i] * n - P.Rs;
            while (level[i] < target) {
                changed |= hl_detail::sweep(F, S, P.Qs, i, level[i]);
                ++level[i];
            }
        }
        if (changed) res.stabilization_n = n;
        int total_level = 0;
        for (int i = 0; i < k; ++i) total_level += level[i];
        const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)total_level));
        for (std::uint64_t idx = 0; idx < S.size(); ++idx)
            res.sup.values[idx] =
                std::max(res.sup.values[idx].real(), S.values[idx].real() * inv);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Weak (1,1) level-set inequality, exact for integer-valued inputs.
// ---------------------------------------------------------------------------

struct Weak11Row {
    Rational alpha;
    std::uint64_t level_count = 0;
    bool pass = false;  // count * alpha <= ||F||_1, exactly
};

struct Weak11Report {
    std::vector<Weak11Row> rows;
    std::int64_t l1 = 0;
    int n_lo = 1, n_hi = 1;
    bool nonconforming = false;
    bool pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

/// Level sets of the long-average maximal function of a nonnegative
/// integer-valued F against the l1 bound: mu({L* > alpha}) <= ||F||_1/alpha.
/// The count is taken over all of F_q[t]^k: beyond the computed range the
/// averages are at most ||F||_1 / |B_{n_hi}| <= min(alpha), so no point
/// outside the region can enter any requested level set.
inline Weak11Report weak_11_check(const Field& F, const Grid& Fin, const OperatorParams& P,
                                  std::vector<Rational> alphas, int n_lo) {
    const int k = Fin.arity;
    // exact integer values required
    std::int64_t l1 = 0;
    for (const auto& v : Fin.values) {
        if (v.imag() != 0.0 || v.real() < 0 || double(std::llround(v.real())) != v.real())
            throw domain_error("weak_11_check: F must be nonnegative integer valued");
        l1 += std::llround(v.real());
    }
    for (const auto& a : alphas)
        if (a.num <= 0) throw domain_error("weak_11_check: alpha must be positive");

    Rational amin = alphas.front();
    for (const auto& a : alphas)
        if (rat_less(a, amin)) amin = a;

    // smallest n_hi with ||F||_1 / |B_{n_hi}| <= amin
    int n_hi = n_lo;
    auto box_pow = [&](int n) {
        int tot = 0;
        for (int r : P.sys.K) tot += r * n - P.Rs;
        return tot;
    };
    while (true) {
        // l1 <= amin * q^box_pow ?
        __int128 lhs = (__int128)l1 * amin.den;
        __int128 rhs = (__int128)amin.num;
        int bp = box_pow(n_hi);
        for (int i = 0; i < bp; ++i) {
            rhs *= F.q();
            if (rhs > (__int128)1 << 100) break;
        }
        if (rhs >= lhs) break;
        ++n_hi;
    }

    std::int64_t rs4 = std::int64_t(P.Rs) * P.Rs * P.Rs * P.Rs;
    const int H = int(std::max<std::int64_t>(P.Ns, rs4));
    if (n_lo < H && !P.nonconforming)
        throw domain_error("weak_11_check: range starts below H_s and no override is set");
    for (int r : P.sys.K)
        if (r * n_lo < P.Rs) throw domain_error("weak_11_check: r_i n < Rs at range start");

    std::vector<int> region(k);
    for (int i = 0; i < k; ++i) region[i] = std::max(Fin.box[i], P.sys.K[i] * n_hi);

    GridFunction<std::int64_t> S;
    {
        Grid probe = Grid::zeros(F, region);  // reuse sizing logic
        S.arity = probe.arity;
        S.q = probe.q;
        S.box = probe.box;
        S.dims = probe.dims;
        S.values.assign(probe.size(), 0);
    }
    std::vector<std::uint64_t> codes(k);
    for (std::uint64_t idx = 0; idx < S.size(); ++idx) {
        S.decode(idx, codes);
        S.values[idx] = std::llround(Fin.get(codes).real());
    }

    // per-point running best of S / q^m as an exact fraction
    std::vector<std::int64_t> bestS(S.size(), 0);
    std::vector<int> bestM(S.size(), 0);
    std::vector<int> level(k, 0);
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int i = 0; i < k; ++i) {
            const int target = P.sys.K[i] * n - P.Rs;
            while (level[i] < target) {
                hl_detail::sweep(F, S, P.Qs, i, level[i]);
                ++level[i];
            }
        }
        int m = 0;
        for (int i = 0; i < k; ++i) m += level[i];
        for (std::uint64_t idx = 0; idx < S.size(); ++idx) {
            // S[idx]/q^m > bestS[idx]/q^bestM ?
            __int128 lhs = S.values[idx];
            __int128 rhs = bestS[idx];
            for (int e = 0; e < m - bestM[idx]; ++e) rhs *= F.q();
            for (int e = 0; e < bestM[idx] - m; ++e) lhs *= F.q();
            if (lhs > rhs) {
                bestS[idx] = S.values[idx];
                bestM[idx] = m;
            }
        }
    }

    Weak11Report rep;
    rep.l1 = l1;
    rep.n_lo = n_lo;
    rep.n_hi = n_hi;
    rep.nonconforming = P.nonconforming;
    for (const auto& a : alphas) {
        Weak11Row row;
        row.alpha = a;
        for (std::uint64_t idx = 0; idx < S.size(); ++idx) {
            // bestS/q^bestM > a  <=>  bestS * a.den > a.num * q^bestM
            __int128 lhs = (__int128)bestS[idx] * a.den;
            __int128 rhs = (__int128)a.num;
            for (int e = 0; e < bestM[idx]; ++e) rhs *= F.q();
            if (lhs > rhs) ++row.level_count;
        }
        // count <= l1 / alpha  <=>  count * a.num <= l1 * a.den
        row.pass = (__int128)row.level_count * a.num <= (__int128)l1 * a.den;
        rep.rows.push_back(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Greedy covering selection.
// ---------------------------------------------------------------------------

struct VitaliRequest {
    std::vector<std::uint64_t> point;  // coordinate codes
    int n = 1;                         // requested scale
};

struct VitaliSelection {
    std::vector<std::size_t> selected;  // indices into the request list
    bool covers_all = true;
};

/// Membership of y in x + B(n) where B(n) = {Qs u : deg u_i < r_i n - Rs}.
inline bool in_translate(const Field& F, const OperatorParams& P,
                         const std::vector<std::uint64_t>& x,
                         const std::vector<std::uint64_t>& y, int n) {
    for (int i = 0; i < (int)x.size(); ++i) {
        Poly diff = poly_from_code(F, code_sub(F, y[i], x[i]));
        auto [quot, rem] = divmod(F, diff, P.Qs);
        if (!rem.is_zero()) return false;
        if (!(quot.degree() < P.sys.K[i] * n - P.Rs)) return false;
    }
    return true;
}

/// Greedy selection: scan requests by scale descending (ties by canonical
/// point order) and keep each whose point no selected translate covers.
/// Selected translates are pairwise disjoint and cover every request point.
inline VitaliSelection vitali_select(const Field& F, const std::vector<VitaliRequest>& requests,
                                     const OperatorParams& P) {
    std::int64_t rs4 = std::int64_t(P.Rs) * P.Rs * P.Rs * P.Rs;
    const int H = int(std::max<std::int64_t>(P.Ns, rs4));
    for (const auto& r : requests) {
        if (r.n < H && !P.nonconforming)
            throw domain_error("vitali_select: scale below H_s and no override is set");
        for (int ri : P.sys.K)
            if (ri * r.n < P.Rs) throw domain_error("vitali_select: r_i n < Rs");
    }
    std::vector<std::size_t> order(requests.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (requests[a].n != requests[b].n) return requests[a].n > requests[b].n;
        return requests[a].point < requests[b].point;
    });
    VitaliSelection sel;
    for (std::size_t i : order) {
        bool covered = false;
        for (std::size_t j : sel.selected)
            if (in_translate(F, P, requests[j].point, requests[i].point, requests[j].n)) {
                covered = true;
                break;
            }
        if (!covered) sel.selected.push_back(i);
    }
    return sel;
}

// ---------------------------------------------------------------------------
// Binary-splitting maximal bound over a finite projection range.
// ---------------------------------------------------------------------------

struct DyadicReport {
    int M = 0;
    double bound = 0;             // (M+1)^2 ||g||^2
    double attained = 0;          // sum_x sup_m |P_m g|^2
    double ratio = 0;             // attained / ||g||^2
    bool bound_pass = false;
    bool freq_pass = true;        // per-level difference sums <= 1 at all samples
    int freq_samples = 0;
    int cap = 0;                  // applied sequence-length cap, 0 = none
    bool pass() const { return bound_pass && freq_pass; }
};

/// Checks sum_x sup_m |P_m g(x)|^2 <= (M+1)^2 ||g||^2 where P_m walks the
/// projection family backwards from the top of [n_lo, n_hi) (P_0 = 0 and the
/// family is frozen at its smallest scale past the range), M = ceil(log2 L).
/// Also checks, at each sampled exact frequency, that every binary level's
/// difference sum is at most 1. Sequence length is capped at `cap` (default
/// 1024) by shrinking the range from below.
inline DyadicReport dyadic_maximal_check(const Field& F, std::vector<Grid> proj, const Grid& g,
                                         const ExponentSystem& sys, int s, int n_lo,
                                         const std::vector<FrequencyVec>& freq_samples,
                                         std::optional<Rational> rho_override = std::nullopt,
                                         int cap = 1024) {
    if (proj.empty()) throw domain_error("dyadic_maximal_check: empty projection sequence");
    for (const auto& pgrid : proj)
        if (pgrid.arity != g.arity) throw domain_error("dyadic_maximal_check: shape mismatch");
    DyadicReport rep;
    if ((int)proj.size() > cap) {
        const int drop = (int)proj.size() - cap;
        proj.erase(proj.begin(), proj.begin() + drop);
        n_lo += drop;
        rep.cap = cap;
    }
    const int L = (int)proj.size();
    int M = 0;
    while ((1 << M) < L) ++M;
    rep.M = M;

    // P_m g for m in [0, 2^M]; index map: P_m = proj[L - m] for 1 <= m <= L
    auto pm_grid = [&](int m) -> const Grid* {
        if (m == 0) return nullptr;
        return m <= L ? &proj[L - m] : &proj[0];
    };

    std::vector<int> ubox(g.arity, 0);
    for (const auto& pgrid : proj)
        for (int i = 0; i < g.arity; ++i) ubox[i] = std::max(ubox[i], pgrid.box[i]);
    Grid sup = Grid::zeros(F, ubox);
    std::vector<std::uint64_t> codes(g.arity);
    for (std::uint64_t idx = 0; idx < sup.size(); ++idx) {
        sup.decode(idx, codes);
        double m = 0;
        for (int mm = 0; mm <= (1 << M); ++mm) {
            const Grid* pg = pm_grid(mm);
            m = std::max(m, pg ? std::abs(pg->get(codes)) : 0.0);
        }
        sup.values[idx] = m;
    }
    double attained = 0;
    for (const auto& v : sup.values) attained += std::norm(v);
    const double g2 = l2_norm_sq(g);
    rep.attained = attained;
    rep.ratio = g2 > 0 ? attained / g2 : 0;
    rep.bound = double(M + 1) * (M + 1) * g2;
    rep.bound_pass = attained <= rep.bound + 1e-9;

    // exact per-frequency check of the level difference sums
    auto pm_mult = [&](int m, const FrequencyVec& alpha) -> int {
        if (m == 0) return 0;
        const int n = (m <= L) ? (n_lo + L - m) : n_lo;
        OperatorParams P = make_operator_params(F, sys, s, n, rho_override);
        return multiplier_D_value(F, alpha, P);
    };
    rep.freq_samples = (int)freq_samples.size();
    for (const auto& alpha : freq_samples) {
        std::vector<int> vals(std::size_t(1 << M) + 1);
        for (int m = 0; m <= (1 << M); ++m) vals[m] = pm_mult(m, alpha);
        for (int lev = 0; lev <= M; ++lev) {
            int sum = 0;
            for (int d = 0; d < (1 << (M - lev)); ++d) {
                int diff = vals[(d + 1) << lev] - vals[d << lev];
                sum += diff * diff;
            }
            if (sum > 1) rep.freq_pass = false;
        }
    }
    return rep;
}

}  // namespace ffcm
