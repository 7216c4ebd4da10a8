#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffcm/expsum.hpp"
#include "ffcm/poly.hpp"
#include "ffcm/tail_series.hpp"
#include "ffcm/util.hpp"

namespace ffcm {

/// Reduced rational center a/h: h monic, deg a_i < deg h, joint gcd 1.
/// For h = 1 the only center is the zero vector.
struct RationalPoint {
    std::vector<Poly> a;
    Poly h = Poly::one();

    static RationalPoint make(const Field& F, std::vector<Poly> a, Poly h) {
        if (h.is_zero()) throw domain_error("RationalPoint: zero denominator");
        if (!h.is_monic()) throw domain_error("RationalPoint: h must be monic");
        for (const auto& ai : a)
            if (!(ai.degree() < h.degree()))
                throw domain_error("RationalPoint: deg a_i must be < deg h");
        std::vector<Poly> items = a;
        items.push_back(h);
        if (!gcd_monic(F, items).is_one())
            throw domain_error("RationalPoint: joint gcd is not 1");
        RationalPoint r;
        r.a = std::move(a);
        r.h = std::move(h);
        return r;
    }

    static RationalPoint zero(int k) {
        RationalPoint r;
        r.a.assign(k, Poly::zero());
        return r;
    }

    int k() const { return (int)a.size(); }

    FrequencyVec to_frequencies(const Field& F) const {
        FrequencyVec v;
        for (const auto& ai : a) v.push_back(Frequency::from_rational(F, ai, h));
        return v;
    }

    friend bool operator==(const RationalPoint& x, const RationalPoint& y) {
        return x.h == y.h && x.a == y.a;
    }
};

/// Scale-n major-arc geometry for an exponent set. Box membership at
/// coordinate i is ord(alpha_i - a_i/h) < -r_i n + n/(4 r*^2); the center
/// degree bound is deg h < rho n. All thresholds are exact rationals compared
/// by integer cross multiplication. A rho override marks the scale (and every
/// report derived from it) as nonconforming.
struct ArcScale {
    int n = 1;
    ExponentSystem sys;
    Rational rho_effective;
    bool nonconforming = false;

    ArcScale(int n_, ExponentSystem sys_, std::optional<Rational> rho_override = std::nullopt)
        : n(n_), sys(std::move(sys_)) {
        if (n < 1) throw domain_error("ArcScale: n must be >= 1");
        rho_effective = sys.rho;
        if (rho_override) {
            rho_effective = *rho_override;
            nonconforming = true;
        }
    }

    /// Strict bound on ord(alpha_i - a_i/h) at coordinate i.
    Rational box_threshold(int i) const {
        const std::int64_t rs = sys.r_star;
        // -r_i n + n / (4 r*^2)
        return Rational(-std::int64_t(sys.K[i]) * n * 4 * rs * rs + n, 4 * rs * rs);
    }

    /// Largest valid center degree: deg h < rho_effective * n.
    int max_center_degree() const {
        Rational bound = rho_effective * Rational(n);
        std::int64_t d = strict_floor(bound);
        return d < 0 ? -1 : int(d);
    }
};

/// ord of the difference of one frequency coordinate and one exact rational
/// a/h. Exact for rational frequencies. For tails, kNegInf means "zero to the
/// usable precision", and *decidable_below reports that precision bound.
inline int ord_diff(const Field& F, const Frequency& alpha, const Poly& a, const Poly& h,
                    int* decidable_below = nullptr) {
    if (decidable_below) *decidable_below = std::numeric_limits<int>::max();
    if (alpha.rational) {
        // b/g - a/h = (b h - a g) / (g h)
        Poly num = sub(F, mul(F, alpha.num, h), mul(F, a, alpha.den));
        if (num.is_zero()) return kNegInf;
        return num.degree() - alpha.den.degree() - h.degree();
    }
    const int N = alpha.tail.precision;
    TailSeries diff = tail_add(F, alpha.tail, tail_neg(F, expand_rational(F, a, h, N)));
    if (decidable_below) *decidable_below = -N;
    return ord_of(diff);
}

/// Strict test ord < threshold where ord may be known only as "below -P"
/// (tail zero to precision P, represented by kNegInf with decidable_below =
/// -P). Exact zeros carry decidable_below = INT_MAX. A bound that cannot be
/// decided at the available precision throws precision_error.
inline bool ord_strictly_below(int ord, int decidable_below, const Rational& threshold) {
    if (!is_neg_inf(ord)) return int_lt_rat(ord, threshold);
    if (decidable_below == std::numeric_limits<int>::max()) return true;  // exactly zero
    // True ord < decidable_below; conclusive iff decidable_below <= threshold.
    if (rat_less(threshold, Rational(decidable_below)))
        throw precision_error("ord comparison indeterminate at this precision");
    return true;
}

/// Membership of alpha in the box around the given center.
inline bool in_major_box(const Field& F, const FrequencyVec& alpha, const RationalPoint& center,
                         const ArcScale& scale) {
    if ((int)alpha.size() != scale.sys.k() || center.k() != scale.sys.k())
        throw domain_error("in_major_box: arity mismatch");
    for (int i = 0; i < scale.sys.k(); ++i) {
        int below = 0;
        int o = ord_diff(F, alpha[i], center.a[i], center.h, &below);
        if (!ord_strictly_below(o, below, scale.box_threshold(i))) return false;
    }
    return true;
}

/// All reduced centers a/h with deg h = s, in canonical (h, then a) order.
inline std::vector<RationalPoint> enumerate_centers(const Field& F, int s,
                                                    const ExponentSystem& sys) {
    std::vector<RationalPoint> out;
    for (const Poly& h : enumerate_monic(F, s))
        for (auto& a : enumerate_a_h(F, h, sys.k())) {
            RationalPoint c;
            c.a = std::move(a);
            c.h = h;
            out.push_back(std::move(c));
        }
    return out;
}

/// All centers admissible at the scale (deg h < rho n).
inline std::vector<RationalPoint> enumerate_centers_at_scale(const Field& F,
                                                             const ArcScale& scale) {
    std::vector<RationalPoint> out;
    for (int s = 0; s <= scale.max_center_degree(); ++s)
        for (auto& c : enumerate_centers(F, s, scale.sys)) out.push_back(std::move(c));
    return out;
}

struct Classification {
    bool major = false;
    std::optional<RationalPoint> center;
};

/// Major with its unique center when alpha lies in some admissible box,
/// Minor otherwise. Uniqueness comes from box disjointness.
inline Classification classify(const Field& F, const FrequencyVec& alpha, const ArcScale& scale) {
    for (const auto& c : enumerate_centers_at_scale(F, scale))
        if (in_major_box(F, alpha, c, scale)) return Classification{true, c};
    return Classification{false, std::nullopt};
}

struct DisjointnessReport {
    std::uint64_t checked_pairs = 0;
    bool nonconforming = false;
    struct Violation {
        RationalPoint first, second;
    };
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};

/// Pairwise disjointness of all boxes at the scale. Two same-scale ultrametric
/// boxes around distinct centers meet iff every coordinate of the center
/// difference lies strictly below the box threshold, so that is the violation
/// test; center differences are exact rationals, never indeterminate.
inline DisjointnessReport check_disjointness(const Field& F, const ArcScale& scale) {
    DisjointnessReport rep;
    rep.nonconforming = scale.nonconforming;
    auto centers = enumerate_centers_at_scale(F, scale);
    for (size_t i = 0; i < centers.size(); ++i)
        for (size_t j = i + 1; j < centers.size(); ++j) {
            ++rep.checked_pairs;
            bool all_below = true;
            for (int c = 0; c < scale.sys.k() && all_below; ++c) {
                Frequency fi = Frequency::from_rational(F, centers[i].a[c], centers[i].h);
                int o = ord_diff(F, fi, centers[j].a[c], centers[j].h);
                all_below = is_neg_inf(o) || int_lt_rat(o, scale.box_threshold(c));
            }
            if (all_below)
                rep.violations.push_back(DisjointnessReport::Violation{centers[i], centers[j]});
        }
    return rep;
}

struct IdentityReport {
    bool membership_ok = false;
    bool exact_equal = false;     // cyclotomic-integer equality
    double complex_error = 0.0;   // |lhs - rhs| after conversion
    bool pass(double tol = 1e-9) const {
        return membership_ok && exact_equal && complex_error <= tol;
    }
};

/// Checks the factorization of the normalized Weyl sum at alpha = center +
/// beta: value(alpha) = Lambda(center) * value(beta), exactly in Z[w] via
/// weyl(alpha) * q^(deg h) == gauss_raw(center) * weyl(beta).
inline IdentityReport verify_major_arc_identity(const Field& F, const RationalPoint& center,
                                                const std::vector<TailSeries>& beta,
                                                const ArcScale& scale) {
    const int k = scale.sys.k();
    if ((int)beta.size() != k) throw domain_error("verify_major_arc_identity: arity mismatch");
    IdentityReport rep;

    // alpha_i = a_i/h + beta_i, as a tail at the beta precision
    FrequencyVec alpha;
    for (int i = 0; i < k; ++i) {
        TailSeries center_tail = expand_rational(F, center.a[i], center.h, beta[i].precision);
        alpha.push_back(Frequency::from_tail(tail_add(F, center_tail, beta[i])));
    }
    rep.membership_ok = in_major_box(F, alpha, center, scale);
    if (!rep.membership_ok) return rep;

    FrequencyVec beta_freqs;
    for (const auto& b : beta) beta_freqs.push_back(Frequency::from_tail(b));

    CycloSum w_alpha = weyl_sum(F, alpha, scale.sys, scale.n);
    CycloSum w_beta = weyl_sum(F, beta_freqs, scale.sys, scale.n);
    GaussSum lambda = gauss_sum(F, center.a, center.h, scale.sys);

    const std::int64_t qs = std::int64_t(ipow((unsigned)F.q(), (unsigned)lambda.deg_h));
    CycloInt lhs = CycloInt::from_sum(w_alpha) * qs;
    CycloInt rhs = CycloInt::from_sum(lambda.sum) * CycloInt::from_sum(w_beta);
    rep.exact_equal = (lhs == rhs);

    const double qn = double(ipow((unsigned)F.q(), (unsigned)scale.n));
    rep.complex_error =
        std::abs(w_alpha.to_complex() / qn - lambda.value() * (w_beta.to_complex() / qn));
    return rep;
}

/// Frame membership: inside the box but outside the translated core box
/// {ord(alpha_i - a_i/h) < -r_i n for all i}. The frame is only ever tested
/// pointwise, never materialized.
inline bool in_frame(const Field& F, const FrequencyVec& alpha, const RationalPoint& center,
                     const ArcScale& scale) {
    if (!in_major_box(F, alpha, center, scale)) return false;
    for (int i = 0; i < scale.sys.k(); ++i) {
        int below = 0;
        int o = ord_diff(F, alpha[i], center.a[i], center.h, &below);
        if (!ord_strictly_below(o, below, Rational(-std::int64_t(scale.sys.K[i]) * scale.n)))
            return true;  // this coordinate escapes the core box
    }
    return false;
}

}  // namespace ffcm
