#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "ffcm/arcs.hpp"
#include "ffcm/expsum.hpp"
#include "ffcm/tail_series.hpp"

namespace ffcm {

/// Digit order: j <= r digit by digit in base p.
inline bool lucas_leq(long long j, long long r, int p) {
    if (j < 1 || r < 1) throw domain_error("lucas_leq: arguments must be >= 1");
    while (j || r) {
        if (j % p > r % p) return false;
        j /= p;
        r /= p;
    }
    return true;
}

/// C(r, j) mod p by the digit product rule, with each digit binomial taken
/// from a small Pascal triangle. Independent of lucas_leq.
inline int binom_mod_p(long long r, long long j, int p) {
    if (j < 0 || r < 0) throw domain_error("binom_mod_p: negative arguments");
    // Pascal triangle mod p for arguments < p
    std::vector<std::vector<int>> pas(p, std::vector<int>(p, 0));
    for (int i = 0; i < p; ++i) {
        pas[i][0] = 1;
        for (int k = 1; k <= i; ++k)
            pas[i][k] = (pas[i - 1][k - 1] + (k <= i - 1 ? pas[i - 1][k] : 0)) % p;
    }
    int result = 1;
    while (r || j) {
        int rd = int(r % p), jd = int(j % p);
        if (jd > rd) return 0;
        result = (result * pas[rd][jd]) % p;
        r /= p;
        j /= p;
    }
    return result;
}

/// S(K) = { j >= 1 : j digit-below some r in K }, by digit enumeration.
inline std::set<int> shadow(const std::set<int>& K, int p) {
    if (K.empty()) throw domain_error("shadow: empty exponent set");
    std::set<int> out;
    const int top = *K.rbegin();
    for (int j = 1; j <= top; ++j)
        for (int r : K)
            if (lucas_leq(j, r, p)) {
                out.insert(j);
                break;
            }
    return out;
}

/// Same set computed through the binomial criterion p does not divide C(r,j).
inline std::set<int> shadow_binomial(const std::set<int>& K, int p) {
    if (K.empty()) throw domain_error("shadow: empty exponent set");
    std::set<int> out;
    const int top = *K.rbegin();
    for (int j = 1; j <= top; ++j)
        for (int r : K)
            if (binom_mod_p(r, j, p) != 0) {
                out.insert(j);
                break;
            }
    return out;
}

/// K* = { k in K : p does not divide k, and p^nu k never lands in S(K) }.
/// The nu scan stops once p^nu k exceeds max S(K).
inline std::set<int> k_star(const std::set<int>& K, int p) {
    std::set<int> S = shadow(K, p);
    const int top = *S.rbegin();
    std::set<int> out;
    for (int k : K) {
        if (k % p == 0) continue;
        bool excluded = false;
        for (long long m = (long long)k * p; m <= top; m *= p)
            if (S.count(int(m))) {
                excluded = true;
                break;
            }
        if (!excluded) out.insert(k);
    }
    return out;
}

struct ShadowReport {
    std::set<int> K;
    int p = 2;
    std::set<int> shadow_set;
    std::set<int> kstar;
    std::set<int> maximal;  // maximal elements of K in the digit order
};

inline ShadowReport shadow_report(const std::set<int>& K, int p) {
    ShadowReport rep;
    rep.K = K;
    rep.p = p;
    rep.shadow_set = shadow(K, p);
    rep.kstar = k_star(K, p);
    for (int k : K) {
        bool maximal = true;
        for (int r : K)
            if (r != k && lucas_leq(k, r, p)) {
                maximal = false;
                break;
            }
        if (maximal) rep.maximal.insert(k);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Brute-force rational approximation.
// ---------------------------------------------------------------------------

struct ApproxWitness {
    Poly a;
    Poly g;                // monic
    int deg_g = 0;
    int ord_gap = 0;       // ord(g alpha - a); kNegInf = zero at the examined precision
    int gap_precision = 0; // the gap was examined down to this exponent
};

/// Integral (polynomial) part of g * alpha for a tail alpha.
inline Poly integral_part(const Field& F, const Poly& g, const TailSeries& alpha) {
    if (g.is_zero()) return Poly::zero();
    Poly a;
    a.c.assign(std::max(g.degree(), 0) + 1, 0);
    for (int i = 0; i <= g.degree(); ++i) {
        Fe acc = 0;
        for (int j = i + 1; j <= g.degree(); ++j)
            acc = F.add(acc, F.mul(g.coeff(j), alpha.coeff_at(i - j)));
        a.c[i] = acc;
    }
    a.trim();
    return a;
}

/// Best approximation over all monic g with deg g <= maxDeg: the pair (a, g)
/// minimizing ord(g alpha - a), where a is forced to the integral part of
/// g alpha (the unique minimizer for fixed g). Ties prefer smaller deg g,
/// then canonical order. rn is the caller's scale r_i * n, recorded so the
/// witness can be read against thresholds of the form -rn + slack.
inline ApproxWitness best_rational_approx(const Field& F, const TailSeries& alpha, int rn,
                                          int maxDeg) {
    if (maxDeg < 0) throw domain_error("best_rational_approx: negative degree budget");
    if (alpha.precision < rn + maxDeg + 4)
        throw precision_error("best_rational_approx: needs precision >= rn + maxDeg + 4");
    ApproxWitness best;
    bool have = false;
    for (int d = 0; d <= maxDeg; ++d) {
        for (const Poly& g : enumerate_monic(F, d)) {
            TailSeries frac = scalar_mul(F, g, alpha);
            int gap = ord_of(frac);
            int seen_to = -frac.precision;
            // strictly better ord wins; kNegInf (zero to precision) is best
            bool better;
            if (!have)
                better = true;
            else if (is_neg_inf(gap) && !is_neg_inf(best.ord_gap))
                better = true;
            else if (!is_neg_inf(gap) && !is_neg_inf(best.ord_gap))
                better = gap < best.ord_gap;
            else
                better = false;
            if (better) {
                best.g = g;
                best.deg_g = d;
                best.a = integral_part(F, g, alpha);
                best.ord_gap = gap;
                best.gap_precision = seen_to;
                have = true;
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Empirical inverse-theorem verification and decay profiling.
// ---------------------------------------------------------------------------

struct InverseSample {
    double eta = 0.0;      // n - log_q |S|
    int requirement = 0;   // minimal budget t with deg g <= t and gap + r_i n < t
    bool witness_found = false;
};

struct InverseReport {
    int n = 0;
    int trials = 0;
    int usable = 0;       // nonzero sum, eta <= etaMax
    std::vector<InverseSample> samples;
    double C_hat = 0.0, D_hat = 0.0;  // least squares on (eta, requirement)
    double residual = 0.0;
    bool all_witnessed = true;
};

namespace inverse_detail {

inline TailSeries random_tail(const Field& F, int precision, std::mt19937_64& rng) {
    TailSeries t(precision);
    std::uniform_int_distribution<int> d(0, F.q() - 1);
    for (auto& c : t.c) c = Fe(d(rng));
    return t;
}

/// Random tail with exact ord = o (o <= -1): top coefficient nonzero.
inline TailSeries random_tail_with_ord(const Field& F, int precision, int o,
                                       std::mt19937_64& rng) {
    if (o > -1 || -o > precision) throw domain_error("random_tail_with_ord: bad target ord");
    TailSeries t(precision);
    std::uniform_int_distribution<int> d(0, F.q() - 1);
    std::uniform_int_distribution<int> dnz(1, F.q() - 1);
    t.set_coeff(o, Fe(dnz(rng)));
    for (int j = -o + 1; j <= precision; ++j) t.set_coeff(-j, Fe(d(rng)));
    return t;
}

inline void fit_line(const std::vector<double>& xs, const std::vector<double>& ys, double& slope,
                     double& intercept, double& residual) {
    const size_t n = xs.size();
    if (n == 0) {
        slope = intercept = residual = 0;
        return;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = double(n) * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) {
        slope = 0;
        intercept = sy / double(n);
    } else {
        slope = (double(n) * sxy - sx * sy) / denom;
        intercept = (sy - slope * sx) / double(n);
    }
    residual = 0;
    for (size_t i = 0; i < n; ++i) {
        double e = ys[i] - (slope * xs[i] + intercept);
        residual += e * e;
    }
    residual = std::sqrt(residual / double(n));
}

}  // namespace inverse_detail

/// Samples frequency vectors (rational, near-rational and generic), measures
/// eta from the exact sum, and for each usable sample searches the smallest
/// budget t such that every coordinate has a witness with deg g <= t and
/// ord(g alpha_i - a) < -r_i n + t. Reports the least-squares frontier fit
/// requirement ~ C_hat * eta + D_hat.
inline InverseReport verify_weyl_inverse(const Field& F, const ExponentSystem& sys, int n,
                                         int trials, double etaMax, int budgetMax,
                                         std::mt19937_64& rng) {
    if (!sys.all_coprime())
        throw domain_error(
            "verify_weyl_inverse: some exponent shares a factor with p; use the restricted "
            "digit-maximal mode (witnesses exist only for digit-maximal exponents)");
    InverseReport rep;
    rep.n = n;
    rep.trials = trials;
    const int precision = sys.r_star * n + budgetMax + 8;
    const double qd = double(F.q());

    std::uniform_int_distribution<int> kind(0, 3);
    for (int t = 0; t < trials; ++t) {
        // sample one frequency vector as tails
        std::vector<TailSeries> alpha;
        for (int i = 0; i < sys.k(); ++i) {
            int kd = kind(rng);
            if (kd == 0) {
                // exact rational with a small denominator
                std::uniform_int_distribution<int> sdist(1, 3);
                int s = sdist(rng);
                auto centers = enumerate_centers(F, s, make_exponent_system({1}, F.p()));
                std::uniform_int_distribution<size_t> cdist(0, centers.size() - 1);
                const auto& c = centers[cdist(rng)];
                alpha.push_back(expand_rational(F, c.a[0], c.h, precision));
            } else if (kd == 1) {
                // rational plus a deep tail
                std::uniform_int_distribution<int> sdist(1, 2);
                int s = sdist(rng);
                auto centers = enumerate_centers(F, s, make_exponent_system({1}, F.p()));
                std::uniform_int_distribution<size_t> cdist(0, centers.size() - 1);
                const auto& c = centers[cdist(rng)];
                TailSeries base = expand_rational(F, c.a[0], c.h, precision);
                TailSeries deep = inverse_detail::random_tail_with_ord(
                    F, precision, -(sys.K[i] * n + 2), rng);
                alpha.push_back(tail_add(F, base, deep));
            } else {
                alpha.push_back(inverse_detail::random_tail(F, precision, rng));
            }
        }
        FrequencyVec fv;
        for (const auto& a : alpha) fv.push_back(Frequency::from_tail(a));
        CycloSum S = weyl_sum(F, fv, sys, n);
        double absS = std::abs(S.to_complex());
        if (absS <= 1e-12) continue;
        double eta = n - std::log(absS) / std::log(qd);
        if (eta > etaMax) continue;

        InverseSample sample;
        sample.eta = eta;
        int requirement = 0;
        bool found_all = true;
        for (int i = 0; i < sys.k(); ++i) {
            int best_req = -1;
            for (int budget = 0; budget <= budgetMax; ++budget) {
                ApproxWitness w = best_rational_approx(F, alpha[i], sys.K[i] * n, budget);
                int gap_term = is_neg_inf(w.ord_gap)
                                   ? 0
                                   : w.ord_gap + sys.K[i] * n + 1;  // strict inequality margin
                int req = std::max(w.deg_g, gap_term);
                if (req <= budget) {
                    best_req = req;
                    break;
                }
            }
            if (best_req < 0) {
                found_all = false;
                break;
            }
            requirement = std::max(requirement, best_req);
        }
        sample.witness_found = found_all;
        sample.requirement = requirement;
        if (!found_all) rep.all_witnessed = false;
        rep.samples.push_back(sample);
        ++rep.usable;
    }

    std::vector<double> xs, ys;
    for (const auto& s : rep.samples)
        if (s.witness_found) {
            xs.push_back(s.eta);
            ys.push_back(double(s.requirement));
        }
    inverse_detail::fit_line(xs, ys, rep.C_hat, rep.D_hat, rep.residual);
    return rep;
}

struct DecayRow {
    int n = 0;
    int delta = 0;
    double max_abs = 0.0;   // max over samples of |normalized sum|
    bool trivial = false;   // delta <= 0: bound 1, recorded only
    bool conforming = false;  // delta < n/2
};

struct DecayProfile {
    int coordinate = 0;
    std::vector<DecayRow> rows;
    double c_hat = 0.0;     // fitted exponent in max <= q^(-c delta)
    double intercept = 0.0;
    double residual = 0.0;
};

/// For each (n, delta) in range, samples beta with ord beta_i = delta - r_i n
/// (the maximum-attaining coordinate) and records the worst normalized sum.
/// The fit uses conforming rows with delta >= 1 only.
inline DecayProfile decay_profile(const Field& F, const ExponentSystem& sys, int coordinate,
                                  std::vector<int> nRange, std::vector<int> deltaRange,
                                  int samplesPerCell, std::mt19937_64& rng) {
    if (!sys.all_coprime())
        throw domain_error("decay_profile: exponents must all be coprime to p");
    if (coordinate < 0 || coordinate >= sys.k())
        throw domain_error("decay_profile: coordinate out of range");
    DecayProfile prof;
    prof.coordinate = coordinate;
    for (int n : nRange) {
        const int precision = sys.r_star * std::max(n - 1, 0) + 8;
        for (int delta : deltaRange) {
            DecayRow row;
            row.n = n;
            row.delta = delta;
            row.conforming = 2 * delta < n;
            if (delta <= 0) {
                row.trivial = true;
                row.max_abs = 1.0;
                prof.rows.push_back(row);
                continue;
            }
            const int target_ord = delta - sys.K[coordinate] * n;
            if (target_ord > -1 || -target_ord > precision) {
                row.trivial = true;
                row.max_abs = 1.0;
                prof.rows.push_back(row);
                continue;
            }
            const double qn = double(ipow((unsigned)F.q(), (unsigned)n));
            for (int s = 0; s < samplesPerCell; ++s) {
                FrequencyVec fv;
                for (int i = 0; i < sys.k(); ++i) {
                    if (i == coordinate) {
                        fv.push_back(Frequency::from_tail(
                            inverse_detail::random_tail_with_ord(F, precision, target_ord, rng)));
                    } else {
                        // keep the other coordinates at or below the same offset
                        int o = std::min(delta - sys.K[i] * n, -1);
                        if (-o > precision)
                            fv.push_back(Frequency::from_tail(TailSeries(precision)));
                        else
                            fv.push_back(Frequency::from_tail(
                                inverse_detail::random_tail_with_ord(F, precision, o, rng)));
                    }
                }
                CycloSum S = weyl_sum(F, fv, sys, n);
                row.max_abs = std::max(row.max_abs, std::abs(S.to_complex()) / qn);
            }
            prof.rows.push_back(row);
        }
    }
    std::vector<double> xs, ys;
    const double lq = std::log(double(F.q()));
    for (const auto& row : prof.rows)
        if (row.conforming && !row.trivial && row.max_abs > 0) {
            xs.push_back(double(row.delta));
            ys.push_back(-std::log(row.max_abs) / lq);
        }
    inverse_detail::fit_line(xs, ys, prof.c_hat, prof.intercept, prof.residual);
    return prof;
}

}  // namespace ffcm
