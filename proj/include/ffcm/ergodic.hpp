#pragma once

#include <complex>
#include <random>
#include <vector>

#include "ffcm/errors.hpp"
#include "ffcm/expsum.hpp"
#include "ffcm/normal_form.hpp"
#include "ffcm/poly.hpp"

namespace ffcm {

/// Concrete measure-preserving model: X = (F_q[t]/h)^d with normalized
/// counting measure, and ell commuting translation actions, action j moving
/// x by a * v_j (componentwise, mod h). States are flat indices built from
/// the canonical codes of the d residue components.
struct FiniteSystem {
    Poly h;
    int d = 1;
    std::vector<std::vector<Poly>> directions;  // [action][component], residues mod h

    int num_actions() const { return (int)directions.size(); }
};

inline FiniteSystem build_translation_system(const Field& F, const Poly& h, int d,
                                             std::vector<std::vector<Poly>> directions) {
    if (!h.is_monic() || h.degree() < 1)
        throw domain_error("build_translation_system: h must be monic of degree >= 1");
    if (d < 1) throw domain_error("build_translation_system: d must be >= 1");
    FiniteSystem sys;
    sys.h = h;
    sys.d = d;
    for (auto& v : directions) {
        if ((int)v.size() != d) throw domain_error("build_translation_system: direction arity");
        for (auto& comp : v) comp = mod(F, comp, h);
    }
    sys.directions = std::move(directions);
    return sys;
}

inline std::uint64_t system_size(const Field& F, const FiniteSystem& sys) {
    std::uint64_t n = 1;
    for (int i = 0; i < sys.d; ++i) {
        n *= ipow((unsigned)F.q(), (unsigned)sys.h.degree());
        guard_count(n, "FiniteSystem");
    }
    return n;
}

/// State index <-> residue components.
inline std::vector<Poly> state_decode(const Field& F, const FiniteSystem& sys, std::uint64_t x) {
    const std::uint64_t comp = ipow((unsigned)F.q(), (unsigned)sys.h.degree());
    std::vector<Poly> out(sys.d);
    for (int i = 0; i < sys.d; ++i) {
        out[i] = poly_from_code(F, x % comp);
        x /= comp;
    }
    return out;
}

inline std::uint64_t state_encode(const Field& F, const FiniteSystem& sys,
                                  const std::vector<Poly>& comps) {
    const std::uint64_t comp = ipow((unsigned)F.q(), (unsigned)sys.h.degree());
    std::uint64_t x = 0, place = 1;
    for (int i = 0; i < sys.d; ++i) {
        x += poly_code(F, comps[i]) * place;
        place *= comp;
    }
    return x;
}

/// x + a * v_j mod h (the action of translation a along direction j).
inline std::uint64_t apply_translation(const Field& F, const FiniteSystem& sys, std::uint64_t x,
                                       int action, const Poly& a) {
    const std::uint64_t comp = ipow((unsigned)F.q(), (unsigned)sys.h.degree());
    std::uint64_t out = 0, place = 1;
    for (int i = 0; i < sys.d; ++i) {
        Poly cur = poly_from_code(F, x % comp);
        x /= comp;
        Poly moved = mod(F, add(F, cur, mul(F, a, sys.directions[action][i])), sys.h);
        out += poly_code(F, moved) * place;
        place *= comp;
    }
    return out;
}

/// One monomial translation term: action index moved by coeff * f^exponent.
struct IterateTerm {
    int action = 0;
    Poly coeff;
    int exponent = 1;
};

inline std::vector<IterateTerm> monomial_terms(const ExponentSystem& K) {
    std::vector<IterateTerm> t;
    for (int i = 0; i < K.k(); ++i) t.push_back(IterateTerm{i, Poly::one(), K.K[i]});
    return t;
}

inline std::vector<IterateTerm> terms_of(const PolySpec& spec) {
    std::vector<IterateTerm> t;
    for (const auto& tm : spec.terms) t.push_back(IterateTerm{tm.action, tm.coeff, tm.exponent});
    return t;
}

inline std::vector<IterateTerm> terms_of(const NormalForm& nf) {
    std::vector<IterateTerm> t;
    for (const auto& cls : nf.classes)
        for (const auto& comp : cls.components)
            t.push_back(IterateTerm{comp.action, comp.coeff, int(comp.p_power) * cls.r});
    return t;
}

/// Shift vector of the composite iterate at orbit parameter f: component c
/// moves by sum over terms of coeff * f^exponent * v_{action}[c], mod h.
inline std::vector<Poly> iterate_shift(const Field& F, const FiniteSystem& sys,
                                       const std::vector<IterateTerm>& terms, const Poly& f) {
    std::vector<Poly> shift(sys.d, Poly::zero());
    for (const auto& t : terms) {
        if (t.action < 0 || t.action >= sys.num_actions())
            throw domain_error("iterate_shift: action index out of range");
        Poly fe = pow_mod(F, f, (unsigned)t.exponent, sys.h);
        Poly w = mod(F, mul(F, t.coeff, fe), sys.h);
        for (int c = 0; c < sys.d; ++c)
            shift[c] = mod(F, add(F, shift[c], mul(F, w, sys.directions[t.action][c])), sys.h);
    }
    return shift;
}

/// Exact orbit-count distribution of the iterate shifts over deg f < n:
/// counts[state index of the shift vector] over all q^n parameters.
struct ShiftCounts {
    int n = 0;
    std::vector<std::int64_t> counts;  // indexed by state
};

inline ShiftCounts shift_counts(const Field& F, const FiniteSystem& sys,
                                const std::vector<IterateTerm>& terms, int n) {
    ShiftCounts sc;
    sc.n = n;
    sc.counts.assign(system_size(F, sys), 0);
    for_each_degree_lt(F, n, [&](const Poly& f) {
        ++sc.counts[state_encode(F, sys, iterate_shift(F, sys, terms, f))];
    });
    return sc;
}

/// A_n g(x) = q^(-n) sum over deg f < n of g(x + shift(f)).
inline std::vector<std::complex<double>> ergodic_average(const Field& F, const FiniteSystem& sys,
                                                         const std::vector<std::complex<double>>& g,
                                                         const std::vector<IterateTerm>& terms,
                                                         int n) {
    const std::uint64_t X = system_size(F, sys);
    if (g.size() != X) throw domain_error("ergodic_average: function size mismatch");
    ShiftCounts sc = shift_counts(F, sys, terms, n);
    const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)n));
    std::vector<std::complex<double>> out(X, 0.0);
    const std::uint64_t comp = ipow((unsigned)F.q(), (unsigned)sys.h.degree());
    for (std::uint64_t w = 0; w < X; ++w) {
        if (!sc.counts[w]) continue;
        auto wc = state_decode(F, sys, w);
        for (std::uint64_t x = 0; x < X; ++x) {
            // x + w componentwise (residues add without reduction overflow)
            std::uint64_t y = 0, place = 1, xx = x;
            for (int i = 0; i < sys.d; ++i) {
                Poly c = poly_from_code(F, xx % comp);
                xx /= comp;
                y += poly_code(F, mod(F, add(F, c, wc[i]), sys.h)) * place;
                place *= comp;
            }
            out[x] += double(sc.counts[w]) * inv * g[y];
        }
    }
    return out;
}

/// Per-n averages with exact stabilization detection via the integer count
/// distributions (counts at n+1 equal q times counts at n once stabilized).
struct AverageTrace {
    int n_max = 0;
    std::vector<ShiftCounts> counts;                       // n = 0..n_max
    std::vector<std::vector<std::complex<double>>> averages;
    int stabilization_n = -1;                              // -1 = none detected
    std::vector<std::complex<double>> limit;               // average at stabilization
    std::vector<bool> limit_invariant;                     // per action
    bool distribution_uniform_on_subgroup = false;
};

inline bool counts_proportional(const Field& F, const ShiftCounts& lo, const ShiftCounts& hi) {
    // hi at scale n2, lo at n1 <= n2: hi == q^(n2-n1) * lo, exactly
    __int128 scale = 1;
    for (int i = 0; i < hi.n - lo.n; ++i) scale *= F.q();
    for (size_t w = 0; w < lo.counts.size(); ++w)
        if ((__int128)hi.counts[w] != scale * lo.counts[w]) return false;
    return true;
}

inline AverageTrace convergence_probe(const Field& F, const FiniteSystem& sys,
                                      const std::vector<std::complex<double>>& g,
                                      const std::vector<IterateTerm>& terms, int n_max) {
    AverageTrace tr;
    tr.n_max = n_max;
    for (int n = 0; n <= n_max; ++n) {
        tr.counts.push_back(shift_counts(F, sys, terms, n));
        tr.averages.push_back(ergodic_average(F, sys, g, terms, n));
    }
    for (int n0 = 0; n0 <= n_max; ++n0) {
        bool ok = true;
        for (int n = n0 + 1; n <= n_max && ok; ++n)
            ok = counts_proportional(F, tr.counts[n0], tr.counts[n]);
        if (ok) {
            tr.stabilization_n = n0;
            break;
        }
    }
    if (tr.stabilization_n >= 0) {
        tr.limit = tr.averages[tr.stabilization_n];
        const auto& dist = tr.counts[tr.stabilization_n].counts;
        // invariance of the limit distribution under each generator direction
        const std::uint64_t X = system_size(F, sys);
        for (int j = 0; j < sys.num_actions(); ++j) {
            bool inv = true;
            for (const Poly& b : enumerate_degree_lt(F, sys.h.degree())) {
                for (std::uint64_t w = 0; w < X && inv; ++w) {
                    std::uint64_t wb = apply_translation(F, sys, w, j, b);
                    inv = dist[w] == dist[wb];
                }
                if (!inv) break;
            }
            tr.limit_invariant.push_back(inv);
        }
        // uniform-on-subgroup: equal nonzero counts on a translation-closed set
        std::int64_t val = 0;
        bool uniform = true;
        std::vector<std::uint64_t> support;
        for (std::uint64_t w = 0; w < X; ++w)
            if (dist[w]) {
                if (!val) val = dist[w];
                if (dist[w] != val) uniform = false;
                support.push_back(w);
            }
        if (uniform) {
            const std::uint64_t comp = ipow((unsigned)F.q(), (unsigned)sys.h.degree());
            for (std::uint64_t w1 : support) {
                for (std::uint64_t w2 : support) {
                    // w1 - w2 must stay in the support
                    auto c1 = state_decode(F, sys, w1);
                    auto c2 = state_decode(F, sys, w2);
                    std::uint64_t y = 0, place = 1;
                    for (int i = 0; i < sys.d; ++i) {
                        y += poly_code(F, mod(F, sub(F, c1[i], c2[i]), sys.h)) * place;
                        place *= comp;
                    }
                    if (!dist[y]) {
                        uniform = false;
                        break;
                    }
                }
                if (!uniform) break;
            }
        }
        tr.distribution_uniform_on_subgroup = uniform;
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Transfer between the dynamical averages and the discrete shift model.
// ---------------------------------------------------------------------------

struct TransferenceReport {
    int samples = 0;
    int identity_failures = 0;
    bool norm_ok = false;
    double max_diff = 0.0;
    bool pass() const { return identity_failures == 0 && norm_ok; }
};

/// For sampled x and a inside the degree box, and every n <= bigK, checks
/// A_n(S_a g)(x) == (M_n Phi_x)(a) where Phi_x(a) = 1_box(a) (S_a g)(x), with
/// both sides summed in the same canonical order so equality is exact. Also
/// checks the box norm identity sum_x ||Phi_x||^2 = q^(bigK sum r_i) sum|g|^2.
inline TransferenceReport transference_check(const Field& F, const FiniteSystem& sys,
                                             const std::vector<std::complex<double>>& g,
                                             const ExponentSystem& K, int bigK, int samples,
                                             std::mt19937_64& rng) {
    const int k = K.k();
    if (sys.num_actions() != k) throw domain_error("transference_check: action count != k");
    const std::uint64_t X = system_size(F, sys);
    if (g.size() != X) throw domain_error("transference_check: function size mismatch");

    auto shift_of = [&](const std::vector<Poly>& a) {
        // combined translation sum_i a_i v_i
        std::vector<Poly> comps(sys.d, Poly::zero());
        for (int i = 0; i < k; ++i)
            for (int c = 0; c < sys.d; ++c)
                comps[c] = mod(F, add(F, comps[c], mul(F, a[i], sys.directions[i][c])), sys.h);
        return comps;
    };
    auto translate = [&](std::uint64_t x, const std::vector<Poly>& comps) {
        const std::uint64_t comp = ipow((unsigned)F.q(), (unsigned)sys.h.degree());
        std::uint64_t y = 0, place = 1;
        for (int i = 0; i < sys.d; ++i) {
            Poly cur = poly_from_code(F, x % comp);
            x /= comp;
            y += poly_code(F, mod(F, add(F, cur, comps[i]), sys.h)) * place;
            place *= comp;
        }
        return y;
    };

    TransferenceReport rep;
    std::uniform_int_distribution<std::uint64_t> xdist(0, X - 1);
    std::vector<std::uint64_t> adims(k);
    for (int i = 0; i < k; ++i) adims[i] = ipow((unsigned)F.q(), (unsigned)(K.K[i] * bigK));

    for (int t = 0; t < samples; ++t) {
        const std::uint64_t x = xdist(rng);
        std::vector<Poly> a(k);
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::uint64_t> ad(0, adims[i] - 1);
            a[i] = poly_from_code(F, ad(rng));
        }
        for (int n = 0; n <= bigK; ++n) {
            const double inv = 1.0 / double(ipow((unsigned)F.q(), (unsigned)n));
            std::complex<double> lhs = 0, rhs = 0;
            for_each_degree_lt(F, n, [&](const Poly& u) {
                // left: A_n applied to the a-translate of g, evaluated at x
                std::vector<Poly> au(k);
                for (int i = 0; i < k; ++i)
                    au[i] = add(F, a[i], pow(F, u, (unsigned)K.K[i]));
                lhs += inv * g[translate(x, shift_of(au))];
                // right: shift average of Phi_x at a; the box indicator is 1
                // for every term because deg(a_i + u^{r_i}) < r_i bigK
                bool inside = true;
                for (int i = 0; i < k; ++i)
                    if (!(au[i].degree() < K.K[i] * bigK)) inside = false;
                if (inside) rhs += inv * g[translate(x, shift_of(au))];
            });
            ++rep.samples;
            double d = std::abs(lhs - rhs);
            rep.max_diff = std::max(rep.max_diff, d);
            if (lhs != rhs) ++rep.identity_failures;
        }
    }

    // norm bookkeeping over the full box
    double phi2 = 0;
    std::vector<std::uint64_t> acodes(k, 0);
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) total *= adims[i];
    guard_count(total * X, "transference_check norm");
    for (std::uint64_t ai = 0; ai < total; ++ai) {
        std::uint64_t tt = ai;
        std::vector<Poly> a(k);
        for (int i = 0; i < k; ++i) {
            a[i] = poly_from_code(F, tt % adims[i]);
            tt /= adims[i];
        }
        auto comps = shift_of(a);
        for (std::uint64_t x = 0; x < X; ++x) phi2 += std::norm(g[translate(x, comps)]);
    }
    double g2 = 0;
    for (const auto& v : g) g2 += std::norm(v);
    rep.norm_ok = std::abs(phi2 - double(total) * g2) <= 1e-9 * std::max(1.0, phi2);
    return rep;
}

// ---------------------------------------------------------------------------
// Normal-form verification on a concrete system.
// ---------------------------------------------------------------------------

struct NormalFormReport {
    int samples = 0;
    int mismatches = 0;
    int frobenius_failures = 0;
    bool pass() const { return mismatches == 0 && frobenius_failures == 0; }
};

/// Applies the original iterate and its grouped form to sampled points and
/// asserts equality, and checks additivity of each grouped class under the
/// orbit parameter (the derived actions must be genuine actions).
inline NormalFormReport verify_normal_form(const Field& F, const NormalForm& nf,
                                           const PolySpec& spec, const FiniteSystem& sys,
                                           int samples, std::mt19937_64& rng) {
    if (sys.num_actions() < spec.num_actions)
        throw domain_error("verify_normal_form: system has too few actions");
    NormalFormReport rep;
    auto lhs_terms = terms_of(spec);
    auto rhs_terms = terms_of(nf);
    const std::uint64_t X = system_size(F, sys);
    std::uniform_int_distribution<std::uint64_t> xdist(0, X - 1);
    std::uniform_int_distribution<std::uint64_t> fdist(0, ipow((unsigned)F.q(), 6) - 1);
    for (int t = 0; t < samples; ++t) {
        Poly f = poly_from_code(F, fdist(rng));
        auto s1 = iterate_shift(F, sys, lhs_terms, f);
        auto s2 = iterate_shift(F, sys, rhs_terms, f);
        std::uint64_t x = xdist(rng);
        std::uint64_t y1 = x, y2 = x;
        const std::uint64_t comp = ipow((unsigned)F.q(), (unsigned)sys.h.degree());
        std::uint64_t place = 1, xx = x;
        y1 = 0;
        y2 = 0;
        for (int i = 0; i < sys.d; ++i) {
            Poly cur = poly_from_code(F, xx % comp);
            xx /= comp;
            y1 += poly_code(F, mod(F, add(F, cur, s1[i]), sys.h)) * place;
            y2 += poly_code(F, mod(F, add(F, cur, s2[i]), sys.h)) * place;
            place *= comp;
        }
        ++rep.samples;
        if (y1 != y2) ++rep.mismatches;

        // Frobenius additivity of each class: shift(u+v) = shift(u)+shift(v)
        Poly u = poly_from_code(F, fdist(rng));
        Poly v = poly_from_code(F, fdist(rng));
        for (const auto& cls : nf.classes) {
            std::vector<IterateTerm> cterms;
            for (const auto& c : cls.components)
                cterms.push_back(IterateTerm{c.action, c.coeff, int(c.p_power)});
            // the class action at parameter w translates by sum coeff * w^(p^nu)
            auto su = iterate_shift(F, sys, cterms, u);
            auto sv = iterate_shift(F, sys, cterms, v);
            auto suv = iterate_shift(F, sys, cterms, add(F, u, v));
            for (int i = 0; i < sys.d; ++i)
                if (suv[i] != mod(F, add(F, su[i], sv[i]), sys.h)) ++rep.frobenius_failures;
        }
    }
    return rep;
}

/// Max over random cut families of the oscillation ratio
/// ||O(A_n g)||_{L2(X)} / ||g||_{L2(X)} for the given iterate.
struct OscillationExperiment {
    int families = 0;
    double max_ratio = 0.0;
};

inline OscillationExperiment oscillation_experiment(const Field& F, const FiniteSystem& sys,
                                                    const std::vector<std::complex<double>>& g,
                                                    const std::vector<IterateTerm>& terms,
                                                    int n_max, int cut_families,
                                                    std::mt19937_64& rng) {
    OscillationExperiment rep;
    std::vector<std::vector<std::complex<double>>> avgs;
    for (int n = 1; n <= n_max; ++n) avgs.push_back(ergodic_average(F, sys, g, terms, n));
    double g2 = 0;
    for (const auto& v : g) g2 += std::norm(v);
    if (g2 == 0) return rep;
    std::uniform_int_distribution<int> cdist(1, n_max);
    for (int fam = 0; fam < cut_families; ++fam) {
        std::vector<int> cuts{cdist(rng), cdist(rng), cdist(rng)};
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        if (cuts.size() < 2) continue;
        double total = 0;
        const std::uint64_t X = system_size(F, sys);
        for (std::uint64_t x = 0; x < X; ++x) {
            for (size_t j = 0; j + 1 < cuts.size(); ++j) {
                double sup = 0;
                const std::complex<double> right = avgs[cuts[j + 1] - 1][x];
                for (int n = cuts[j]; n < cuts[j + 1]; ++n)
                    sup = std::max(sup, std::norm(avgs[n - 1][x] - right));
                total += sup;
            }
        }
        ++rep.families;
        rep.max_ratio = std::max(rep.max_ratio, std::sqrt(total / g2));
    }
    return rep;
}

}  // namespace ffcm
