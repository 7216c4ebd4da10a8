#pragma once

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "ffcm/arcs.hpp"
#include "ffcm/ergodic.hpp"
#include "ffcm/expsum.hpp"
#include "ffcm/functionals.hpp"
#include "ffcm/grid.hpp"
#include "ffcm/inverse.hpp"
#include "ffcm/io.hpp"
#include "ffcm/operators.hpp"
#include "ffcm/run_config.hpp"

namespace ffcm {

/// Outcome of one verification suite; the acceptance harness prints one line
/// per criterion from these.
struct SuiteResult {
    std::string name;
    bool pass = false;
    std::vector<std::string> lines;
    double seconds = 0.0;
};

namespace suite_detail {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline std::string fmt(double v) { return fmt_double(v); }

}  // namespace suite_detail

// ---------------------------------------------------------------------------
// 1. Orthogonality of the linear character sums.
// ---------------------------------------------------------------------------
inline SuiteResult suite_orthogonality(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"orthogonality"};
    res.pass = true;
    const int samples = 500, n_max = 8, precision = 13;
    for (int p : {2, 3}) {
        Field F = Field::prime(p);
        auto sys = make_exponent_system({1}, p, cfg.delta0);
        auto rng = cfg.make_rng(101 + p);
        std::uniform_int_distribution<int> odist(-12, -1);
        std::uniform_int_distribution<int> sdist(1, 6);
        int rational_share = samples / 4;
        std::uint64_t checked = 0, failures = 0;
        for (int t = 0; t < samples; ++t) {
            Frequency alpha;
            int ord_alpha;
            if (t < rational_share) {
                int s = sdist(rng);
                std::uniform_int_distribution<std::uint64_t> adist(
                    0, ipow((unsigned)F.q(), (unsigned)s) - 1);
                Poly h = enumerate_monic(F, s)[adist(rng) % ipow((unsigned)F.q(), (unsigned)s)];
                Poly a = poly_from_code(F, adist(rng));
                alpha = Frequency::from_rational(F, a, h);
                ord_alpha = alpha.ord(F);
            } else {
                int o = odist(rng);
                TailSeries ts = inverse_detail::random_tail_with_ord(F, precision, o, rng);
                alpha = Frequency::from_tail(ts);
                ord_alpha = o;
            }
            for (int n = 1; n <= n_max; ++n) {
                CycloSum w = weyl_sum(F, {alpha}, sys, n);
                CycloInt got = CycloInt::from_sum(w);
                bool zero_expected = !(is_neg_inf(ord_alpha) || ord_alpha < -n);
                ++checked;
                if (zero_expected) {
                    if (!got.is_zero()) ++failures;
                } else {
                    CycloInt want(F.p());
                    want.v[0] = std::int64_t(ipow((unsigned)F.q(), (unsigned)n));
                    if (!(got == want)) ++failures;
                }
            }
        }
        res.lines.push_back("q=" + std::to_string(F.q()) + ": " + std::to_string(checked) +
                            " sums checked, " + std::to_string(failures) + " failures");
        if (failures) res.pass = false;
    }
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 2. Rational-frequency periodicity: the normalized sum at a/h equals the
//    Gauss sum for every n >= deg h, with exactly proportional value counts.
// ---------------------------------------------------------------------------
inline SuiteResult suite_rational_periodicity(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"rational-periodicity"};
    res.pass = true;
    Field F = Field::prime(2);
    for (std::vector<int> K : {std::vector<int>{1}, {3}, {1, 2}}) {
        auto sys = make_exponent_system(K, 2, cfg.delta0);
        std::uint64_t checked = 0, failures = 0;
        for (int s = 0; s <= 3; ++s) {
            for (const Poly& h : enumerate_monic(F, s)) {
                for (const auto& a : enumerate_a_h(F, h, sys.k())) {
                    GaussSum gs = gauss_sum(F, a, h, sys);
                    FrequencyVec fv;
                    for (const auto& ai : a) fv.push_back(Frequency::from_rational(F, ai, h));
                    for (int n = std::max(s, 1); n <= s + 4; ++n) {
                        CycloSum w = weyl_sum(F, fv, sys, n);
                        const std::int64_t scalegap =
                            std::int64_t(ipow((unsigned)F.q(), (unsigned)(n - s)));
                        bool ok = true;
                        for (int j = 0; j < F.p(); ++j)
                            if (w.counts[j] != scalegap * gs.sum.counts[j]) ok = false;
                        double err = std::abs(w.to_complex() /
                                                  double(ipow((unsigned)F.q(), (unsigned)n)) -
                                              gs.value());
                        ++checked;
                        if (!ok || err > 1e-9) ++failures;
                    }
                }
            }
        }
        std::string kname = "{";
        for (size_t i = 0; i < K.size(); ++i) kname += (i ? "," : "") + std::to_string(K[i]);
        kname += "}";
        res.lines.push_back("K=" + kname + ": " + std::to_string(checked) + " identities, " +
                            std::to_string(failures) + " failures");
        if (failures) res.pass = false;
    }
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 3 & 4. Major-arc factorization and box disjointness at the same scales.
// ---------------------------------------------------------------------------
struct MajorArcScaleSpec {
    std::vector<int> K;
    int n;
};

inline std::vector<MajorArcScaleSpec> major_arc_scales() {
    return {{{1}, 9}, {{1, 2}, 17}};
}

inline SuiteResult suite_major_arc_factorization(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"major-arc-factorization"};
    res.pass = true;
    Field F = Field::prime(2);
    const int betas_per_center = 50;
    for (const auto& spec : major_arc_scales()) {
        auto sys = make_exponent_system(spec.K, 2, cfg.delta0);
        ArcScale scale(spec.n, sys);
        auto rng = cfg.make_rng(301 + spec.n);
        const int precision = sys.r_star * (spec.n - 1) + 16;
        std::uint64_t checked = 0, failures = 0;
        for (const auto& center : enumerate_centers_at_scale(F, scale)) {
            for (int t = 0; t < betas_per_center; ++t) {
                std::vector<TailSeries> beta;
                for (int i = 0; i < sys.k(); ++i) {
                    int top = int(strict_floor(scale.box_threshold(i)));
                    std::uniform_int_distribution<int> odist(top - 3, top);
                    beta.push_back(
                        inverse_detail::random_tail_with_ord(F, precision, odist(rng), rng));
                }
                IdentityReport rep = verify_major_arc_identity(F, center, beta, scale);
                ++checked;
                if (!rep.pass(1e-9)) ++failures;
            }
        }
        res.lines.push_back("n=" + std::to_string(spec.n) + ": " + std::to_string(checked) +
                            " identities, " + std::to_string(failures) + " failures");
        if (failures) res.pass = false;
    }
    res.seconds = timer.seconds();
    return res;
}

inline SuiteResult suite_major_arc_disjointness(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"major-arc-disjointness"};
    res.pass = true;
    Field F = Field::prime(2);
    for (const auto& spec : major_arc_scales()) {
        auto sys = make_exponent_system(spec.K, 2, cfg.delta0);
        ArcScale scale(spec.n, sys);
        DisjointnessReport rep = check_disjointness(F, scale);
        res.lines.push_back("n=" + std::to_string(spec.n) + ": " +
                            std::to_string(rep.checked_pairs) + " pairs, " +
                            std::to_string(rep.violations.size()) + " violations");
        if (!rep.pass()) res.pass = false;
    }
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 5. Projection laws: idempotence and monotonicity of the degree-s pieces.
// ---------------------------------------------------------------------------
inline SuiteResult suite_projection_laws(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"projection-laws"};
    res.pass = true;
    Field F = Field::prime(2);
    auto sys = make_exponent_system({1}, 2, cfg.delta0);
    auto rng = cfg.make_rng(501);
    const int grids = 20;
    double worst = 0;

    auto run_case = [&](int s, int n1, int n2, std::optional<Rational> rho, int box,
                        const char* label) {
        OperatorParams P1 = make_operator_params(F, sys, s, n1, rho);
        OperatorParams P2 = make_operator_params(F, sys, s, n2, rho);
        double case_worst = 0;
        for (int t = 0; t < grids; ++t) {
            Grid g = random_grid(F, {box}, rng);
            Grid d1 = apply_D(F, g, P1);
            Grid d1d1 = apply_D(F, d1, P1);
            case_worst = std::max(case_worst, max_abs_difference(d1, d1d1));
            Grid d2 = apply_D(F, g, P2);
            Grid d2d1 = apply_D(F, d1, P2);
            case_worst = std::max(case_worst, max_abs_difference(d2, d2d1));
        }
        res.lines.push_back(std::string(label) + ": max deviation " +
                            suite_detail::fmt(case_worst));
        worst = std::max(worst, case_worst);
    };

    run_case(0, 1, 3, std::nullopt, 3, "s=0 conforming (n=1,3)");
    run_case(0, 2, 3, std::nullopt, 3, "s=0 conforming (n=2,3)");
    run_case(1, 3, 4, Rational(1, 2), 4, "s=1 nonconforming parameters (rho=1/2, n=3,4)");
    res.pass = worst <= 1e-9;
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 6. Large-scale factorization of the degree-s projection.
// ---------------------------------------------------------------------------
inline SuiteResult suite_large_scale_identity(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"large-scale-identity"};
    res.pass = true;
    Field F = Field::prime(2);
    auto sys = make_exponent_system({1}, 2, cfg.delta0);
    OperatorParams P = make_operator_params(F, sys, 1, 16);
    auto rng = cfg.make_rng(601);

    std::vector<Grid> inputs;
    inputs.push_back(Grid::delta(F, 1));
    for (int t = 0; t < 5; ++t) inputs.push_back(random_integer_grid(F, {4}, rng, 4, 0.4));

    int idx = 0;
    for (const auto& g : inputs) {
        LargeScaleReport rep = verify_large_scale_identity(F, g, P);
        res.lines.push_back("input " + std::to_string(idx++) + ": max error " +
                            suite_detail::fmt(rep.max_abs_error) +
                            (rep.exact_checked
                                 ? std::string(", exact ") + (rep.exact_equal ? "equal" : "DIFFER")
                                 : "") +
                            ", conforming=" + (rep.conforming ? "yes" : "no"));
        if (!rep.pass(1e-9) || !rep.conforming) res.pass = false;
    }
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 7. Weak (1,1) level-set inequality for the long-average maximal function.
// ---------------------------------------------------------------------------
inline SuiteResult suite_weak11(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"weak-1-1"};
    res.pass = true;
    Field F = Field::prime(2);
    auto sys = make_exponent_system({1}, 2, cfg.delta0);
    auto rng = cfg.make_rng(701);
    const int functions = 50;

    for (int s : {0, 1}) {
        std::optional<Rational> rho;
        int n_lo = 1;
        if (s == 1) {
            rho = Rational(1, 2);  // override: start the range at small scales
            n_lo = 3;
        }
        OperatorParams P = make_operator_params(F, sys, s, n_lo, rho);
        std::uint64_t rows = 0, failures = 0;
        for (int t = 0; t < functions; ++t) {
            Grid Fn = random_integer_grid(F, {10}, rng, 6, 0.25, /*nonnegative=*/true);
            std::int64_t l1 = 0;
            for (auto& v : Fn.values) l1 += std::llround(v.real());
            if (l1 == 0) Fn.values[0] = 1.0, l1 = 1;
            std::vector<Rational> alphas;
            for (int j = 1; j <= 20; ++j) alphas.push_back(Rational(l1, std::int64_t(1) << j));
            Weak11Report rep = weak_11_check(F, Fn, P, alphas, n_lo);
            for (const auto& row : rep.rows) {
                ++rows;
                if (!row.pass) ++failures;
            }
        }
        res.lines.push_back("s=" + std::to_string(s) + (s == 1 ? " (nonconforming parameters)" : "") +
                            ": " + std::to_string(rows) + " level-set rows, " +
                            std::to_string(failures) + " failures");
        if (failures) res.pass = false;
    }
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 8. Transference identity on a finite model.
// ---------------------------------------------------------------------------
inline SuiteResult suite_transference(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"transference"};
    Field F = Field::prime(2);
    auto sys = make_exponent_system({1, 2}, 2, cfg.delta0);
    Poly h = poly_parse(F, "t^2+t+1");
    FiniteSystem X = build_translation_system(
        F, h, 1, {{Poly::one()}, {poly_parse(F, "t")}});
    auto rng = cfg.make_rng(801);
    std::vector<std::complex<double>> g(system_size(F, X));
    std::uniform_int_distribution<int> vals(-4, 4);
    for (auto& v : g) v = double(vals(rng));
    TransferenceReport rep = transference_check(F, X, g, sys, 3, 20, rng);
    res.lines.push_back(std::to_string(rep.samples) + " sampled identities, " +
                        std::to_string(rep.identity_failures) + " failures, max diff " +
                        suite_detail::fmt(rep.max_diff) + ", norm identity " +
                        (rep.norm_ok ? "holds" : "FAILS"));
    res.pass = rep.pass();
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 9. Exact stabilization of the finite-model averages.
// ---------------------------------------------------------------------------
inline SuiteResult suite_stabilization(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"ergodic-stabilization"};
    res.pass = true;
    for (int p : {2, 3}) {
        Field F = Field::prime(p);
        for (std::vector<int> K : {std::vector<int>{1}, {3}}) {
            auto sys = make_exponent_system(K, p, cfg.delta0);
            auto rng = cfg.make_rng(901 + p + K[0]);
            int systems = 0, failures = 0;
            for (int s = 1; s <= 3; ++s) {
                for (const Poly& h : enumerate_monic(F, s)) {
                    FiniteSystem X = build_translation_system(F, h, 1, {{Poly::one()}});
                    std::vector<std::complex<double>> g(system_size(F, X));
                    std::uniform_int_distribution<int> vals(-4, 4);
                    for (auto& v : g) v = double(vals(rng));
                    auto terms = monomial_terms(make_exponent_system({K[0]}, p, cfg.delta0));
                    AverageTrace tr = convergence_probe(F, X, g, terms, s + 3);
                    ++systems;
                    if (tr.stabilization_n < 0 || tr.stabilization_n > s) ++failures;
                }
            }
            res.lines.push_back("q=" + std::to_string(p) + " r=" + std::to_string(K[0]) + ": " +
                                std::to_string(systems) + " systems, " +
                                std::to_string(failures) + " late or missing stabilizations");
            if (failures) res.pass = false;
        }
    }
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 10. Gauss sum decay: exhaustive tables and a fitted exponent.
// ---------------------------------------------------------------------------
struct GaussDecayResult {
    SuiteResult suite;
    std::vector<double> max_abs;  // per degree
    double gamma_hat = 0.0;
};

inline GaussDecayResult suite_gauss_decay(const RunConfig& cfg) {
    suite_detail::Timer timer;
    GaussDecayResult out;
    out.suite.name = "gauss-sum-decay";
    Field F = Field::prime(2);
    auto sys = make_exponent_system({3}, 2, cfg.delta0);
    const int s_max = 5;
    double num = 0, den = 0;
    for (int s = 0; s <= s_max; ++s) {
        GaussTable tab = gauss_table(F, s, sys);
        out.max_abs.push_back(tab.max_abs);
        out.suite.lines.push_back("s=" + std::to_string(s) + ": rows " +
                                  std::to_string(tab.rows.size()) + ", max |Lambda| = " +
                                  suite_detail::fmt(tab.max_abs));
        if (tab.max_abs > 0 && s > 0) {
            double y = -std::log2(tab.max_abs);
            num += double(s) * y;
            den += double(s) * s;
        }
    }
    out.gamma_hat = den > 0 ? num / den : 0;
    out.suite.lines.push_back("least-squares gamma-hat (through origin, decaying rows): " +
                              suite_detail::fmt(out.gamma_hat));
    out.suite.pass = out.gamma_hat > 0;
    out.suite.seconds = timer.seconds();
    return out;
}

// ---------------------------------------------------------------------------
// 11. Minor-arc decay trend and the offset decay profile.
// ---------------------------------------------------------------------------
inline SuiteResult suite_minor_arc_decay(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"minor-arc-decay"};
    Field F = Field::prime(2);
    auto sys = make_exponent_system({3}, 2, cfg.delta0);
    auto rng = cfg.make_rng(1101);
    const int samples = 200;
    std::vector<double> xs, ys;
    for (int n = 8; n <= 14; ++n) {
        ArcScale scale(n, sys);
        const int precision = sys.r_star * (n - 1) + 8;
        double max_abs = 0;
        int kept = 0;
        while (kept < samples) {
            TailSeries ts = inverse_detail::random_tail(F, precision, rng);
            FrequencyVec fv{Frequency::from_tail(ts)};
            if (classify(F, fv, scale).major) continue;
            ++kept;
            CycloSum w = weyl_sum(F, fv, sys, n);
            max_abs = std::max(max_abs,
                               std::abs(w.to_complex()) / double(ipow(2u, (unsigned)n)));
        }
        res.lines.push_back("n=" + std::to_string(n) + ": max |normalized sum| over " +
                            std::to_string(samples) + " minor samples = " +
                            suite_detail::fmt(max_abs));
        if (max_abs > 0) {
            xs.push_back(double(n));
            ys.push_back(std::log2(max_abs));
        }
    }
    double slope = 0, intercept = 0, resid = 0;
    inverse_detail::fit_line(xs, ys, slope, intercept, resid);
    res.lines.push_back("log-linear slope of max vs n: " + suite_detail::fmt(slope));

    DecayProfile prof = decay_profile(F, sys, 0, {14}, {1, 2, 3, 4, 5, 6}, 30, rng);
    res.lines.push_back("offset decay fit c-hat: " + suite_detail::fmt(prof.c_hat));
    res.pass = slope < 0 && prof.c_hat > 0;
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 12. Digit-order combinatorics: two implementations and the order axioms.
// ---------------------------------------------------------------------------
inline SuiteResult suite_combinatorics(const RunConfig&) {
    suite_detail::Timer timer;
    SuiteResult res{"digit-combinatorics"};
    res.pass = true;
    for (int p : {2, 3, 5}) {
        std::uint64_t sets = 0, mismatches = 0;
        std::vector<std::set<int>> subsets;
        for (int a = 1; a <= 32; ++a) {
            subsets.push_back({a});
            for (int b = a + 1; b <= 32; ++b) {
                subsets.push_back({a, b});
                for (int c = b + 1; c <= 32; ++c) subsets.push_back({a, b, c});
            }
        }
        for (const auto& K : subsets) {
            ++sets;
            auto s1 = shadow(K, p);
            auto s2 = shadow_binomial(K, p);
            if (s1 != s2) ++mismatches;
        }
        // order axioms up to 64
        std::uint64_t violations = 0;
        for (int j = 1; j <= 64; ++j) {
            if (!lucas_leq(j, j, p)) ++violations;  // reflexive
            for (int r = 1; r <= 64; ++r) {
                if (lucas_leq(j, r, p) && j > r) ++violations;  // implies <=
                if (lucas_leq(j, r, p) && lucas_leq(r, j, p) && j != r) ++violations;
                if ((binom_mod_p(r, j, p) != 0) != lucas_leq(j, r, p)) ++violations;
                for (int m = 1; m <= 64; ++m)
                    if (lucas_leq(j, r, p) && lucas_leq(r, m, p) && !lucas_leq(j, m, p))
                        ++violations;
            }
        }
        res.lines.push_back("p=" + std::to_string(p) + ": " + std::to_string(sets) +
                            " exponent sets compared, " + std::to_string(mismatches) +
                            " mismatches, " + std::to_string(violations) + " axiom violations");
        if (mismatches || violations) res.pass = false;
    }
    res.seconds = timer.seconds();
    return res;
}

// ---------------------------------------------------------------------------
// 13. Binary-splitting maximal bound over small-scale projection ranges.
// ---------------------------------------------------------------------------
inline SuiteResult suite_rademacher_menshov(const RunConfig& cfg) {
    suite_detail::Timer timer;
    SuiteResult res{"dyadic-maximal-bound"};
    res.pass = true;
    Field F = Field::prime(2);
    auto sys = make_exponent_system({1}, 2, cfg.delta0);
    auto rng = cfg.make_rng(1301);

    auto freq_samples = [&]() {
        std::vector<FrequencyVec> out;
        out.push_back({Frequency::zero()});
        for (int s = 1; s <= 3; ++s)
            for (const auto& c : enumerate_centers(F, s, sys))
                out.push_back({Frequency::from_rational(F, c.a[0], c.h)});
        return out;
    }();

    auto run_case = [&](int s, int n_lo, int n_hi, int box, const char* label) {
        Grid g = random_integer_grid(F, {box}, rng, 4, 0.5);
        std::vector<Grid> proj;
        for (int n = n_lo; n < n_hi; ++n) {
            OperatorParams P = make_operator_params(F, sys, s, n);
            proj.push_back(apply_D(F, g, P));
        }
        DyadicReport rep =
            dyadic_maximal_check(F, proj, g, sys, s, n_lo, freq_samples, std::nullopt);
        res.lines.push_back(std::string(label) + ": ratio " + suite_detail::fmt(rep.ratio) +
                            " vs bound " + std::to_string((rep.M + 1) * (rep.M + 1)) +
                            ", frequency check " + (rep.freq_pass ? "exact" : "FAILS") + " at " +
                            std::to_string(rep.freq_samples) + " samples");
        if (!rep.pass()) res.pass = false;
    };

    run_case(0, 1, 5, 3, "s=0 range [1,5)");
    // for s=1 the small scales are [Ns, Rs^4) = [9,16)
    run_case(1, 9, 16, 4, "s=1 range [9,16)");
    res.seconds = timer.seconds();
    return res;
}

inline std::vector<SuiteResult> run_all_suites(const RunConfig& cfg) {
    std::vector<SuiteResult> out;
    out.push_back(suite_orthogonality(cfg));
    out.push_back(suite_rational_periodicity(cfg));
    out.push_back(suite_major_arc_factorization(cfg));
    out.push_back(suite_major_arc_disjointness(cfg));
    out.push_back(suite_projection_laws(cfg));
    out.push_back(suite_large_scale_identity(cfg));
    out.push_back(suite_weak11(cfg));
    out.push_back(suite_transference(cfg));
    out.push_back(suite_stabilization(cfg));
    out.push_back(suite_gauss_decay(cfg).suite);
    out.push_back(suite_minor_arc_decay(cfg));
    out.push_back(suite_combinatorics(cfg));
    out.push_back(suite_rademacher_menshov(cfg));
    return out;
}

}  // namespace ffcm
