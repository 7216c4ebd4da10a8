// Command-line front end: verification suites, report generation, and the
// small standalone utilities (shadow/kstar/approx/classify/ergodic-sim).
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 resource limit.

#include <CLI11.hpp>

#include <iostream>
#include <set>

#include "ffcm/ffcm.hpp"

using namespace ffcm;

namespace {

int emit(const RunConfig& cfg, const std::string& kind, const std::string& body) {
    std::string text = cfg.metadata_csv_header(kind) + body;
    if (cfg.out_path.empty())
        std::cout << text;
    else
        write_text_file(cfg.out_path, text);
    return 0;
}

void print_suite(const SuiteResult& r) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << " ("
              << fmt_double(r.seconds) << " s)\n";
    for (const auto& line : r.lines) std::cout << "  " << line << "\n";
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
    std::vector<SuiteResult> results;
    if (suite == "orthogonality")
        results.push_back(suite_orthogonality(cfg));
    else if (suite == "major-arc") {
        results.push_back(suite_rational_periodicity(cfg));
        results.push_back(suite_major_arc_factorization(cfg));
        results.push_back(suite_major_arc_disjointness(cfg));
    } else if (suite == "large-scale")
        results.push_back(suite_large_scale_identity(cfg));
    else if (suite == "weak11")
        results.push_back(suite_weak11(cfg));
    else if (suite == "transference") {
        results.push_back(suite_transference(cfg));
        results.push_back(suite_stabilization(cfg));
    } else if (suite == "projections") {
        results.push_back(suite_projection_laws(cfg));
        results.push_back(suite_rademacher_menshov(cfg));
    } else if (suite == "all")
        results = run_all_suites(cfg);
    else {
        std::cerr << "usage: unknown suite '" << suite
                  << "' (orthogonality, major-arc, large-scale, weak11, transference, "
                     "projections, all)\n";
        return 2;
    }
    bool pass = true;
    for (const auto& r : results) {
        print_suite(r);
        pass = pass && r.pass;
    }
    return pass ? 0 : 1;
}

int cmd_report(RunConfig& cfg, const std::string& kind, int n, int s, bool exact) {
    Field F(cfg.field);
    auto sys = make_exponent_system(cfg.exponents, F.p(), cfg.delta0);
    if (kind == "gauss") {
        std::ostringstream body;
        for (int d = 0; d <= s; ++d) {
            GaussTable tab = gauss_table(F, d, sys);
            body << gauss_table_csv(tab, exact);
            body << "# max_abs[s=" << d << "]=" << fmt_double(tab.max_abs) << "\n";
        }
        return emit(cfg, "gauss", body.str());
    }
    if (kind == "decay") {
        auto rng = cfg.make_rng(11);
        std::vector<int> nr, dr;
        for (int i = std::max(4, n - 2); i <= std::max(4, n); ++i) nr.push_back(i);
        for (int d = 1; d <= std::max(1, n / 2); ++d) dr.push_back(d);
        DecayProfile prof = decay_profile(F, sys, 0, nr, dr, 30, rng);
        std::string body = decay_profile_csv(prof);
        body += "# c_hat=" + fmt_double(prof.c_hat) + " residual=" + fmt_double(prof.residual) +
                " delta0_label=" + fmt_double(sys.delta0) + "\n";
        return emit(cfg, "decay", body);
    }
    if (kind == "inverse") {
        auto rng = cfg.make_rng(13);
        InverseReport rep = verify_weyl_inverse(F, sys, n, 200, 0.45 * n, 6, rng);
        std::ostringstream body;
        body << "eta,requirement,witnessed\n";
        for (const auto& sm : rep.samples)
            body << fmt_double(sm.eta) << "," << sm.requirement << ","
                 << (sm.witness_found ? 1 : 0) << "\n";
        body << "# C_hat=" << fmt_double(rep.C_hat) << " D_hat=" << fmt_double(rep.D_hat)
             << " residual=" << fmt_double(rep.residual) << " usable=" << rep.usable << "\n";
        return emit(cfg, "inverse", body.str());
    }
    if (kind == "oscillation") {
        auto rng = cfg.make_rng(17);
        Poly h = poly_parse(F, "t^2+t+1");
        FiniteSystem X = build_translation_system(F, h, 1, {{Poly::one()}});
        std::vector<std::complex<double>> g(system_size(F, X));
        std::uniform_real_distribution<double> u(-1, 1);
        for (auto& v : g) v = {u(rng), u(rng)};
        auto terms = monomial_terms(make_exponent_system({cfg.exponents[0]}, F.p(), cfg.delta0));
        OscillationExperiment rep = oscillation_experiment(F, X, g, terms, std::max(n, 4), 100, rng);
        std::string body = "families,max_ratio\n" + std::to_string(rep.families) + "," +
                           fmt_double(rep.max_ratio) + "\n";
        return emit(cfg, "oscillation", body);
    }
    if (kind == "minor-arc-scan") {
        auto rng = cfg.make_rng(19);
        std::ostringstream body;
        body << "n,max_abs\n";
        for (int nn = std::max(4, n - 6); nn <= std::max(4, n); ++nn) {
            ArcScale scale(nn, sys);
            const int precision = sys.r_star * (nn - 1) + 8;
            double max_abs = 0;
            int kept = 0;
            while (kept < 200) {
                TailSeries ts = inverse_detail::random_tail(F, precision, rng);
                FrequencyVec fv{Frequency::from_tail(ts)};
                if (classify(F, fv, scale).major) continue;
                ++kept;
                CycloSum w = weyl_sum(F, fv, sys, nn);
                max_abs = std::max(max_abs, std::abs(w.to_complex()) /
                                                double(ipow((unsigned)F.q(), (unsigned)nn)));
            }
            body << nn << "," << fmt_double(max_abs) << "\n";
        }
        return emit(cfg, "minor-arc-scan", body.str());
    }
    std::cerr << "usage: unknown report kind '" << kind
              << "' (gauss, decay, inverse, oscillation, minor-arc-scan)\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"function-field exponential sum and ergodic averaging toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string field_text, exponents_text, rho_text, config_path;
    app.add_option("--config", config_path, "key=value config file (flags win)");
    app.add_option("--field", field_text, "p or p,m,modulus (modulus digits ';'-separated)");
    app.add_option("--exponents", exponents_text, "comma-separated exponent set");
    app.add_option("--seed", cfg.seed, "PRNG seed (echoed in every artifact)");
    app.add_option("--limit", cfg.limit, "enumeration count cap");
    app.add_option("--override-rho", rho_text, "nonconforming box-degree override (e.g. 1/2)");
    app.add_option("--format", cfg.format, "csv|json|table");
    app.add_option("--out", cfg.out_path, "output path (default stdout)");
    double delta0 = 0.05;
    app.add_option("--delta0", delta0, "decay-report label constant");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    verify->add_option("suite", suite, "suite name")->required();

    auto* report = app.add_subcommand("report", "emit a report artifact");
    std::string kind;
    int rep_n = 12, rep_s = 4;
    bool exact = false;
    report->add_option("kind", kind, "report kind")->required();
    report->add_option("--n", rep_n, "scale parameter");
    report->add_option("--s", rep_s, "max degree parameter");
    report->add_flag("--exact", exact, "emit exact root-of-unity counts");

    auto* shadow_cmd = app.add_subcommand("shadow", "digit shadow of an exponent set");
    auto* kstar_cmd = app.add_subcommand("kstar", "usable maximal exponents of a set");

    auto* approx_cmd = app.add_subcommand("approx", "best rational approximation of a tail");
    std::string tail_text;
    int approx_rn = 0, approx_maxdeg = 3, approx_prec = 24;
    approx_cmd->add_option("tail", tail_text, "e.g. t^-1+t^-5")->required();
    approx_cmd->add_option("--rn", approx_rn, "scale r*n the gap is read against");
    approx_cmd->add_option("--maxdeg", approx_maxdeg, "denominator degree budget");
    approx_cmd->add_option("--precision", approx_prec, "tail precision");

    auto* inverse_cmd = app.add_subcommand("inverse-verify", "empirical inverse-theorem frontier");
    int inv_n = 12, inv_trials = 200;
    inverse_cmd->add_option("--n", inv_n, "scale");
    inverse_cmd->add_option("--trials", inv_trials, "sample count");

    auto* decay_cmd = app.add_subcommand("decay", "offset decay profile");
    int decay_n = 12;
    decay_cmd->add_option("--n", decay_n, "scale");

    auto* classify_cmd = app.add_subcommand("classify", "arc membership of frequencies");
    std::vector<std::string> alphas_text;
    int classify_n = 9;
    classify_cmd->add_option("alpha", alphas_text, "tails t^-1+... or rationals a/h")->required();
    classify_cmd->add_option("--n", classify_n, "scale");

    auto* ergodic_cmd = app.add_subcommand("ergodic-sim", "finite-model average trace");
    std::string modulus_text = "t^2+t+1";
    int erg_nmax = 4, erg_cuts = 50;
    ergodic_cmd->add_option("--modulus", modulus_text, "monic modulus");
    ergodic_cmd->add_option("--nmax", erg_nmax, "largest scale");
    ergodic_cmd->add_option("--cuts", erg_cuts, "random cut families");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) cfg.load_config_file(config_path);
        if (!field_text.empty()) cfg.parse_field(field_text);
        if (!exponents_text.empty()) cfg.parse_exponents(exponents_text);
        if (!rho_text.empty()) cfg.parse_rho_override(rho_text);
        cfg.delta0 = delta0;
        set_count_limit(cfg.limit);

        if (verify->parsed()) return cmd_verify(cfg, suite);
        if (report->parsed()) return cmd_report(cfg, kind, rep_n, rep_s, exact);

        Field F(cfg.field);
        if (shadow_cmd->parsed() || kstar_cmd->parsed()) {
            std::set<int> K(cfg.exponents.begin(), cfg.exponents.end());
            ShadowReport rep = shadow_report(K, F.p());
            json j{{"p", rep.p},
                   {"K", std::vector<int>(rep.K.begin(), rep.K.end())},
                   {"shadow", std::vector<int>(rep.shadow_set.begin(), rep.shadow_set.end())},
                   {"kstar", std::vector<int>(rep.kstar.begin(), rep.kstar.end())},
                   {"maximal", std::vector<int>(rep.maximal.begin(), rep.maximal.end())}};
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (approx_cmd->parsed()) {
            TailSeries t = tail_parse(F, tail_text, approx_prec);
            ApproxWitness w = best_rational_approx(F, t, approx_rn, approx_maxdeg);
            json j{{"g", to_string(w.g)},
                   {"a", to_string(w.a)},
                   {"deg_g", w.deg_g},
                   {"ord_gap", is_neg_inf(w.ord_gap) ? json(nullptr) : json(w.ord_gap)},
                   {"gap_examined_to", w.gap_precision}};
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (inverse_cmd->parsed()) {
            cfg.out_path = cfg.out_path.empty() ? cfg.out_path : cfg.out_path;
            return cmd_report(cfg, "inverse", inv_n, 0, false);
        }
        if (decay_cmd->parsed()) return cmd_report(cfg, "decay", decay_n, 0, false);
        if (classify_cmd->parsed()) {
            auto sys = make_exponent_system(cfg.exponents, F.p(), cfg.delta0);
            ArcScale scale(classify_n, sys, cfg.rho_override);
            std::ostringstream body;
            body << "alpha,verdict,center\n";
            for (const auto& text : alphas_text) {
                FrequencyVec fv;
                auto slash = text.find('/');
                if (slash != std::string::npos) {
                    Poly a = poly_parse(F, text.substr(0, slash));
                    Poly h = poly_parse(F, text.substr(slash + 1));
                    fv.push_back(Frequency::from_rational(F, a, h));
                } else {
                    fv.push_back(Frequency::from_tail(
                        tail_parse(F, text, sys.r_star * (classify_n - 1) + 8)));
                }
                // one coordinate per remaining exponent: reuse the same value
                while ((int)fv.size() < sys.k()) fv.push_back(fv.front());
                Classification c = classify(F, fv, scale);
                body << text << "," << (c.major ? "major" : "minor") << ",";
                if (c.major)
                    body << to_string(c.center->a[0]) << "/" << to_string(c.center->h);
                body << "\n";
            }
            return emit(cfg, "classify", body.str());
        }
        if (ergodic_cmd->parsed()) {
            Poly h = poly_parse(F, modulus_text);
            FiniteSystem X = build_translation_system(F, h, 1, {{Poly::one()}});
            auto rng = cfg.make_rng(23);
            std::vector<std::complex<double>> g(system_size(F, X));
            std::uniform_real_distribution<double> u(-1, 1);
            for (auto& v : g) v = {u(rng), u(rng)};
            auto terms = monomial_terms(make_exponent_system({cfg.exponents[0]}, F.p(), cfg.delta0));
            AverageTrace tr = convergence_probe(F, X, g, terms, erg_nmax);
            OscillationExperiment osc = oscillation_experiment(F, X, g, terms, erg_nmax, erg_cuts, rng);
            json j{{"modulus", to_string(h)},
                   {"stabilization_n", tr.stabilization_n},
                   {"uniform_on_subgroup", tr.distribution_uniform_on_subgroup},
                   {"limit_invariant", tr.limit_invariant},
                   {"oscillation_families", osc.families},
                   {"oscillation_max_ratio", osc.max_ratio},
                   {"conformance", cfg.stamp()},
                   {"seed", cfg.seed}};
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        std::cerr << "usage: no subcommand\n";
        return 2;
    } catch (const count_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
