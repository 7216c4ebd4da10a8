#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ffcm/arcs.hpp"
#include "ffcm/ergodic.hpp"
#include "ffcm/expsum.hpp"
#include "ffcm/grid.hpp"
#include "ffcm/inverse.hpp"
#include "ffcm/normal_form.hpp"
#include "ffcm/tail_series.hpp"

namespace ffcm {

using json = nlohmann::json;

/// Deterministic float formatting for byte-stable CSV/JSON output.
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- polynomials -----------------------------------------------------------

inline json poly_to_json(const Poly& a) {
    json arr = json::array();
    for (Fe c : a.c) arr.push_back(int(c));
    return arr;
}

inline Poly poly_from_json(const Field& F, const json& j) {
    if (j.is_string()) return poly_parse(F, j.get<std::string>());
    if (j.is_number_integer()) return poly_from_code(F, j.get<std::uint64_t>());
    if (!j.is_array()) throw domain_error("poly_from_json: expected array, string or code");
    std::vector<Fe> c;
    for (const auto& v : j) {
        int x = v.get<int>();
        if (x < 0 || x >= F.q()) throw domain_error("poly_from_json: coefficient out of range");
        c.push_back(Fe(x));
    }
    return Poly(std::move(c));
}

// --- tail series -----------------------------------------------------------

inline json tail_to_json(const TailSeries& t) {
    json entries = json::array();
    for (int j = 1; j <= t.precision; ++j)
        if (t.coeff_at(-j)) entries.push_back(json::array({-j, int(t.coeff_at(-j))}));
    return json{{"precision", t.precision}, {"coeffs", entries}};
}

inline TailSeries tail_from_json(const Field& F, const json& j) {
    TailSeries t(j.at("precision").get<int>());
    for (const auto& e : j.at("coeffs")) {
        int expn = e.at(0).get<int>();
        int c = e.at(1).get<int>();
        if (c < 0 || c >= F.q()) throw domain_error("tail_from_json: coefficient out of range");
        t.set_coeff(expn, Fe(c));
    }
    return t;
}

// --- iterate specifications --------------------------------------------------

/// {"actions": l, "polys": [[[coeff, exponent], ...], ...]}; exponent-0 terms
/// are the constant parts. Coefficients may be codes, strings or arrays.
inline PolySpec polyspec_from_json(const Field& F, const json& j) {
    PolySpec spec;
    spec.num_actions = j.at("actions").get<int>();
    spec.constants.assign(spec.num_actions, Poly::zero());
    const auto& polys = j.at("polys");
    if ((int)polys.size() != spec.num_actions)
        throw domain_error("polyspec_from_json: polys size != actions");
    for (int a = 0; a < spec.num_actions; ++a) {
        for (const auto& term : polys[a]) {
            Poly coeff = poly_from_json(F, term.at(0));
            int e = term.at(1).get<int>();
            if (e == 0)
                spec.constants[a] = add(F, spec.constants[a], coeff);
            else if (!coeff.is_zero())
                spec.terms.push_back(PolySpec::Term{a, coeff, e});
        }
    }
    spec.allow_empty = j.value("allow_empty", false);
    return spec;
}

inline json normal_form_to_json(const NormalForm& nf) {
    json classes = json::array();
    for (const auto& cls : nf.classes) {
        json comps = json::array();
        for (const auto& c : cls.components)
            comps.push_back(json{{"action", c.action},
                                 {"coeff", poly_to_json(c.coeff)},
                                 {"pPower", c.p_power}});
        classes.push_back(json{{"r", cls.r}, {"components", comps}});
    }
    return json{{"classes", classes}};
}

// --- grids -------------------------------------------------------------------

inline json grid_to_json(const Grid& g) {
    json entries = json::array();
    for_each_nonzero(g, [&](const std::vector<std::uint64_t>& codes,
                            const std::complex<double>& v) {
        json x = json::array();
        for (auto c : codes) x.push_back(c);
        entries.push_back(json::array({x, v.real(), v.imag()}));
    });
    return json{{"k", g.arity}, {"box", g.box}, {"entries", entries}};
}

inline Grid grid_from_json(const Field& F, const json& j) {
    Grid g = Grid::zeros(F, j.at("box").get<std::vector<int>>());
    if (j.at("k").get<int>() != g.arity) throw domain_error("grid_from_json: k != box size");
    for (const auto& e : j.at("entries")) {
        std::vector<std::uint64_t> codes = e.at(0).get<std::vector<std::uint64_t>>();
        g.at(codes) = {e.at(1).get<double>(), e.at(2).get<double>()};
    }
    return g;
}

// --- CSV emission -------------------------------------------------------------

/// Gauss table rows: s, h, a_1..a_k, re, im, abs. With exact=true a trailing
/// column holds the root-of-unity counts as a JSON array.
inline std::string gauss_table_csv(const GaussTable& t, bool exact = false) {
    std::ostringstream out;
    int k = t.rows.empty() ? 1 : (int)t.rows[0].a.size();
    out << "s,h";
    for (int i = 1; i <= k; ++i) out << ",a" << i;
    out << ",re,im,abs";
    if (exact) out << ",counts";
    out << "\n";
    for (const auto& row : t.rows) {
        out << t.s << "," << to_string(row.h);
        for (const auto& ai : row.a) out << "," << to_string(ai);
        auto v = row.lambda.value();
        out << "," << fmt_double(v.real()) << "," << fmt_double(v.imag()) << ","
            << fmt_double(std::abs(v));
        if (exact) {
            out << ",\"[";
            for (int i = 0; i < (int)row.lambda.sum.counts.size(); ++i)
                out << (i ? "," : "") << row.lambda.sum.counts[i];
            out << "]\"";
        }
        out << "\n";
    }
    return out.str();
}

inline std::string decay_profile_csv(const DecayProfile& p) {
    std::ostringstream out;
    out << "n,delta,max_abs,trivial,conforming\n";
    for (const auto& r : p.rows)
        out << r.n << "," << r.delta << "," << fmt_double(r.max_abs) << "," << (r.trivial ? 1 : 0)
            << "," << (r.conforming ? 1 : 0) << "\n";
    return out.str();
}

inline std::string weak11_csv(const Weak11Report& rep) {
    std::ostringstream out;
    out << "alpha_num,alpha_den,count,bound_num,bound_den\n";
    for (const auto& r : rep.rows)
        out << r.alpha.num << "," << r.alpha.den << "," << r.level_count << "," << rep.l1 << ","
            << "1\n";
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

}  // namespace ffcm
