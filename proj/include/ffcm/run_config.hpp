#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "ffcm/errors.hpp"
#include "ffcm/field.hpp"
#include "ffcm/util.hpp"

namespace ffcm {

/// Run-wide configuration: field, exponent set, caps, overrides, output.
/// Values come from an optional key=value config file with command-line
/// flags merged on top (flags win). Any override forces a nonconforming
/// stamp into every emitted artifact.
struct RunConfig {
    FieldParams field{2, 1, {}};
    std::vector<int> exponents{1};
    std::uint64_t limit = std::uint64_t(1) << 26;
    std::optional<Rational> rho_override;
    std::uint64_t seed = 20240915;
    double delta0 = 0.05;
    std::string format = "table";  // csv | json | table
    std::string out_path;          // empty = stdout

    bool nonconforming() const { return rho_override.has_value(); }
    std::string stamp() const {
        return nonconforming() ? "nonconforming parameters" : "conforming";
    }

    std::mt19937_64 make_rng(std::uint64_t salt = 0) const {
        return std::mt19937_64(seed ^ (salt * 0x9e3779b97f4a7c15ull));
    }

    /// "p", "p,m,modulus-csv": e.g. "2", "3", "2,2,1;1;1" (modulus constant first).
    void parse_field(const std::string& text) {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : text) {
            if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else
                cur += ch;
        }
        parts.push_back(cur);
        field.p = std::stoi(parts[0]);
        field.m = parts.size() > 1 ? std::stoi(parts[1]) : 1;
        field.modulus.clear();
        if (parts.size() > 2) {
            std::string mods = parts[2];
            std::string tok;
            for (char ch : mods + ";") {
                if (ch == ';') {
                    if (!tok.empty()) field.modulus.push_back(std::stoi(tok));
                    tok.clear();
                } else
                    tok += ch;
            }
        } else if (field.m == 2 && field.p == 2) {
            field.modulus = {1, 1, 1};
        }
    }

    void parse_exponents(const std::string& text) {
        exponents.clear();
        std::string tok;
        for (char ch : text + ",") {
            if (ch == ',') {
                if (!tok.empty()) exponents.push_back(std::stoi(tok));
                tok.clear();
            } else
                tok += ch;
        }
        if (exponents.empty()) throw domain_error("empty exponent list");
    }

    /// "1/2" or "3" as an exact rational.
    void parse_rho_override(const std::string& text) {
        auto slash = text.find('/');
        if (slash == std::string::npos)
            rho_override = Rational(std::stoll(text));
        else
            rho_override =
                Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }

    /// key = value lines; '#' comments. Applied only where flags did not set
    /// a value, so call before flag parsing or track touched keys externally.
    void load_config_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot read config file " + path);
        std::string line;
        while (std::getline(f, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                size_t b = s.find_first_not_of(" \t");
                size_t e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (key == "field")
                parse_field(val);
            else if (key == "exponents")
                parse_exponents(val);
            else if (key == "limit")
                limit = std::stoull(val);
            else if (key == "seed")
                seed = std::stoull(val);
            else if (key == "delta0")
                delta0 = std::stod(val);
            else if (key == "format")
                format = val;
            else if (key == "out")
                out_path = val;
            else if (key == "override-rho")
                parse_rho_override(val);
        }
    }

    std::string metadata_csv_header(const std::string& kind) const {
        std::ostringstream out;
        out << "# kind=" << kind << "\n";
        out << "# field=p" << field.p << "m" << field.m << "\n";
        out << "# exponents=";
        for (size_t i = 0; i < exponents.size(); ++i) out << (i ? "," : "") << exponents[i];
        out << "\n# limit=" << limit << "\n# seed=" << seed << "\n# conformance=" << stamp()
            << "\n";
        return out.str();
    }
};

}  // namespace ffcm
