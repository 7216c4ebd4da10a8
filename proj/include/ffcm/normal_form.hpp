#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "ffcm/errors.hpp"
#include "ffcm/poly.hpp"

namespace ffcm {

/// Iterate specification: a commuting family of translation-style actions,
/// action j moved by the polynomial P_j(f) = constant_j + sum of its terms.
/// Constant terms are carried separately; term exponents are >= 1.
struct PolySpec {
    struct Term {
        int action = 0;   // 0-based action index
        Poly coeff;       // in F_q[t], nonzero
        int exponent = 1; // power of the orbit variable, >= 1
    };
    int num_actions = 0;
    std::vector<Term> terms;
    std::vector<Poly> constants;  // one per action; empty entry = 0
    bool allow_empty = false;     // the all-constant degenerate case

    void validate() const {
        if (num_actions < 1) throw domain_error("PolySpec: need at least one action");
        if ((int)constants.size() > num_actions)
            throw domain_error("PolySpec: more constants than actions");
        for (const auto& t : terms) {
            if (t.action < 0 || t.action >= num_actions)
                throw domain_error("PolySpec: action index out of range");
            if (t.exponent < 1) throw domain_error("PolySpec: exponents must be >= 1");
            if (t.coeff.is_zero()) throw domain_error("PolySpec: zero term coefficient");
        }
        if (terms.empty() && !allow_empty)
            throw domain_error("PolySpec: no non-constant terms (set allow_empty for the constant case)");
    }
};

/// e = p^nu * r with (r, p) = 1.
inline std::pair<int, int> p_free_part(int e, int p) {
    if (e < 1) throw domain_error("p_free_part: exponent must be >= 1");
    int nu = 0;
    while (e % p == 0) {
        e /= p;
        ++nu;
    }
    return {e, nu};
}

/// The grouped form: one class per p-free exponent value r, each class a list
/// of original monomial terms whose exponent is pPower * r.
struct NormalForm {
    struct Component {
        int action = 0;
        Poly coeff;
        long long p_power = 1;  // p^nu
        int nu = 0;
    };
    struct Class {
        int r = 1;  // coprime to p
        std::vector<Component> components;
    };
    std::vector<Class> classes;  // sorted by r

    size_t total_components() const {
        size_t n = 0;
        for (const auto& c : classes) n += c.components.size();
        return n;
    }
    std::vector<int> exponent_set() const {
        std::vector<int> K;
        for (const auto& c : classes) K.push_back(c.r);
        return K;
    }
};

/// Groups every monomial term by the p-free part of its exponent. Classes are
/// keyed by r alone; within a class the original input order is kept.
inline NormalForm reduce_to_normal_form(const PolySpec& spec, const Field& F) {
    spec.validate();
    std::map<int, std::vector<NormalForm::Component>> grouped;
    for (const auto& t : spec.terms) {
        auto [r, nu] = p_free_part(t.exponent, F.p());
        long long pw = 1;
        for (int i = 0; i < nu; ++i) pw *= F.p();
        grouped[r].push_back(NormalForm::Component{t.action, t.coeff, pw, nu});
    }
    NormalForm nf;
    for (auto& [r, comps] : grouped) nf.classes.push_back(NormalForm::Class{r, std::move(comps)});
    return nf;
}

}  // namespace ffcm
