#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "ffcm/cyclo.hpp"
#include "ffcm/errors.hpp"
#include "ffcm/poly.hpp"

namespace ffcm {

/// Finitely supported function on F_q[t]^k, stored densely over a declared
/// box: coordinate i ranges over polynomials of degree < box[i], addressed by
/// their canonical codes. Everything outside the box is zero.
template <class T>
struct GridFunction {
    int arity = 1;
    int q = 2;
    std::vector<int> box;             // per-coordinate degree bounds, >= 0
    std::vector<std::uint64_t> dims;  // q^box[i]
    std::vector<T> values;            // row-major, coordinate 0 fastest

    static GridFunction zeros(const Field& F, std::vector<int> box_) {
        GridFunction g;
        g.arity = (int)box_.size();
        g.q = F.q();
        g.box = std::move(box_);
        std::uint64_t total = 1;
        for (int b : g.box) {
            if (b < 0) throw domain_error("GridFunction: negative box bound");
            g.dims.push_back(ipow((unsigned)F.q(), (unsigned)b));
            total *= g.dims.back();
            guard_count(total, "GridFunction");
        }
        if constexpr (std::is_same_v<T, CycloInt>)
            g.values.assign(total, CycloInt(F.p()));
        else
            g.values.assign(total, T{});
        return g;
    }

    static GridFunction delta(const Field& F, int arity) {
        GridFunction g = zeros(F, std::vector<int>(arity, 0));
        if constexpr (std::is_same_v<T, CycloInt>)
            g.values[0].v[0] = 1;
        else
            g.values[0] = T(1);
        return g;
    }

    std::uint64_t size() const { return values.size(); }

    bool in_box(const std::vector<std::uint64_t>& codes) const {
        for (int i = 0; i < arity; ++i)
            if (codes[i] >= dims[i]) return false;
        return true;
    }

    std::uint64_t index_of(const std::vector<std::uint64_t>& codes) const {
        std::uint64_t idx = 0, stride = 1;
        for (int i = 0; i < arity; ++i) {
            idx += codes[i] * stride;
            stride *= dims[i];
        }
        return idx;
    }

    void decode(std::uint64_t idx, std::vector<std::uint64_t>& codes) const {
        codes.resize(arity);
        for (int i = 0; i < arity; ++i) {
            codes[i] = idx % dims[i];
            idx /= dims[i];
        }
    }

    T get(const std::vector<std::uint64_t>& codes) const {
        return in_box(codes) ? values[index_of(codes)] : T{};
    }
    T& at(const std::vector<std::uint64_t>& codes) {
        if (!in_box(codes)) throw domain_error("GridFunction: point outside declared box");
        return values[index_of(codes)];
    }
    void set(const std::vector<std::uint64_t>& codes, T v) { at(codes) = std::move(v); }
};

using Grid = GridFunction<std::complex<double>>;
using GridExact = GridFunction<CycloInt>;

namespace grid_detail {
inline bool nonzero(const std::complex<double>& v) { return v != std::complex<double>(0.0); }
inline bool nonzero(const CycloInt& v) { return !v.is_zero(); }
}  // namespace grid_detail

/// Visits nonzero cells as (codes, value).
template <class T, class Fn>
void for_each_nonzero(const GridFunction<T>& g, Fn&& fn) {
    std::vector<std::uint64_t> codes(g.arity);
    for (std::uint64_t idx = 0; idx < g.size(); ++idx) {
        if (!grid_detail::nonzero(g.values[idx])) continue;
        g.decode(idx, codes);
        fn(codes, g.values[idx]);
    }
}

inline double l2_norm_sq(const Grid& g) {
    double s = 0;
    for (const auto& v : g.values) s += std::norm(v);
    return s;
}

inline double l2_norm(const Grid& g) { return std::sqrt(l2_norm_sq(g)); }

inline double l1_norm(const Grid& g) {
    double s = 0;
    for (const auto& v : g.values) s += std::abs(v);
    return s;
}

/// Largest pointwise |a - b| over the union of the two boxes.
template <class T>
double max_abs_difference(const GridFunction<T>& a, const GridFunction<T>& b) {
    if (a.arity != b.arity) throw domain_error("max_abs_difference: arity mismatch");
    double m = 0;
    std::vector<std::uint64_t> codes(a.arity);
    const GridFunction<T>* big = &a;
    const GridFunction<T>* other = &b;
    if (b.size() > a.size()) std::swap(big, other);
    for (std::uint64_t idx = 0; idx < big->size(); ++idx) {
        big->decode(idx, codes);
        if constexpr (std::is_same_v<T, CycloInt>) {
            CycloInt d = big->values[idx] - other->get(codes);
            m = std::max(m, std::abs(d.to_complex()));
        } else {
            m = std::max(m, std::abs(big->values[idx] - other->get(codes)));
        }
    }
    // cells of the smaller grid outside the larger one's box
    for (std::uint64_t idx = 0; idx < other->size(); ++idx) {
        other->decode(idx, codes);
        if (!big->in_box(codes)) {
            if constexpr (std::is_same_v<T, CycloInt>)
                m = std::max(m, std::abs(other->values[idx].to_complex()));
            else
                m = std::max(m, std::abs(other->values[idx]));
        }
    }
    return m;
}

/// Exact equality over the union of boxes (CycloInt values).
inline bool exact_equal(const GridExact& a, const GridExact& b) {
    if (a.arity != b.arity) return false;
    std::vector<std::uint64_t> codes(a.arity);
    const GridExact* big = &a;
    const GridExact* other = &b;
    if (b.size() > a.size()) std::swap(big, other);
    for (std::uint64_t idx = 0; idx < big->size(); ++idx) {
        big->decode(idx, codes);
        if (!(big->values[idx] == other->get(codes))) return false;
    }
    for (std::uint64_t idx = 0; idx < other->size(); ++idx) {
        other->decode(idx, codes);
        if (!big->in_box(codes) && !other->values[idx].is_zero()) return false;
    }
    return true;
}

inline Grid random_grid(const Field& F, std::vector<int> box, std::mt19937_64& rng,
                        double sparsity = 1.0) {
    Grid g = Grid::zeros(F, std::move(box));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    for (auto& v : g.values)
        if (pick(rng) <= sparsity) v = {u(rng), u(rng)};
    return g;
}

/// Random grid with small integer values (exactly representable, so complex
/// and cyclotomic pipelines agree bit for bit).
inline Grid random_integer_grid(const Field& F, std::vector<int> box, std::mt19937_64& rng,
                                int max_abs = 4, double sparsity = 1.0, bool nonnegative = false) {
    Grid g = Grid::zeros(F, std::move(box));
    std::uniform_int_distribution<int> u(nonnegative ? 0 : -max_abs, max_abs);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    for (auto& v : g.values)
        if (pick(rng) <= sparsity) v = double(u(rng));
    return g;
}

/// Integer-valued complex grid -> exact grid (p is the character order).
inline GridExact to_exact(const Field& F, const Grid& g) {
    GridExact e;
    e.arity = g.arity;
    e.q = g.q;
    e.box = g.box;
    e.dims = g.dims;
    e.values.assign(g.size(), CycloInt(F.p()));
    for (std::uint64_t i = 0; i < g.size(); ++i) {
        double re = g.values[i].real();
        long long r = (long long)std::llround(re);
        if (g.values[i].imag() != 0.0 || double(r) != re)
            throw domain_error("to_exact: grid is not integer valued");
        e.values[i].v[0] = r;
    }
    return e;
}

}  // namespace ffcm
