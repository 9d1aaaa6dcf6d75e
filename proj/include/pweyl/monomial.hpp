#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "pweyl/error.hpp"

namespace pweyl {

/// Exponent vector of fixed length nvars.  Exponents live in [0, 2^16);
/// arithmetic that would leave the range throws ExponentOverflowError.
using Mono = std::vector<std::uint16_t>;

constexpr std::uint32_t kMaxExponent = 1u << 16;

inline std::uint32_t total_degree(const Mono& m) {
    std::uint32_t d = 0;
    for (auto e : m) d += e;
    return d;
}

inline Mono mono_one(int nvars) { return Mono((std::size_t)nvars, 0); }

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint32_t e = (std::uint32_t)a[i] + b[i];
        if (e >= kMaxExponent) throw ExponentOverflowError("monomial exponent overflow");
        r[i] = (std::uint16_t)e;
    }
    return r;
}

inline bool mono_divides(const Mono& a, const Mono& b) {  // a | b
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Mono mono_div(const Mono& b, const Mono& a) {  // b / a, requires a | b
    Mono r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = (std::uint16_t)(b[i] - a[i]);
    return r;
}

inline Mono mono_lcm(const Mono& a, const Mono& b) {
    Mono r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] > b[i] ? a[i] : b[i];
    return r;
}

inline bool mono_coprime(const Mono& a, const Mono& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return false;
    return true;
}

struct MonoHash {
    std::size_t operator()(const Mono& m) const {
        std::size_t h = 1469598103934665603ull;
        for (auto e : m) {
            h ^= e;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Term orders.  cmp(a, b) returns <0, 0, >0 as a < b, a == b, a > b.
struct MonomialOrder {
    enum Kind { Lex, Grevlex, BlockElim };

    Kind kind = Grevlex;
    int block = 0;  // BlockElim: the first `block` variables are eliminated

    static MonomialOrder lex() { return {Lex, 0}; }
    static MonomialOrder grevlex() { return {Grevlex, 0}; }
    static MonomialOrder block_elim(int first_block) { return {BlockElim, first_block}; }

    static int cmp_lex(const Mono& a, const Mono& b, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static int cmp_grevlex(const Mono& a, const Mono& b, std::size_t lo, std::size_t hi) {
        std::uint32_t da = 0, db = 0;
        for (std::size_t i = lo; i < hi; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da < db ? -1 : 1;
        for (std::size_t i = hi; i-- > lo;)
            if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;  // reversed: smaller tail exponent wins
        return 0;
    }

    int cmp(const Mono& a, const Mono& b) const {
        switch (kind) {
            case Lex: return cmp_lex(a, b, 0, a.size());
            case Grevlex: return cmp_grevlex(a, b, 0, a.size());
            case BlockElim: {
                int c = cmp_grevlex(a, b, 0, (std::size_t)block);
                if (c) return c;
                return cmp_grevlex(a, b, (std::size_t)block, a.size());
            }
        }
        return 0;
    }

    bool less(const Mono& a, const Mono& b) const { return cmp(a, b) < 0; }
    bool operator==(const MonomialOrder& o) const { return kind == o.kind && block == o.block; }
};

}  // namespace pweyl
