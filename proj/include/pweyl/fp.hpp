#pragma once

#include <cstdint>
#include <string>

#include "pweyl/error.hpp"

namespace pweyl {

/// Deterministic Miller-Rabin, valid for all n < 3'215'031'751.
inline bool is_prime_u32(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull}) {
        std::uint64_t x = 1, base = a % n, e = d;
        while (e) {
            if (e & 1) x = (unsigned __int128)x * base % n;
            base = (unsigned __int128)base * base % n;
            e >>= 1;
        }
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = (unsigned __int128)x * x % n;
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

/// Prime field F_p with word-size residues.  p must be an odd prime < 2^31,
/// so a product of two reduced residues fits in 64 bits.
struct FpDom {
    using Elem = std::uint32_t;

    std::uint32_t p = 0;

    FpDom() = default;
    explicit FpDom(std::uint32_t prime) : p(prime) {
        if (prime < 3 || prime >= (1u << 31) || !is_prime_u32(prime))
            throw BadPrimeError("modulus must be an odd prime below 2^31, got " + std::to_string(prime));
    }

    bool operator==(const FpDom& o) const { return p == o.p; }
    bool operator!=(const FpDom& o) const { return p != o.p; }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem add(Elem a, Elem b) const {
        std::uint64_t s = (std::uint64_t)a + b;
        return (Elem)(s >= p ? s - p : s);
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : (Elem)(a + (std::uint64_t)p - b); }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem mul(Elem a, Elem b) const { return (Elem)((std::uint64_t)a * b % p); }

    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Elem inv(Elem a) const {
        if (a == 0) throw AssertionError("division by zero in F_" + std::to_string(p));
        // extended Euclid; p prime so every nonzero a is a unit
        std::int64_t t = 0, nt = 1, r = p, nr = a;
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += p;
        return (Elem)t;
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem from_int(std::int64_t v) const {
        std::int64_t m = v % (std::int64_t)p;
        if (m < 0) m += p;
        return (Elem)m;
    }

    /// Binomial coefficient mod p via Lucas' theorem (n, k may exceed p).
    Elem binom(std::uint64_t n, std::uint64_t k) const {
        if (k > n) return 0;
        Elem r = one();
        while (n || k) {
            std::uint64_t ni = n % p, ki = k % p;
            if (ki > ni) return 0;
            // small binomial by multiplicative formula; ki < p so divisions are by units
            Elem c = one();
            for (std::uint64_t i = 0; i < ki; ++i)
                c = div(mul(c, from_int((std::int64_t)(ni - i))), from_int((std::int64_t)(i + 1)));
            r = mul(r, c);
            n /= p; k /= p;
        }
        return r;
    }

    /// Falling factorial n (n-1) ... (n-k+1) mod p.
    Elem falling(std::uint64_t n, std::uint64_t k) const {
        if (k > n) return 0;
        Elem r = one();
        for (std::uint64_t i = 0; i < k; ++i) {
            r = mul(r, from_int((std::int64_t)((n - i) % p)));
            if (r == 0) return 0;
        }
        return r;
    }

    std::string str(Elem a) const { return std::to_string(a); }

    /// Lift to the representative of smallest absolute value (ties -> positive).
    std::int64_t symmetric_lift(Elem a) const {
        return a <= p / 2 ? (std::int64_t)a : (std::int64_t)a - (std::int64_t)p;
    }

    // field enumeration interface, shared with the extension fields
    std::uint64_t size() const { return p; }
    Elem element(std::uint64_t index) const { return (Elem)(index % p); }
    std::uint64_t index_of(Elem a) const { return a; }
    Elem pth_root(Elem a) const { return a; }  // Frobenius is the identity on F_p
};

/// The ring Z/p^2 (p an odd prime < 2^31).  Not a field: only used for lifts
/// of connections, which need ring arithmetic plus exact division by p.
struct Zp2Dom {
    using Elem = std::uint64_t;

    std::uint32_t p = 0;
    std::uint64_t p2 = 0;

    Zp2Dom() = default;
    explicit Zp2Dom(std::uint32_t prime) : p(prime), p2((std::uint64_t)prime * prime) {
        if (prime < 3 || prime >= (1u << 31) || !is_prime_u32(prime))
            throw BadPrimeError("modulus must be an odd prime below 2^31, got " + std::to_string(prime));
    }

    bool operator==(const Zp2Dom& o) const { return p == o.p; }
    bool operator!=(const Zp2Dom& o) const { return p != o.p; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    Elem add(Elem a, Elem b) const {
        Elem s = a + b;  // p^2 < 2^62 so no overflow
        return s >= p2 ? s - p2 : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p2 - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p2 - a; }
    Elem mul(Elem a, Elem b) const { return (Elem)((unsigned __int128)a * b % p2); }

    Elem inv(Elem a) const {
        if (a % p == 0) throw AssertionError("not a unit in Z/p^2");
        std::int64_t t = 0, nt = 1;
        __int128 r = (__int128)p2, nr = a;
        while (nr != 0) {
            std::int64_t q = (std::int64_t)(r / nr);
            std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
            __int128 rtmp = r - (__int128)q * nr; r = nr; nr = rtmp;
        }
        __int128 res = t;
        if (res < 0) res += p2;
        return (Elem)res;
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem from_int(std::int64_t v) const {
        std::int64_t m = v % (std::int64_t)p2;
        if (m < 0) m += (std::int64_t)p2;
        return (Elem)m;
    }

    std::string str(Elem a) const { return std::to_string(a); }
};

}  // namespace pweyl
