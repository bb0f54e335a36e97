// slope1/arith.hpp
// SPDX-License-Identifier: Apache-2.0
//
// Word-size modular helpers shared by the p-adic, finite-field and
// linear-algebra layers.  Moduli stay below 2^62 so products fit __int128.
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace slope1 {

using BigInt = boost::multiprecision::cpp_int;
using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a modulo m; a must be coprime to m.
inline u64 invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        i64 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw HypothesisError("invmod: argument not invertible");
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t);
}

inline u64 reduce_signed(i64 a, u64 m) {
    i64 r = a % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline u64 reduce_big(const BigInt& a, u64 m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// p-adic valuation of a nonzero big integer.
inline int vp(BigInt n, u64 p) {
    if (n == 0) throw HypothesisError("vp: valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline int vp(i64 n, u64 p) { return vp(BigInt(n), p); }

// Smallest generator of F_p^*.
inline u64 primitive_root(u64 p) {
    if (p == 2) return 1;
    std::vector<u64> qs;
    u64 m = p - 1;
    for (u64 d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            qs.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) qs.push_back(m);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (u64 q : qs)
            if (powmod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw HypothesisError("primitive_root: no generator");
}

inline u64 smallest_nonresidue(u64 p) {
    for (u64 n = 2; n < p; ++n)
        if (powmod(n, (p - 1) / 2, p) == p - 1) return n;
    throw HypothesisError("smallest_nonresidue: p must be an odd prime");
}

// Discrete log base g in F_p^*, by enumeration (p is small here).
inline u64 dlog(u64 x, u64 g, u64 p) {
    u64 y = 1;
    for (u64 k = 0; k + 1 < p; ++k) {
        if (y == x % p) return k;
        y = mulmod(y, g, p);
    }
    throw HypothesisError("dlog: argument is zero or outside the group");
}

// Positive residue of a mod m, for small signed values.
inline i64 pmod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace slope1
