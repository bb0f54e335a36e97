// slope1/fq.hpp
// SPDX-License-Identifier: Apache-2.0
//
// F_p and F_{p^2} = F_p[s]/(s^2 - n), n the smallest non-residue mod p.
// Elements compare lexicographically on (a0, a1); that order is the
// tie-break for square roots and quadratic roots.
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <utility>

#include "arith.hpp"
#include "errors.hpp"

namespace slope1 {

struct Fq2Model {
    u64 p = 0;
    u64 n = 0;  // s^2 = n
};

inline Fq2Model fq2_model(u64 p) {
    if (p < 3 || !is_prime(p)) throw HypothesisError("fq2_model: p must be an odd prime");
    return {p, smallest_nonresidue(p)};
}

class Fq {
public:
    Fq() = default;
    Fq(u64 p, u64 a0, u64 a1 = 0) : m_(fq2_model(p)), a0_(a0 % p), a1_(a1 % p) {}
    Fq(const Fq2Model& m, u64 a0, u64 a1) : m_(m), a0_(a0 % m.p), a1_(a1 % m.p) {}

    static Fq from_signed(u64 p, i64 a) { return Fq(p, reduce_signed(a, p)); }

    u64 prime() const { return m_.p; }
    u64 nonresidue() const { return m_.n; }
    u64 a0() const { return a0_; }
    u64 a1() const { return a1_; }
    int degree() const { return a1_ == 0 ? 1 : 2; }
    bool is_zero() const { return a0_ == 0 && a1_ == 0; }
    const Fq2Model& model() const { return m_; }

    friend Fq operator+(const Fq& x, const Fq& y) {
        return Fq(x.m_, x.a0_ + y.a0_, x.a1_ + y.a1_);
    }
    friend Fq operator-(const Fq& x, const Fq& y) {
        u64 p = x.m_.p;
        return Fq(x.m_, x.a0_ + p - y.a0_, x.a1_ + p - y.a1_);
    }
    Fq operator-() const { return Fq(m_, m_.p - a0_, m_.p - a1_); }
    friend Fq operator*(const Fq& x, const Fq& y) {
        u64 p = x.m_.p;
        u64 c0 = (mulmod(x.a0_, y.a0_, p) + mulmod(mulmod(x.a1_, y.a1_, p), x.m_.n, p)) % p;
        u64 c1 = (mulmod(x.a0_, y.a1_, p) + mulmod(x.a1_, y.a0_, p)) % p;
        return Fq(x.m_, c0, c1);
    }
    friend Fq operator/(const Fq& x, const Fq& y) { return x * y.inv(); }

    // Norm to F_p: a0^2 - n a1^2.
    u64 norm() const {
        u64 p = m_.p;
        return (mulmod(a0_, a0_, p) + p - mulmod(mulmod(a1_, a1_, p), m_.n, p)) % p;
    }

    Fq conj() const { return Fq(m_, a0_, m_.p - a1_); }

    Fq inv() const {
        if (is_zero()) throw HypothesisError("fq_inv: inverse of zero");
        Fq c = conj();
        u64 ni = invmod(norm(), m_.p);
        return Fq(m_, mulmod(c.a0_, ni, m_.p), mulmod(c.a1_, ni, m_.p));
    }

    Fq pow(u64 e) const {
        Fq r(m_, 1, 0), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    Fq frobenius() const { return pow(m_.p); }

    // A square root in F_{p^2} if one exists; of the two, the one with the
    // lexicographically smaller (a0, a1).
    std::optional<Fq> sqrt() const {
        u64 p = m_.p;
        if (is_zero()) return *this;
        std::optional<Fq> root;
        if (a1_ == 0) {
            if (auto r = sqrt_fp(a0_, p)) {
                root = Fq(m_, *r, 0);
            } else {
                // a0/n is a square, and s^2 = n.
                auto t = sqrt_fp(mulmod(a0_, invmod(m_.n, p), p), p);
                root = Fq(m_, 0, *t);
            }
        } else {
            auto sn = sqrt_fp(norm(), p);
            if (!sn) return std::nullopt;
            u64 half = invmod(2, p);
            for (u64 sign : {*sn, (p - *sn) % p}) {
                u64 c0sq = mulmod((a0_ + sign) % p, half, p);
                auto c0 = sqrt_fp(c0sq, p);
                if (!c0 || *c0 == 0) continue;
                u64 c1 = mulmod(a1_, invmod(mulmod(2, *c0, p), p), p);
                root = Fq(m_, *c0, c1);
                break;
            }
            if (!root) throw StructureError("fq_sqrt: norm test passed but no root found");
        }
        Fq other = -*root;
        return other < *root ? other : *root;
    }

    friend bool operator==(const Fq& x, const Fq& y) {
        return x.m_.p == y.m_.p && x.a0_ == y.a0_ && x.a1_ == y.a1_;
    }
    friend std::strong_ordering operator<=>(const Fq& x, const Fq& y) {
        if (auto c = x.a0_ <=> y.a0_; c != 0) return c;
        return x.a1_ <=> y.a1_;
    }

    // "a0+a1*s (s^2=n)"; degree-1 elements print as "a0".
    std::string str() const {
        if (a1_ == 0) return std::to_string(a0_);
        return std::to_string(a0_) + "+" + std::to_string(a1_) + "*s (s^2=" + std::to_string(m_.n) + ")";
    }

    // Tonelli-Shanks; the smaller of the two roots, or nothing.
    static std::optional<u64> sqrt_fp(u64 a, u64 p) {
        a %= p;
        if (a == 0) return 0;
        if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
        u64 q = p - 1;
        int s = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++s;
        }
        u64 z = smallest_nonresidue(p);
        u64 c = powmod(z, q, p), x = powmod(a, (q + 1) / 2, p), t = powmod(a, q, p);
        int m = s;
        while (t != 1) {
            int i = 0;
            u64 tt = t;
            while (tt != 1) {
                tt = mulmod(tt, tt, p);
                ++i;
            }
            u64 b = c;
            for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
            x = mulmod(x, b, p);
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            m = i;
        }
        return std::min(x, p - x);
    }

private:
    Fq2Model m_{};
    u64 a0_ = 0;
    u64 a1_ = 0;
};

// Roots of x^2 - c x + 1 in F_{p^2}, smaller first; a double root repeats.
inline std::pair<Fq, Fq> solve_monic_quadratic(const Fq& c) {
    if (c.degree() != 1) throw HypothesisError("solve_monic_quadratic: c must lie in F_p");
    u64 p = c.prime();
    Fq disc = c * c - Fq(c.model(), 4, 0);
    Fq d = *disc.sqrt();  // disc is in F_p, so a root exists in F_{p^2}
    Fq half = Fq(c.model(), invmod(2, p), 0);
    Fq x1 = (c + d) * half, x2 = (c - d) * half;
    if (x2 < x1) std::swap(x1, x2);
    return {x1, x2};
}

}  // namespace slope1
