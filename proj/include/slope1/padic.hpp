// slope1/padic.hpp
// SPDX-License-Identifier: Apache-2.0
//
// Capped-precision elements of Q_p.  A nonzero value is p^val * unit with
// the unit known modulo p^rel; its absolute precision is val + rel.  A value
// whose digits all vanish below its absolute precision is "zero to
// precision" and carries only that precision.  Exact zero uses a sentinel
// precision that survives every operation.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace slope1 {

class Padic {
public:
    static constexpr int kExact = 1 << 28;

    // Largest k with p^k < 2^62.
    static int max_rel(u64 p) { return table(p).cap; }

    static u64 ppow(u64 p, int k) {
        const PowTable& t = table(p);
        if (k < 0 || k > t.cap) throw PrecisionError("p-adic relative precision cap exceeded");
        return t.pw[static_cast<std::size_t>(k)];
    }

    Padic() = default;

    static Padic zero(u64 p, int abs = kExact) {
        check_prime(p);
        Padic z;
        z.p_ = p;
        z.zero_ = true;
        z.abs_ = std::min(abs, kExact);
        return z;
    }

    static Padic one(u64 p) { return from_int(1, p); }

    // Integer constant at full relative precision.
    static Padic from_int(const BigInt& n, u64 p) { return from_rational(n, 1, p, kExact); }

    static Padic from_rational(const BigInt& num, const BigInt& den, u64 p, int abs) {
        check_prime(p);
        if (den == 0) throw HypothesisError("from_rational: zero denominator");
        if (num == 0) return zero(p, abs);
        int a = vp(num, p), b = vp(den, p);
        int v = a - b;
        if (abs <= v) return zero(p, abs);
        int rel = std::min<i64>(static_cast<i64>(abs) - v, max_rel(p));
        u64 m = ppow(p, rel);
        BigInt n = num, d = den;
        for (int i = 0; i < a; ++i) n /= p;
        for (int i = 0; i < b; ++i) d /= p;
        u64 u = mulmod(reduce_big(n, m), invmod(reduce_big(d, m), m), m);
        return make(p, v, u, rel);
    }

    // Rational constant at full relative precision.
    static Padic exact(const BigInt& num, const BigInt& den, u64 p) {
        return from_rational(num, den, p, kExact);
    }

    // Parses "v:d0,d1,..." meaning p^v * (d0 + d1 p + d2 p^2 + ...), known
    // to absolute precision v + (number of digits).
    static Padic parse_digits(const std::string& s, u64 p) {
        check_prime(p);
        auto colon = s.find(':');
        if (colon == std::string::npos) throw HypothesisError("digit string needs 'v:' prefix: " + s);
        int v = 0;
        std::vector<u64> digits;
        try {
            std::size_t used = 0;
            v = std::stoi(s.substr(0, colon), &used);
            if (used != colon) throw HypothesisError("bad valuation in digit string: " + s);
            std::stringstream rest(s.substr(colon + 1));
            std::string tok;
            while (std::getline(rest, tok, ',')) {
                long long d = std::stoll(tok, &used);
                if (used != tok.size() || d < 0 || static_cast<u64>(d) >= p)
                    throw HypothesisError("digit out of range in: " + s);
                digits.push_back(static_cast<u64>(d));
            }
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const HypothesisError*>(&e)) throw;
            throw HypothesisError("malformed digit string: " + s);
        }
        if (digits.empty()) throw HypothesisError("digit string has no digits: " + s);
        int n = static_cast<int>(digits.size());
        std::size_t k = 0;
        while (k < digits.size() && digits[k] == 0) ++k;
        if (k == digits.size()) return zero(p, v + n);
        int rel = n - static_cast<int>(k);
        if (rel > max_rel(p)) throw HypothesisError("digit string longer than the supported precision");
        u64 u = 0, q = 1;
        for (std::size_t i = k; i < digits.size(); ++i) {
            u += digits[i] * q;
            if (i + 1 < digits.size()) q *= p;
        }
        return make(p, v + static_cast<int>(k), u, rel);
    }

    // The (p-1)-st root of unity congruent to lambda, to absolute precision
    // N, as the stable point of x -> x^p.
    static Padic teichmuller(u64 lambda, u64 p, int N) {
        check_prime(p);
        if (N < 1) throw HypothesisError("teichmuller: precision must be positive");
        lambda %= p;
        if (lambda == 0) return zero(p);
        u64 m = ppow(p, N);
        u64 x = lambda;
        for (;;) {
            u64 y = powmod(x, p, m);
            if (y == x) break;
            x = y;
        }
        return make(p, 0, x, N);
    }

    // Teichmuller lift at the full relative cap, memoised per prime.
    static const Padic& teich(u64 lambda, u64 p) {
        static std::mutex mu;
        static std::map<u64, std::vector<Padic>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& row = cache[p];
        if (row.empty())
            for (u64 l = 0; l < p; ++l) row.push_back(teichmuller(l, p, max_rel(p)));
        return row[lambda % p];
    }

    u64 prime() const { return p_; }
    bool is_zero() const { return zero_; }
    bool is_exact_zero() const { return zero_ && abs_ >= kExact; }
    int abs_precision() const { return abs_; }
    int rel_precision() const { return zero_ ? 0 : abs_ - val_; }
    u64 unit() const { return unit_; }

    int valuation() const {
        if (zero_) throw PrecisionError("insufficient precision to determine valuation", abs_ + 1);
        return val_;
    }

    // A lower bound for the true valuation, valid in both states.
    int val_bound() const { return zero_ ? abs_ : val_; }

    // x mod p for a unit x.
    u64 residue() const {
        if (zero_ || val_ != 0) throw HypothesisError("residue: argument is not a p-adic unit");
        return unit_ % p_;
    }

    // x mod p for an integral x known to at least one digit.
    u64 reduce_mod_p() const { return mod_pk(1); }

    // x mod p^k for an integral x known to precision k.
    u64 mod_pk(int k) const {
        if (k <= 0) return 0;
        if (abs_ < k) throw PrecisionError("reduction needs more digits", k);
        if (zero_) return 0;
        if (val_ < 0) throw HypothesisError("reduction of a non-integral element");
        if (val_ >= k) return 0;
        u64 m = ppow(p_, k - val_);
        return mulmod(unit_ % m, ppow(p_, val_), ppow(p_, k));
    }

    Padic truncated(int abs) const {
        if (zero_) return zero(p_, std::min(abs_, abs));
        if (val_ >= abs) return zero(p_, abs);
        int rel = std::min(rel_precision(), abs - val_);
        return make(p_, val_, unit_ % ppow(p_, rel), rel);
    }

    // Multiplication by p^k.
    Padic scale_p(int k) const {
        if (zero_) return is_exact_zero() ? *this : zero(p_, abs_ + k);
        Padic r = *this;
        r.val_ += k;
        r.abs_ += k;
        return r;
    }

    Padic operator-() const {
        if (zero_) return *this;
        u64 m = ppow(p_, rel_precision());
        return make(p_, val_, (m - unit_) % m, rel_precision());
    }

    Padic inv() const {
        if (zero_) throw PrecisionError("inverse of an element that is zero to precision", abs_ + 1);
        int rel = rel_precision();
        return make(p_, -val_, invmod(unit_, ppow(p_, rel)), rel);
    }

    Padic pow(long long e) const {
        if (e < 0) return inv().pow(-e);
        Padic r = one(p_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    friend Padic operator+(const Padic& x, const Padic& y) {
        same_prime(x, y);
        u64 p = x.p_;
        int A = std::min(x.abs_, y.abs_);
        if (x.zero_ && y.zero_) return zero(p, A);
        if (x.zero_) return y.truncated(A);
        if (y.zero_) return x.truncated(A);
        int v = std::min(x.val_, y.val_);
        if (v >= A) return zero(p, A);
        int rel = A - v;
        u64 m = ppow(p, rel);
        u64 s = (x.shifted(v, rel) + y.shifted(v, rel)) % m;
        return normalize(p, v, s, rel);
    }

    friend Padic operator-(const Padic& x, const Padic& y) { return x + (-y); }

    friend Padic operator*(const Padic& x, const Padic& y) {
        same_prime(x, y);
        u64 p = x.p_;
        if (x.is_exact_zero() || y.is_exact_zero()) return zero(p);
        if (x.zero_ || y.zero_) {
            i64 a = static_cast<i64>(x.val_bound()) + y.val_bound();
            return zero(p, static_cast<int>(std::min<i64>(a, kExact - 1)));
        }
        int rel = std::min(x.rel_precision(), y.rel_precision());
        u64 m = ppow(p, rel);
        return make(p, x.val_ + y.val_, mulmod(x.unit_ % m, y.unit_ % m, m), rel);
    }

    friend Padic operator/(const Padic& x, const Padic& y) { return x * y.inv(); }

    Padic& operator+=(const Padic& o) { return *this = *this + o; }
    Padic& operator-=(const Padic& o) { return *this = *this - o; }
    Padic& operator*=(const Padic& o) { return *this = *this * o; }

    // Representation equality: same state, valuation, digits and precision.
    friend bool operator==(const Padic& x, const Padic& y) {
        return x.p_ == y.p_ && x.zero_ == y.zero_ && x.abs_ == y.abs_ &&
               (x.zero_ || (x.val_ == y.val_ && x.unit_ == y.unit_));
    }

    // Equality on the digits both operands know.
    bool agrees(const Padic& o) const { return (*this - o).is_zero(); }

    std::string str() const {
        std::ostringstream os;
        if (zero_) {
            if (is_exact_zero())
                os << "0";
            else
                os << "O(" << p_ << "^" << abs_ << ")";
            return os.str();
        }
        os << unit_ << "*" << p_ << "^" << val_ << "+O(" << p_ << "^" << abs_ << ")";
        return os.str();
    }

private:
    struct PowTable {
        u64 p = 0;
        int cap = 0;
        std::vector<u64> pw;
    };

    static const PowTable& table(u64 p) {
        thread_local PowTable t;
        if (t.p != p) {
            t.p = p;
            t.pw.assign(1, 1);
            while (static_cast<unsigned __int128>(t.pw.back()) * p < (static_cast<unsigned __int128>(1) << 62))
                t.pw.push_back(t.pw.back() * p);
            t.cap = static_cast<int>(t.pw.size()) - 1;
        }
        return t;
    }

    static void check_prime(u64 p) {
        if (p < 3 || !is_prime(p)) throw HypothesisError("p must be an odd prime");
    }

    static void same_prime(const Padic& x, const Padic& y) {
        if (x.p_ != y.p_) throw HypothesisError("mixing different primes");
    }

    static Padic make(u64 p, int val, u64 unit, int rel) {
        Padic x;
        x.p_ = p;
        x.zero_ = false;
        x.val_ = val;
        x.unit_ = unit;
        x.abs_ = val + rel;
        return x;
    }

    static Padic normalize(u64 p, int v, u64 s, int rel) {
        if (s == 0) return zero(p, v + rel);
        int k = 0;
        while (s % p == 0) {
            s /= p;
            ++k;
        }
        return make(p, v + k, s, rel - k);
    }

    // unit * p^(val - v) modulo p^rel, for val >= v.
    u64 shifted(int v, int rel) const {
        int sh = val_ - v;
        if (sh >= rel) return 0;
        return (unit_ % ppow(p_, rel - sh)) * ppow(p_, sh);
    }

    u64 p_ = 0;
    bool zero_ = true;
    int val_ = 0;
    u64 unit_ = 0;
    int abs_ = 0;
};

}  // namespace slope1
