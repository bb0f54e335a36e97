// slope1/tree.hpp
// SPDX-License-Identifier: Apache-2.0
//
// Compactly supported Sym^r(Q_p)-valued functions on the Bruhat-Tits tree
// and the Hecke operator T = T+ + T-.
//
// [g, v] is the function supported on g KZ with value v at g, so
// [g k, v] = [g, k v] for k in KZ; the centre p^Z acts trivially on V.
// Cosets are indexed by g0(m, lam) = (p^m, lam; 0, 1) and
// g1(m, lam) = (1, 0; p lam, p^(m+1)), lam a sum of m Teichmuller digits.
#pragma once

#include <climits>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fp_linalg.hpp"
#include "padic.hpp"

namespace slope1 {

struct VertexRep {
    int side = 0;                 // 0 for g0, 1 for g1
    int m = 0;                    // number of digits
    std::vector<u64> digits;      // lam = sum [digits[i]] p^i, each in [0, p)

    friend auto operator<=>(const VertexRep&, const VertexRep&) = default;

    static VertexRep identity() { return {}; }
    static VertexRep alpha() { return {1, 0, {}}; }
    static VertexRep g0(std::vector<u64> d) { return {0, static_cast<int>(d.size()), std::move(d)}; }
    static VertexRep g1(std::vector<u64> d) { return {1, static_cast<int>(d.size()), std::move(d)}; }

    // Distance from the vertex of Id.
    int radius() const { return side == 0 ? m : m + 1; }

    std::string str() const {
        if (side == 0 && m == 0) return "Id";
        if (side == 1 && m == 0) return "alpha";
        std::string s = side == 0 ? "g0[" : "g1[";
        for (std::size_t i = 0; i < digits.size(); ++i) s += (i ? "," : "") + std::to_string(digits[i]);
        return s + "]";
    }
};

// Coefficients of X^(r-i) Y^i, i = 0..r.
using PadicSymVector = std::vector<Padic>;

inline PadicSymVector sym_zero(u64 p, int r) { return PadicSymVector(static_cast<std::size_t>(r + 1), Padic::zero(p)); }

inline PadicSymVector sym_monomial(u64 p, int r, int i, const Padic& c) {
    PadicSymVector v = sym_zero(p, r);
    v[static_cast<std::size_t>(i)] = c;
    return v;
}

inline bool sym_is_zero(const PadicSymVector& v) {
    for (const Padic& x : v)
        if (!x.is_zero()) return false;
    return true;
}

// Smallest absolute precision among the coefficients.
inline int sym_min_abs(const PadicSymVector& v) {
    int a = Padic::kExact;
    for (const Padic& x : v) a = std::min(a, x.abs_precision());
    return a;
}

inline PadicSymVector sym_add(const PadicSymVector& x, const PadicSymVector& y) {
    if (x.size() != y.size()) throw HypothesisError("sym_add: degree mismatch");
    PadicSymVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

inline PadicSymVector sym_scale(const PadicSymVector& x, const Padic& c) {
    PadicSymVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] * c;
    return z;
}

// w = (0, 1; 1, 0) swaps X and Y.
inline PadicSymVector sym_swap(const PadicSymVector& v) { return PadicSymVector(v.rbegin(), v.rend()); }

struct PMat {
    Padic a, b, c, d;

    static PMat identity(u64 p) { return {Padic::one(p), Padic::zero(p), Padic::zero(p), Padic::one(p)}; }
    static PMat from_ints(i64 a, i64 b, i64 c, i64 d, u64 p) {
        return {Padic::from_int(a, p), Padic::from_int(b, p), Padic::from_int(c, p), Padic::from_int(d, p)};
    }

    u64 prime() const { return a.prime(); }
    Padic det() const { return a * d - b * c; }

    friend PMat operator*(const PMat& x, const PMat& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    PMat inverse() const {
        Padic e = det().inv();
        return {d * e, -b * e, -c * e, a * e};
    }

    PMat scale_p(int k) const { return {a.scale_p(k), b.scale_p(k), c.scale_p(k), d.scale_p(k)}; }

    // Smallest entry valuation; throws when an imprecise zero could hide a
    // smaller one.
    int min_valuation() const {
        int v = INT_MAX;
        for (const Padic* x : {&a, &b, &c, &d})
            if (!x->is_zero()) v = std::min(v, x->valuation());
        if (v == INT_MAX) throw HypothesisError("matrix is zero");
        for (const Padic* x : {&a, &b, &c, &d})
            if (x->is_zero() && x->abs_precision() < v)
                throw PrecisionError("entry known only to O(p^" + std::to_string(x->abs_precision()) + ")", v);
        return v;
    }

    bool agrees(const PMat& o) const { return a.agrees(o.a) && b.agrees(o.b) && c.agrees(o.c) && d.agrees(o.d); }
};

inline Padic digits_value(const std::vector<u64>& digits, u64 p) {
    Padic s = Padic::zero(p);
    for (std::size_t i = 0; i < digits.size(); ++i) s += Padic::teich(digits[i], p).scale_p(static_cast<int>(i));
    return s;
}

inline PMat vertex_matrix(const VertexRep& v, u64 p) {
    Padic lam = digits_value(v.digits, p);
    Padic zero = Padic::zero(p), one = Padic::one(p);
    if (v.side == 0) return {one.scale_p(v.m), lam, zero, one};
    return {one, zero, lam.scale_p(1), one.scale_p(v.m + 1)};
}

// F(aX + cY, bX + dY) for a 2x2 matrix over Q_p, with no normalisation.
inline PadicSymVector substitute(const PMat& g, const PadicSymVector& f) {
    u64 p = g.prime();
    std::size_t n = f.size();
    // Horner: H_k = H_{k-1} * L1 + f_k * L2^k, L1 = aX + cY, L2 = bX + dY.
    PadicSymVector h{f[0]}, pw{Padic::one(p)};
    auto mul_linear = [&](const PadicSymVector& x, const Padic& u, const Padic& v) {
        PadicSymVector y(x.size() + 1, Padic::zero(p));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i].is_exact_zero()) continue;
            y[i] += x[i] * u;
            y[i + 1] += x[i] * v;
        }
        return y;
    };
    for (std::size_t k = 1; k < n; ++k) {
        h = mul_linear(h, g.a, g.c);
        pw = mul_linear(pw, g.b, g.d);
        if (f[k].is_exact_zero()) continue;
        for (std::size_t i = 0; i <= k; ++i) h[i] += f[k] * pw[i];
    }
    return h;
}

inline bool in_KZ(const PMat& k) {
    int v = k.min_valuation();
    Padic dt = k.scale_p(-v).det();
    return !dt.is_zero() && dt.valuation() == 0;
}

// Action of k in KZ on Sym^r: the central part p^v is dropped.
inline PadicSymVector act_KZ(const PMat& k, const PadicSymVector& f) {
    int v = k.min_valuation();
    return substitute(k.scale_p(-v), f);
}

struct Canonical {
    VertexRep rep;
    PMat kappa;  // g = vertex_matrix(rep) * kappa, kappa in KZ
};

namespace detail {

// Teichmuller digits of y mod p^m, for integral y.
inline std::vector<u64> teich_digits(Padic y, int m) {
    u64 p = y.prime();
    if (y.abs_precision() < m) throw PrecisionError("canonicalize: not enough digits to place the vertex", m);
    std::vector<u64> d;
    for (int i = 0; i < m; ++i) {
        u64 x = y.reduce_mod_p();
        d.push_back(x);
        y = (y - Padic::teich(x, p)).scale_p(-1);
    }
    return d;
}

inline bool known_unit(const Padic& x) { return !x.is_zero() && x.valuation() == 0; }

inline bool known_divisible(const Padic& x) {
    if (x.is_zero()) {
        if (x.abs_precision() < 1) throw PrecisionError("canonicalize: entry undetermined mod p", 1);
        return true;
    }
    return x.valuation() >= 1;
}

}  // namespace detail

// Column reduction of the lattice spanned by the columns of g, after scaling
// it to be integral and primitive.
inline Canonical canonicalize(const PMat& g) {
    u64 p = g.prime();
    if (g.det().is_zero()) throw HypothesisError("canonicalize: singular or undetermined determinant");
    PMat h = g.scale_p(-g.min_valuation());
    Padic a = h.a, b = h.b, c = h.c, d = h.d;
    VertexRep rep;
    if (detail::known_unit(c) || detail::known_unit(d)) {
        if (!detail::known_unit(d)) {
            std::swap(a, b);
            std::swap(c, d);
        }
        Padic x = (a * d - b * c) / d, y = b / d;
        int m = x.valuation();
        if (m < 0) throw StructureError("canonicalize: lattice not integral after scaling");
        rep = VertexRep::g0(detail::teich_digits(y, m));
    } else {
        detail::known_divisible(c);
        detail::known_divisible(d);
        if (!detail::known_unit(a)) {
            std::swap(a, b);
            std::swap(c, d);
        }
        if (!detail::known_unit(a)) throw StructureError("canonicalize: lattice not primitive");
        Padic z = c / a, w = (a * d - b * c) / a;
        int m = w.valuation() - 1;
        if (m < 0) throw StructureError("canonicalize: unexpected second invariant");
        rep = VertexRep::g1(detail::teich_digits(z.scale_p(-1), m));
    }
    PMat kappa = vertex_matrix(rep, p).inverse() * g;
    return {rep, kappa};
}

// Values known to vanish mod p^precision() are pruned; exact zeros always.
class CompactTreeFunction {
public:
    CompactTreeFunction(u64 p, int r, int precision = 1) : p_(p), r_(r), prec_(precision) {
        if (r < 0) throw HypothesisError("negative weight");
    }

    u64 p() const { return p_; }
    int r() const { return r_; }
    int precision() const { return prec_; }
    void set_precision(int n) { prec_ = n; }
    const std::map<VertexRep, PadicSymVector>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // Adds [vertex, v]; the vertex must already be canonical.
    void add(const VertexRep& at, const PadicSymVector& v) {
        if (static_cast<int>(v.size()) != r_ + 1) throw HypothesisError("add: vector has the wrong degree");
        auto it = terms_.find(at);
        if (it == terms_.end()) {
            if (!negligible(v)) terms_.emplace(at, v);
            return;
        }
        it->second = sym_add(it->second, v);
        if (negligible(it->second)) terms_.erase(it);
    }

    // Adds [g, v] for an arbitrary g in GL2(Q_p).
    void add_at(const PMat& g, const PadicSymVector& v) {
        Canonical c = canonicalize(g);
        add(c.rep, act_KZ(c.kappa, v));
    }

    friend CompactTreeFunction operator+(CompactTreeFunction x, const CompactTreeFunction& y) {
        x.check_compatible(y);
        for (const auto& [k, v] : y.terms_) x.add(k, v);
        return x;
    }

    friend CompactTreeFunction operator-(CompactTreeFunction x, const CompactTreeFunction& y) {
        x.check_compatible(y);
        Padic m1 = -Padic::one(x.p_);
        for (const auto& [k, v] : y.terms_) x.add(k, sym_scale(v, m1));
        return x;
    }

    CompactTreeFunction scaled(const Padic& c) const {
        CompactTreeFunction out(p_, r_, prec_);
        for (const auto& [k, v] : terms_) out.add(k, sym_scale(v, c));
        return out;
    }

    // Terms at exactly the given radius.
    CompactTreeFunction at_radius(int rad) const {
        CompactTreeFunction out(p_, r_, prec_);
        for (const auto& [k, v] : terms_)
            if (k.radius() == rad) out.terms_.emplace(k, v);
        return out;
    }

    int max_radius() const {
        int m = -1;
        for (const auto& kv : terms_) m = std::max(m, kv.first.radius());
        return m;
    }

private:
    bool negligible(const PadicSymVector& v) const { return sym_is_zero(v) && sym_min_abs(v) >= prec_; }

    void check_compatible(const CompactTreeFunction& o) const {
        if (o.p_ != p_ || o.r_ != r_) throw HypothesisError("tree functions over different (p, r)");
    }

    u64 p_;
    int r_, prec_;
    std::map<VertexRep, PadicSymVector> terms_;
};

// g . f, i.e. [h, v] -> [g h, v], re-canonicalised.
inline CompactTreeFunction translate(const PMat& g, const CompactTreeFunction& f) {
    CompactTreeFunction out(f.p(), f.r(), f.precision());
    for (const auto& [k, v] : f.terms()) out.add_at(g * vertex_matrix(k, f.p()), v);
    return out;
}

namespace detail {

inline void hecke_g0(const VertexRep& at, const PadicSymVector& v, bool plus, bool minus, CompactTreeFunction& out) {
    u64 p = out.p();
    Padic zero = Padic::zero(p), one = Padic::one(p), pp = one.scale_p(1);
    if (plus) {
        for (u64 l = 0; l < p; ++l) {
            VertexRep nxt = at;
            nxt.digits.push_back(l);
            ++nxt.m;
            // v(X, -[l] X + p Y)
            out.add(nxt, substitute({one, -Padic::teich(l, p), zero, pp}, v));
        }
    }
    if (minus) {
        if (at.m == 0) {
            out.add(VertexRep::alpha(), substitute({pp, zero, zero, one}, v));
        } else {
            VertexRep prev = at;
            u64 last = prev.digits.back();
            prev.digits.pop_back();
            --prev.m;
            // v(pX, [last] X + Y)
            out.add(prev, substitute({pp, Padic::teich(last, p), zero, one}, v));
        }
    }
}

// g1(m, lam) = w g0(m+1, p lam) w, and w [g0(n, p nu), u] = [g1(n-1, nu), w u].
inline void hecke_g1(const VertexRep& at, const PadicSymVector& v, bool plus, bool minus, CompactTreeFunction& out) {
    CompactTreeFunction tmp(out.p(), out.r(), out.precision());
    std::vector<u64> d{0};
    d.insert(d.end(), at.digits.begin(), at.digits.end());
    hecke_g0(VertexRep::g0(d), sym_swap(v), plus, minus, tmp);
    for (const auto& [k, u] : tmp.terms()) {
        if (k.m == 0) {
            out.add(VertexRep::identity(), sym_swap(u));
            continue;
        }
        if (k.digits.front() != 0) throw StructureError("hecke: conjugated support left the g1 half-tree");
        out.add(VertexRep::g1(std::vector<u64>(k.digits.begin() + 1, k.digits.end())), sym_swap(u));
    }
}

inline CompactTreeFunction hecke_parts(const CompactTreeFunction& f, bool plus, bool minus) {
    CompactTreeFunction out(f.p(), f.r(), f.precision());
    for (const auto& [k, v] : f.terms()) {
        if (k.side == 0)
            hecke_g0(k, v, plus, minus, out);
        else
            hecke_g1(k, v, plus, minus, out);
    }
    return out;
}

}  // namespace detail

// T+ moves one step away from the vertex of Id, T- one step towards it
// (from Id itself, T- lands on alpha).
inline CompactTreeFunction hecke_plus(const CompactTreeFunction& f) { return detail::hecke_parts(f, true, false); }
inline CompactTreeFunction hecke_minus(const CompactTreeFunction& f) { return detail::hecke_parts(f, false, true); }
inline CompactTreeFunction hecke_T(const CompactTreeFunction& f) { return detail::hecke_parts(f, true, true); }

// (T - a_p) f.
inline CompactTreeFunction hecke_shift(const CompactTreeFunction& f, const Padic& ap) {
    return hecke_T(f) - f.scaled(ap);
}

constexpr int kInfiniteValuation = INT_MAX;

// Minimum coefficient valuation; kInfiniteValuation for f = 0.  An
// imprecise zero below every known valuation makes the answer undecidable.
inline int min_valuation(const CompactTreeFunction& f) {
    int v = kInfiniteValuation, zero_abs = kInfiniteValuation;
    for (const auto& kv : f.terms())
        for (const Padic& x : kv.second) {
            if (!x.is_zero())
                v = std::min(v, x.valuation());
            else if (!x.is_exact_zero())
                zero_abs = std::min(zero_abs, x.abs_precision());
        }
    if (zero_abs < v) throw PrecisionError("min_valuation: a coefficient is only known to O(p^" + std::to_string(zero_abs) + ")", v);
    return v;
}

// Whether every coefficient has valuation >= x, deciding imprecise zeros
// against x only.
inline bool valuation_at_least(const CompactTreeFunction& f, int x) {
    for (const auto& kv : f.terms())
        for (const Padic& c : kv.second) {
            if (!c.is_zero()) {
                if (c.valuation() < x) return false;
            } else if (c.abs_precision() < x) {
                throw PrecisionError("valuation_at_least: coefficient undetermined", x);
            }
        }
    return true;
}

using ReducedFunction = std::map<VertexRep, Vec>;

// Coefficientwise reduction mod p of an integral function; zero values pruned.
inline ReducedFunction reduce_mod_p(const CompactTreeFunction& f) {
    ReducedFunction out;
    for (const auto& [k, v] : f.terms()) {
        Vec x(v.size(), 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].is_zero()) {
                if (v[i].abs_precision() < 1) throw PrecisionError("reduce_mod_p: coefficient undetermined mod p", 1);
                continue;
            }
            if (v[i].valuation() < 0) throw HypothesisError("reduce_mod_p: function is not integral at " + k.str());
            x[i] = v[i].reduce_mod_p();
        }
        if (!is_zero_vec(x)) out.emplace(k, std::move(x));
    }
    return out;
}

// Maps a vector of V_r to the target space, or nullopt when it is outside
// the projector's domain.
using Projector = std::function<std::optional<Vec>(const Vec&)>;

// Reduction mod p followed by a per-vertex projection; throws
// StructureError when some value falls outside the projector's domain.
inline ReducedFunction reduce_and_project(const CompactTreeFunction& f, const Projector& pr) {
    ReducedFunction out;
    for (const auto& [k, v] : reduce_mod_p(f)) {
        auto y = pr(v);
        if (!y) throw StructureError("reduce_and_project: value at " + k.str() + " is outside the domain of the projection");
        if (!is_zero_vec(*y)) out.emplace(k, std::move(*y));
    }
    return out;
}

inline std::string reduced_str(const ReducedFunction& f) {
    if (f.empty()) return "0";
    std::string s;
    for (const auto& [k, v] : f) {
        if (!s.empty()) s += " + ";
        s += "[" + k.str() + ", (";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        s += ")]";
    }
    return s;
}

}  // namespace slope1
