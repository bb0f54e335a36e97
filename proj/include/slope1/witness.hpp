// slope1/witness.hpp
// SPDX-License-Identifier: Apache-2.0
//
// The explicit functions f on the tree with (T - a_p) f integral that kill
// or pair off Jordan-Holder factors of P, and their replay: build f, apply
// T - a_p, check integrality, reduce mod p, project every value into the
// relevant graded piece and compare with the expected formal sum.
//
// Notation: r = a mod p-1 with 1 <= a <= p-1, s = r-p-1, t = v(r-2),
// c = (a_p^2 - C(r,2) p^2) / (p a_p), tau = v(c), t0 = min(tau, t).
//
//   W1   3 <= a <= p-1, r > 2p          image [Id, X^(p-a+1)] in ind J1
//   W2   ... and p !| r-a               image in ind J0
//   W3   ... and p !| r-a, p >= 5       image in ind J2
//   W4   a = 1, r > 2p                  image [alpha, -Y^(p-2)] in ind J2
//   W5   a = 1, r > 2p, p | r           image [g0(0,0), -X] in ind J1
//   W6   a = 1, r > 2p, p | r           image -(T^2 - cT + 1)[Id, X^(p-2)] in ind J0
//   W7   a = 2, p > 3                   (T - a_p) chi up to p^(t+1) h + O(p^(t0+2))
//   W8   a = 2, p > 3, tau >= t         image in ind J2
//   W9   a = 2, r > 2p                  image in ind J1
//   W10  a = 2, p > 3, tau <= t         image in ind J0
//   W11  a = 2, r > 2p                  image under the projection W1 -> J0
#pragma once

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "binomial.hpp"
#include "pstructure.hpp"
#include "tree.hpp"

namespace slope1 {

inline const std::vector<std::string>& witness_cases() {
    static const std::vector<std::string> ids{"W1", "W2", "W3", "W4", "W5", "W6", "W7", "W8", "W9", "W10", "W11"};
    return ids;
}

struct WitnessImageTerm {
    VertexRep vertex;
    std::string jh_component;
    Vec vector;
};

struct WitnessReport {
    std::string case_id;
    u64 p = 0;
    int r = 0;
    std::string ap;
    bool integral = false;
    int min_valuation = 0;       // a lower bound when some coefficient is an imprecise zero
    std::string image_location;  // e.g. "ind J1 = V_3(x)D^3"
    std::vector<WitnessImageTerm> image;
    std::vector<WitnessImageTerm> claim;
    bool matches_claim = false;
    int precision_used = 0;
    std::string detail;
};

namespace detail {

struct WitnessCtx {
    u64 p;
    int r, a, P, s, t;
    Padic ap;
    int prec;

    Padic q(i64 num, i64 den = 1) const { return Padic::exact(num, den, p); }
    Padic binom(i64 n, i64 k) const { return Padic::from_int(binomial_exact(n, k), p); }
    const Padic& teich(u64 l) const { return Padic::teich(l, p); }
    Padic c() const { return (ap * ap - binom(r, 2).scale_p(2)) / ap.scale_p(1); }
    u64 fp(i64 num, i64 den = 1) const {
        return mulmod(reduce_signed(num, p), invmod(reduce_signed(den, p), p), p);
    }
    CompactTreeFunction zero() const { return CompactTreeFunction(p, r, prec); }
};

// Polynomials in Sym^r, indexed by the power of Y.
class Poly {
public:
    Poly(u64 p, int r) : r_(r), v_(sym_zero(p, r)) {}
    Poly& add(int yi, const Padic& c) {
        if (yi < 0 || yi > r_) throw StructureError("witness polynomial: monomial out of range");
        v_[static_cast<std::size_t>(yi)] += c;
        return *this;
    }
    Poly& add(const Poly& o, const Padic& c) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i] * c;
        return *this;
    }
    Poly scaled(const Padic& c) const {
        Poly out = *this;
        for (auto& x : out.v_) x *= c;
        return out;
    }
    const PadicSymVector& vec() const { return v_; }

private:
    int r_;
    PadicSymVector v_;
};

// Formal sums of F_p-vectors at vertices; zeros pruned.
class Claim {
public:
    Claim(u64 p, std::size_t dim) : p_(p), dim_(dim) {}
    Claim& add(const VertexRep& at, int idx, u64 c) {
        Vec& v = terms_.try_emplace(at, Vec(dim_, 0)).first->second;
        auto i = static_cast<std::size_t>(idx);
        v[i] = (v[i] + c % p_) % p_;
        if (is_zero_vec(v)) terms_.erase(at);
        return *this;
    }
    const ReducedFunction& get() const { return terms_; }

private:
    u64 p_;
    std::size_t dim_;
    ReducedFunction terms_;
};

enum class Target { J0, J1, J2, W1ToJ0, Raw };

// A bound v(T^- part) >= at_least (minus) or v(T^+ part) >= at_least.
struct SubClaim {
    std::string label;
    CompactTreeFunction part;
    bool minus;
    int at_least;
};

struct Witness {
    CompactTreeFunction f;
    Target target = Target::Raw;
    ReducedFunction claim;
    bool generates = false;
    std::vector<SubClaim> subclaims;
    // Extra per-case verification, run on (T - a_p) f; returns "" on success.
    std::function<std::string(const CompactTreeFunction&)> extra;
};

inline std::vector<u64> zeros(int m) { return std::vector<u64>(static_cast<std::size_t>(m), 0); }
inline VertexRep g0(std::vector<u64> d) { return VertexRep::g0(std::move(d)); }

// chi = sum_{l=0}^{t} a_p^l [g0(0^l), Y^r - X^(r-2) Y^2].
inline CompactTreeFunction chi(const WitnessCtx& w) {
    CompactTreeFunction f = w.zero();
    Poly v = Poly(w.p, w.r).add(w.r, w.q(1)).add(2, w.q(-1));
    for (int l = 0; l <= w.t; ++l) f.add(g0(zeros(l)), v.scaled(w.ap.pow(l)).vec());
    return f;
}

inline CompactTreeFunction chi_at(const WitnessCtx& w, const VertexRep& g) { return translate(vertex_matrix(g, w.p), chi(w)); }

// Valuation of x, capping an imprecise zero at its known precision.
inline int valuation_bound(const Padic& x) { return x.is_zero() ? x.abs_precision() : x.valuation(); }

inline int min_valuation_bound(const CompactTreeFunction& f) {
    int v = kInfiniteValuation;
    for (const auto& kv : f.terms())
        for (const Padic& x : kv.second)
            if (!x.is_exact_zero()) v = std::min(v, valuation_bound(x));
    return v;
}

// Sign of v(c) - t, undecidable only when c is an imprecise zero known to
// fewer than t + 1 digits.
inline int tau_compare(const Padic& c, int t) {
    if (!c.is_zero()) return c.valuation() < t ? -1 : c.valuation() > t ? 1 : 0;
    if (c.abs_precision() > t) return 1;
    throw PrecisionError("v(c) is undetermined at this precision", t + 1);
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw HypothesisError(what);
}

inline Witness build_w1(const WitnessCtx& w) {
    require(w.a >= 3 && w.r > 2 * w.P, "W1 needs 3 <= a <= p-1 and r > 2p");
    int r = w.r, a = w.a, P = w.P;
    Witness out{w.zero(), Target::J1, {}, true, {}, {}};
    Padic u = w.ap.inv();
    out.f.add(VertexRep::identity(), Poly(w.p, r).add(a + P - 2, u).add(a - 1, -u).vec());
    // theta X^(r-p-a+1) Y^(a-2) is the J1 anchor, normalized to X^(p-a+1).
    out.claim = Claim(w.p, static_cast<std::size_t>(P - a + 2)).add(VertexRep::identity(), 0, 1).get();
    out.subclaims.push_back({"T- f0 = O(p)", out.f, true, 1});
    return out;
}

inline Witness build_w2(const WitnessCtx& w) {
    require(w.a >= 3 && w.r > 2 * w.P && (w.r - w.a) % w.P != 0, "W2 needs 3 <= a <= p-1, r > 2p, p !| r-a");
    int r = w.r, a = w.a, P = w.P;
    Witness out{w.zero(), Target::J0, {}, false, {}, {}};
    Padic ip = w.q(1, P);
    out.f.add(VertexRep::identity(), Poly(w.p, r).add(1, ip).add(P, -ip).vec());
    Claim cl(w.p, static_cast<std::size_t>(a - 1));
    u64 k = w.fp(a - r, a);
    for (u64 l = 0; l < w.p; ++l) cl.add(g0({l}), 0, k);
    cl.add(VertexRep::identity(), 0, w.p - (w.ap / w.q(P)).reduce_mod_p());
    out.claim = cl.get();
    out.subclaims.push_back({"T- f0 = O(p)", out.f, true, 1});
    return out;
}

inline Witness build_w3(const WitnessCtx& w) {
    require(w.a >= 3 && w.r > 2 * w.P && (w.r - w.a) % w.P != 0 && w.p >= 5,
            "W3 needs p >= 5, 3 <= a <= p-1, r > 2p, p !| r-a");
    int r = w.r, a = w.a, P = w.P;
    Witness out{w.zero(), Target::J2, {}, false, {}, {}};
    CompactTreeFunction f2 = w.zero(), f1 = w.zero(), f0 = w.zero();
    Padic ip = w.q(1, P);
    Poly top = Poly(w.p, r).add(r, ip).add(r - P + 1, -ip);
    for (u64 l = 0; l < w.p; ++l) f2.add(g0({0, l}), top.vec());
    auto alphas = construct_alphas(w.p, r, "comb2");
    Padic k1 = w.q(P - 1, P) / w.ap;
    Poly mid(w.p, r);
    for (std::size_t i = 0; i < alphas.index.size(); ++i)
        mid.add(static_cast<int>(alphas.index[i]), Padic::from_int(alphas.values[i], w.p) * k1);
    f1.add(g0({0}), mid.vec());
    if (a == P - 1) f0.add(VertexRep::identity(), Poly(w.p, r).add(0, w.q(1 - P, P)).add(P - 1, w.q(P - 1, P)).vec());
    out.f = f2 + f1 + f0;

    std::size_t dim = static_cast<std::size_t>(P - a);
    Claim cl(w.p, dim);
    u64 u = (w.ap / w.q(P)).reduce_mod_p();
    for (u64 l = 0; l < w.p; ++l) cl.add(g0({0, l}), 0, u);
    cl.add(g0({0}), 0, w.p - w.fp(a - r, a));
    if (a == P - 1) cl.add(VertexRep::identity(), 0, u);
    out.claim = cl.get();
    out.subclaims.push_back({"T+ f1 = O(p)", f1, false, 1});
    out.subclaims.push_back({"T- f1 = O(p)", f1, true, 1});
    return out;
}

inline Witness build_w4(const WitnessCtx& w) {
    require(w.a == 1 && w.r > 2 * w.P, "W4 needs a = 1 and r > 2p");
    int r = w.r, P = w.P;
    Witness out{w.zero(), Target::J2, {}, true, {}, {}};
    Padic ip = w.q(1, P);
    out.f.add(VertexRep::identity(), Poly(w.p, r).add(r - 1, ip).add(r - P, w.q(-2, P)).add(r - 2 * P + 1, ip).vec());
    out.claim = Claim(w.p, static_cast<std::size_t>(P - 1)).add(VertexRep::alpha(), P - 2, w.p - 1).get();
    out.subclaims.push_back({"T+ f0 = O(p)", out.f, false, 1});
    return out;
}

inline Witness build_w5(const WitnessCtx& w) {
    require(w.a == 1 && w.r > 2 * w.P && w.r % w.P == 0, "W5 needs a = 1, r > 2p, p | r");
    int r = w.r, P = w.P;
    Witness out{w.zero(), Target::J1, {}, true, {}, {}};
    CompactTreeFunction f2 = w.zero(), f1 = w.zero(), f0 = w.zero();
    Padic ia = w.ap.inv();
    Poly top = Poly(w.p, r).add(r, w.q(1)).add(P, w.q(-1));
    for (u64 l = 1; l < w.p; ++l) f2.add(g0({0, l}), top.scaled(w.teich(l).pow(P - 2) * ia).vec());
    f2.add(g0({0, 0}), Poly(w.p, r).add(r - 1, w.q(1)).add(P - 1, w.q(-1)).scaled(w.q(1 - P) * ia).vec());
    auto betas = construct_betas(w.p, r);
    Poly mid = Poly(w.p, r).add(r - P, w.q(1, P)).add(r - 1, w.q(-1, P));
    Padic kb = w.q(P - 1) * ia * ia;
    for (std::size_t i = 0; i < betas.index.size(); ++i)
        mid.add(static_cast<int>(betas.index[i]), Padic::from_int(betas.values[i], w.p) * kb);
    f1.add(g0({0}), mid.vec());
    f0.add(VertexRep::identity(), Poly(w.p, r).add(0, w.q(1)).add(r - P, w.q(-1)).scaled(w.q(1 - P) * ia).vec());
    out.f = f2 + f1 + f0;
    out.claim = Claim(w.p, 2).add(g0({0, 0}), 0, w.p - 1).get();
    out.subclaims.push_back({"T+ f2 = O(p)", f2, false, 1});
    out.subclaims.push_back({"T- f0 = O(p)", f0, true, 1});
    return out;
}

inline Witness build_w6(const WitnessCtx& w) {
    require(w.a == 1 && w.r > 2 * w.P && w.r % w.P == 0, "W6 needs a = 1, r > 2p, p | r");
    int r = w.r, P = w.P;
    Witness out{w.zero(), Target::J0, {}, false, {}, {}};
    CompactTreeFunction f2 = w.zero(), f1 = w.zero(), f0 = w.zero();
    Padic ia = w.ap.inv();
    Poly top = Poly(w.p, r).add(r, ia).add(P, -ia);
    for (u64 l = 0; l < w.p; ++l)
        for (u64 m = 0; m < w.p; ++m) f2.add(g0({l, m}), top.vec());
    auto alphas = construct_alphas(w.p, r, "comb6");
    Poly mid = Poly(w.p, r).add(1, w.q(-1, P)).add(P, w.q(1, P));
    Padic ka = w.q(P - 1) * ia * ia;
    for (std::size_t i = 0; i < alphas.index.size(); ++i)
        mid.add(static_cast<int>(alphas.index[i]), Padic::from_int(alphas.values[i], w.p) * ka);
    for (u64 l = 0; l < w.p; ++l) f1.add(g0({l}), mid.vec());
    f0.add(VertexRep::identity(), Poly(w.p, r).add(1, w.q(1)).add(P, w.q(-1)).scaled(w.q(1 - P) * ia).vec());
    out.f = f2 + f1 + f0;

    Claim cl(w.p, static_cast<std::size_t>(P - 1));
    u64 c = (w.ap / w.q(P) - w.q(r - P) / w.ap).reduce_mod_p();
    for (u64 l = 0; l < w.p; ++l) {
        cl.add(g0({l}), 0, c);
        for (u64 m = 0; m < w.p; ++m) cl.add(g0({l, m}), 0, w.p - 1);
    }
    cl.add(VertexRep::identity(), 0, w.p - 1);
    out.claim = cl.get();
    out.subclaims.push_back({"T+ f2 = O(p)", f2, false, 1});
    out.subclaims.push_back({"T- f0 = O(p)", f0, true, 1});
    return out;
}

inline void require_a2(const WitnessCtx& w, const std::string& id, bool need_big_p) {
    require(w.a == 2, id + " needs r = 2 mod p-1");
    require(!need_big_p || w.p > 3, id + " needs p > 3");
}

inline Witness build_w7(const WitnessCtx& w) {
    require_a2(w, "W7", true);
    int r = w.r;
    Witness out{chi(w), Target::Raw, {}, false, {}, {}};
    out.claim = Claim(w.p, static_cast<std::size_t>(r + 1)).add(VertexRep::alpha(), r, 1).get();
    Padic c = w.c();
    int tau = c.is_zero() ? c.abs_precision() : c.valuation();
    int t0 = std::min(tau, w.t), bound = std::min(w.t + 1, t0 + 2);
    WitnessCtx cx = w;
    out.extra = [cx, bound, t0](const CompactTreeFunction& img) -> std::string {
        CompactTreeFunction main = cx.zero();
        main.add(VertexRep::alpha(), sym_monomial(cx.p, cx.r, cx.r, cx.q(1)));
        main.add(VertexRep::identity(), sym_monomial(cx.p, cx.r, 2, cx.ap));
        CompactTreeFunction d = img - main;
        if (!valuation_at_least(d, bound))
            return "remainder has valuation < " + std::to_string(bound);
        // Only when p^(t+1) h is not swamped by the O(p^(t0+2)) error can h
        // be read off: its values must lie in the span of the translates
        // of X^r and X^(r-1) Y.
        if (cx.t + 1 >= t0 + 2) return "";
        Subspace span = closure(sym_module(cx.p, cx.r), {monomial(cx.r, 0), monomial(cx.r, 1)});
        CompactTreeFunction h = d.scaled(Padic::one(cx.p).scale_p(-bound));
        for (const auto& [k, v] : reduce_mod_p(h))
            if (!span.contains(v)) return "h has a term outside <[g, X^r], [g, X^(r-1) Y]> at " + k.str();
        return "";
    };
    return out;
}

inline Witness build_w8(const WitnessCtx& w) {
    require_a2(w, "W8", true);
    Padic c = w.c();
    require(tau_compare(c, w.t) >= 0, "W8 needs tau >= t");
    int r = w.r, P = w.P;
    Witness out{w.zero(), Target::J2, {}, false, {}, {}};
    CompactTreeFunction f0 = w.zero(), finf = w.zero();
    Poly v0(w.p, r);
    for (int j = 2; j < r; j += P - 1) v0.add(j, w.binom(r, j));
    v0.add(2, w.q(static_cast<i64>(P) * (r - 2), 2));
    f0.add(VertexRep::identity(), v0.scaled(w.q(P - 1) / (w.ap.scale_p(1) * w.q(2 - r))).vec());
    Padic k = w.q(1, static_cast<i64>(P) * (2 - r));
    for (u64 l = 0; l < w.p; ++l) finf = finf + chi_at(w, g0({l})).scaled(l == 0 ? k * w.q(1 - P) : k);
    out.f = f0 + finf;
    Claim cl(w.p, static_cast<std::size_t>(P - 2));
    u64 ubar = (c / w.q(2 - r)).reduce_mod_p();
    for (u64 l = 0; l < w.p; ++l) cl.add(g0({l}), 0, ubar);
    cl.add(VertexRep::identity(), 0, w.p - w.fp(1, 2));
    out.claim = cl.get();
    out.subclaims.push_back({"T- f0 = O(p)", f0, true, 1});
    return out;
}

inline Witness build_w9(const WitnessCtx& w) {
    require_a2(w, "W9", false);
    require(w.r > 2 * w.P, "W9 needs r > 2p");
    int r = w.r, P = w.P;
    Witness out{w.zero(), Target::J1, {}, false, {}, {}};
    Claim cl(w.p, 1);
    if (r % P == 0) {
        Padic ia = w.ap.inv();
        out.f.add(VertexRep::identity(), Poly(w.p, r).add(P, ia).add(2 * P - 1, -ia).vec());
        cl.add(VertexRep::identity(), 0, w.p - 1);
        out.generates = true;
        out.subclaims.push_back({"T- f0 = O(p)", out.f, true, 1});
    } else {
        CompactTreeFunction f0 = w.zero(), f1 = w.zero();
        Padic k0 = -w.q(r, 2) / w.ap;
        f0.add(VertexRep::identity(), Poly(w.p, r).add(1, w.q(1)).add(P, w.q(-2)).add(2 * P - 1, w.q(1)).scaled(k0).vec());
        f1.add(g0({0}), Poly(w.p, r).add(1, w.q(1, P)).add(P, w.q(-1, P)).vec());
        out.f = f0 + f1;
        u64 m = w.p - w.fp(r, 2);  // -r/2
        u64 nu = (w.q(static_cast<i64>(r) * P, 2) / w.ap).reduce_mod_p();
        cl.add(VertexRep::identity(), 0, m);
        cl.add(g0({0}), 0, mulmod(w.p - m, nu, w.p) % w.p);
        for (u64 l = 0; l < w.p; ++l) cl.add(g0({0, l}), 0, m);
        out.subclaims.push_back({"T- f0 = O(p)", f0, true, 1});
        out.subclaims.push_back({"T- f1 = O(p)", f1, true, 1});
    }
    out.claim = cl.get();
    return out;
}

inline Witness build_w10(const WitnessCtx& w) {
    require_a2(w, "W10", true);
    Padic c = w.c();
    require(tau_compare(c, w.t) <= 0, "W10 needs tau <= t");
    int r = w.r, P = w.P;
    Witness out{w.zero(), Target::J0, {}, false, {}, {}};
    Padic ia = w.ap.inv();

    Poly A = Poly(w.p, r).add(1, w.q(1));
    Poly B(w.p, r);
    for (int j = P; j < r - 1; j += P - 1) B.add(j, w.binom(r - 1, j));
    Poly C = Poly(w.p, r).add(P, w.q(1));
    Poly Phi(w.p, r);
    for (int j = P; j <= r - 1; j += P - 1) Phi.add(j, w.binom(r, j));
    Phi.add(P, w.q(r - 2));

    CompactTreeFunction f0 = w.zero(), f1 = w.zero(), finf = w.zero();
    Padic k0 = w.q(1 - P) / (c.scale_p(1));
    Poly v0 = A.scaled(k0);
    v0.add(B, k0 * w.q(r) * ia * ia / w.q(2) * w.q(P * P));
    v0.add(C, w.q(P - 1) * ia);
    f0.add(VertexRep::identity(), v0.vec());

    Padic k1 = -(w.q(2) * w.ap * c).inv();
    for (u64 l = 0; l < w.p; ++l) f1.add(g0({l}), Phi.scaled(l == 0 ? k1 * w.q(1 - P) : k1).vec());

    Padic kinf = (w.q(2) * c).inv();
    auto psi = [&](u64 l) {
        CompactTreeFunction out_psi = w.zero();
        for (u64 m = 1; m < w.p; ++m) out_psi = out_psi + chi_at(w, g0({l, m})).scaled(w.teich(m).inv());
        return out_psi;
    };
    for (u64 l = 0; l < w.p; ++l) finf = finf + psi(l).scaled(l == 0 ? kinf : kinf * w.q(1, 1 - P));
    out.f = f0 + f1 + finf;

    Claim cl(w.p, static_cast<std::size_t>(P));
    u64 k = (w.q(2 - r) / (w.q(2) * c)).reduce_mod_p();
    for (u64 l = 0; l < w.p; ++l) cl.add(g0({l}), 0, k);
    cl.add(VertexRep::identity(), 0, w.p - 1);
    out.claim = cl.get();
    out.subclaims.push_back({"T- f0 = O(p^2)", f0, true, 2});
    return out;
}

inline Witness build_w11(const WitnessCtx& w) {
    require_a2(w, "W11", false);
    require(w.r > 2 * w.P, "W11 needs r > 2p");
    int r = w.r, P = w.P;
    Witness out{w.zero(), Target::W1ToJ0, {}, false, {}, {}};
    Padic ip = w.q(1, P);
    out.f.add(VertexRep::identity(), Poly(w.p, r).add(1, ip).add(P, -ip).vec());
    Claim cl(w.p, static_cast<std::size_t>(P));
    cl.add(VertexRep::identity(), 0, w.p - (w.ap / w.q(P)).reduce_mod_p());
    for (u64 l = 0; l < w.p; ++l) cl.add(g0({l}), 0, w.fp(1 - r));
    out.claim = cl.get();
    return out;
}

inline WitnessCtx make_ctx(u64 p, int r, const Padic& ap, int prec) {
    if (p < 3 || !is_prime(p)) throw HypothesisError("witness: p must be an odd prime");
    if (ap.prime() != p) throw HypothesisError("witness: a_p is over a different prime");
    if (r < 2 * static_cast<int>(p)) throw HypothesisError("witness: needs r >= 2p");
    if (ap.is_zero() || ap.valuation() != 1) throw HypothesisError("witness: needs v(a_p) = 1");
    int a = residue_a(p, r);
    return {p, r, a, static_cast<int>(p), r - static_cast<int>(p) - 1, vp(static_cast<i64>(r - 2), p), ap.truncated(prec), prec};
}

inline Witness build(const std::string& id, const WitnessCtx& w) {
    static const std::map<std::string, Witness (*)(const WitnessCtx&)> table{
        {"W1", build_w1}, {"W2", build_w2}, {"W3", build_w3}, {"W4", build_w4},  {"W5", build_w5},   {"W6", build_w6},
        {"W7", build_w7}, {"W8", build_w8}, {"W9", build_w9}, {"W10", build_w10}, {"W11", build_w11}};
    auto it = table.find(id);
    if (it == table.end()) throw HypothesisError("unknown witness case " + id);
    return it->second(w);
}

}  // namespace detail

// t + 6 for the a = 2 cases, 6 otherwise.
inline int witness_precision(const std::string& id, u64 p, int r) {
    bool a2 = id == "W7" || id == "W8" || id == "W9" || id == "W10" || id == "W11";
    return a2 ? vp(static_cast<i64>(r - 2), p) + 6 : 6;
}

inline CompactTreeFunction build_witness(const std::string& id, u64 p, int r, const Padic& ap, int precision = 0) {
    if (precision <= 0) precision = witness_precision(id, p, r);
    return detail::build(id, detail::make_ctx(p, r, ap, precision)).f;
}

namespace detail {

using Tamper = std::function<CompactTreeFunction(const CompactTreeFunction&)>;

inline WitnessReport verify_once(const std::string& id, u64 p, int r, const Padic& ap, int prec, const Tamper& tamper) {
    WitnessCtx w = make_ctx(p, r, ap, prec);
    Witness wt = build(id, w);
    if (tamper) wt.f = tamper(wt.f);
    WitnessReport rep;
    rep.case_id = id;
    rep.p = p;
    rep.r = r;
    rep.ap = ap.str();
    rep.precision_used = prec;

    CompactTreeFunction img = hecke_shift(wt.f, w.ap);
    rep.min_valuation = min_valuation_bound(img);
    rep.integral = valuation_at_least(img, 0);
    std::vector<std::string> problems;
    if (!rep.integral) problems.push_back("(T - a_p) f is not integral");
    for (const auto& sc : wt.subclaims) {
        CompactTreeFunction g = sc.minus ? hecke_minus(sc.part) : hecke_plus(sc.part);
        if (!valuation_at_least(g, sc.at_least)) problems.push_back(sc.label + " fails");
    }
    if (wt.extra) {
        std::string e = wt.extra(img);
        if (!e.empty()) problems.push_back(e);
    }

    PStructure ps(p, r);
    std::optional<W1Projection> w1;
    Projector pr;
    std::string comp;
    switch (wt.target) {
        case Target::J0:
        case Target::J1:
        case Target::J2: {
            int i = wt.target == Target::J0 ? 0 : wt.target == Target::J1 ? 1 : 2;
            pr = [&ps, i](const Vec& v) { return ps.to_J(v, i); };
            comp = "J" + std::to_string(i) + " = " + (ps.label(i) ? ps.label(i)->str() : std::string("0"));
            break;
        }
        case Target::W1ToJ0:
            w1.emplace(ps);
            pr = [&w1](const Vec& v) { return (*w1)(v); };
            comp = "W1 -> J0 = " + (ps.label(0) ? ps.label(0)->str() : std::string("0"));
            break;
        case Target::Raw:
            pr = [](const Vec& v) { return std::optional<Vec>(v); };
            comp = "V_" + std::to_string(r);
            break;
    }
    rep.image_location = "ind " + comp;

    ReducedFunction got;
    if (rep.integral) {
        try {
            got = reduce_and_project(img, pr);
        } catch (const StructureError& e) {
            problems.push_back(e.what());
        }
    }
    for (const auto& [k, v] : got) rep.image.push_back({k, comp, v});
    for (const auto& [k, v] : wt.claim) rep.claim.push_back({k, comp, v});
    bool same = rep.integral && got == wt.claim;
    if (rep.integral && !same) problems.push_back("image " + reduced_str(got) + " differs from claim " + reduced_str(wt.claim));

    if (wt.generates && same) {
        int i = wt.target == Target::J0 ? 0 : wt.target == Target::J1 ? 1 : 2;
        const auto& lab = ps.label(i);
        bool gen = lab && wt.claim.size() == 1;
        if (gen) {
            Module m = sym_module(p, lab->a, lab->b);
            gen = closure(m, {wt.claim.begin()->second}).dim() == m.dim;
        }
        if (!gen) problems.push_back("claimed image does not generate ind " + comp);
    }

    rep.matches_claim = problems.empty();
    for (const auto& s : problems) rep.detail += (rep.detail.empty() ? "" : "; ") + s;
    if (rep.detail.empty()) rep.detail = "image " + reduced_str(got);
    return rep;
}

}  // namespace detail

// Replays one witness.  Precision starts at witness_precision and is raised
// by 2 while a comparison is undecidable, up to the digits a_p carries.
// `tamper` rewrites the function before T - a_p is applied (for tests).
inline WitnessReport verify_witness(const std::string& id, u64 p, int r, const Padic& ap, const detail::Tamper& tamper = {}) {
    int prec = witness_precision(id, p, r);
    int cap = std::min(Padic::max_rel(p), ap.abs_precision());
    for (;;) {
        try {
            return detail::verify_once(id, p, r, ap, prec, tamper);
        } catch (const PrecisionError&) {
            if (prec + 2 > cap) throw;
            prec += 2;
        }
    }
}

// The cases whose hypotheses hold at (p, r, a_p).
inline std::vector<std::string> applicable_witnesses(u64 p, int r, const Padic& ap) {
    std::vector<std::string> out;
    for (const auto& id : witness_cases()) {
        try {
            detail::Witness w = detail::build(id, detail::make_ctx(p, r, ap, witness_precision(id, p, r)));
            (void)w;
            out.push_back(id);
        } catch (const HypothesisError&) {
        }
    }
    return out;
}

}  // namespace slope1
