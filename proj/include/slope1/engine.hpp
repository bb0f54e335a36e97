// slope1/engine.hpp
// SPDX-License-Identifier: Apache-2.0
//
// The slope-one dispatch: from (p, k, a_p) with v(a_p) = 1 to the
// semisimplified mod p reduction, its ramification refinement, the mod p
// Local Langlands descriptor, and a consistency check against the
// Jordan-Holder factors of P and the witness replays.
//
// Conventions: r = k - 2, b = r mod p-1 in [2, p], a = r mod p-1 in
// [1, p-1], t = v(r - 2), x = a_p/p - C(r,2) p/a_p.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "binomial.hpp"
#include "fq.hpp"
#include "padic.hpp"
#include "pstructure.hpp"
#include "witness.hpp"

namespace slope1 {

struct ApInput {
    Padic value;
    std::string text;  // "num/den" in lowest terms, or the digit string
};

// "num/den", "num" or the digit form "v:d0,d1,...".
inline ApInput parse_ap(const std::string& spec, u64 p) {
    if (spec.find(':') != std::string::npos) return {Padic::parse_digits(spec, p), spec};
    auto slash = spec.find('/');
    BigInt num, den = 1;
    try {
        num = BigInt(spec.substr(0, slash));
        if (slash != std::string::npos) den = BigInt(spec.substr(slash + 1));
    } catch (const std::exception&) {
        throw HypothesisError("malformed a_p: " + spec);
    }
    if (den == 0) throw HypothesisError("a_p has zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {Padic::exact(num, den, p), num.str() + "/" + den.str()};
}

struct CrystallineParams {
    u64 p = 0;
    int k = 0;
    int r = 0;
    int b = 0;
    int a = 0;
    int t = 0;  // v(r - 2); meaningless when r = 2
    Padic ap;
    std::string ap_text;

    static CrystallineParams make(u64 p, int k, const ApInput& in, int precision = 0) {
        if (p < 5 || !is_prime(p)) throw HypothesisError("p must be a prime >= 5");
        if (k < 4) throw HypothesisError("k must be at least 4");
        if (in.value.prime() != p) throw HypothesisError("a_p is over a different prime");
        CrystallineParams c;
        c.p = p;
        c.k = k;
        c.r = k - 2;
        c.a = residue_a(p, c.r);
        c.b = c.a == 1 ? static_cast<int>(p) : c.a;
        c.t = c.r == 2 ? 0 : vp(static_cast<i64>(c.r - 2), p);
        c.ap = precision > 0 && precision < in.value.abs_precision() ? in.value.truncated(precision) : in.value;
        c.ap_text = in.text;
        if (c.ap.is_zero()) {
            if (c.ap.abs_precision() >= 2) throw HypothesisError("slope is not 1: v(a_p) >= 2");
            throw PrecisionError("a_p is zero to the precision given; v(a_p) undetermined", 2);
        }
        if (c.ap.valuation() != 1)
            throw HypothesisError("slope is not 1: v(a_p) = " + std::to_string(c.ap.valuation()));
        return c;
    }

    static CrystallineParams make(u64 p, int k, const std::string& ap, int precision = 0) {
        return make(p, k, parse_ap(ap, p), precision);
    }
};

// Absolute precision of a_p that decides every comparison of the branch.
// For b = 2, x is known to p^(N-1) and u = 2x/(2-r) to p^(N-1-t); the
// trichotomy needs x mod p^(t+1) and the ramification test needs u mod p^2.
inline int needed_precision(const CrystallineParams& c) {
    if (c.b == 2 && c.r != 2) return c.t + 3;
    return 2;
}

struct ReductionResult {
    enum class Kind { Irreducible, Reducible };
    struct Character {
        bool inverse = false;  // mu_{lambda^-1} rather than mu_lambda
        int omega_exp = 0;     // in [0, p-2]
    };

    Kind kind = Kind::Irreducible;
    int induced_exp = 0;  // ind(omega_2^e), e in [0, p^2-2]
    std::optional<Fq> lambda;
    std::vector<Character> factors;  // larger omega exponent first

    bool reducible() const { return kind == Kind::Reducible; }

    friend bool operator==(const ReductionResult& x, const ReductionResult& y) {
        if (x.kind != y.kind) return false;
        if (x.kind == Kind::Irreducible) return x.induced_exp == y.induced_exp;
        if (x.factors.size() != y.factors.size()) return false;
        for (std::size_t i = 0; i < x.factors.size(); ++i)
            if (x.factors[i].inverse != y.factors[i].inverse || x.factors[i].omega_exp != y.factors[i].omega_exp)
                return false;
        return *x.lambda == *y.lambda;
    }

    std::string str() const {
        if (kind == Kind::Irreducible) return "ind(w2^" + std::to_string(induced_exp) + ")";
        std::string out;
        for (const auto& ch : factors) {
            if (!out.empty()) out += " + ";
            Fq mu = ch.inverse ? lambda->inv() : *lambda;
            out += "mu_" + mu.str() + " w^" + std::to_string(ch.omega_exp);
        }
        return out;
    }
};

namespace detail {

inline ReductionResult irreducible(u64 p, int e) {
    ReductionResult res;
    res.induced_exp = static_cast<int>(pmod(e, static_cast<i64>(p * p - 1)));
    return res;
}

// mu_lambda w^i + mu_{lambda^-1} w^j.
inline ReductionResult reducible(u64 p, const Fq& lambda, int i, int j) {
    ReductionResult res;
    res.kind = ReductionResult::Kind::Reducible;
    res.lambda = lambda;
    i64 m = static_cast<i64>(p) - 1;
    ReductionResult::Character x{false, static_cast<int>(pmod(i, m))}, y{true, static_cast<int>(pmod(j, m))};
    if (y.omega_exp > x.omega_exp) std::swap(x, y);
    res.factors = {x, y};
    return res;
}

inline Padic x_of(const CrystallineParams& c) {
    Padic half = c.ap.scale_p(-1);
    return half - Padic::from_int(binomial_exact(c.r, 2), c.p).scale_p(1) / c.ap;
}

inline Padic u_of(const CrystallineParams& c) {
    return x_of(c) * Padic::exact(2, 2 - c.r, c.p);
}

inline void require_precision(const CrystallineParams& c) {
    int need = needed_precision(c);
    if (c.ap.abs_precision() < need)
        throw PrecisionError("a_p carries " + std::to_string(c.ap.abs_precision()) +
                                 " digits; needed_precision = " + std::to_string(need),
                             need);
}

// The working copy: a_p cut to needed_precision, so the answer cannot
// depend on digits beyond it.
inline CrystallineParams working(const CrystallineParams& c) {
    require_precision(c);
    CrystallineParams w = c;
    w.ap = c.ap.truncated(needed_precision(c));
    return w;
}

inline Fq fq_residue(const Padic& x) { return Fq(x.prime(), x.reduce_mod_p()); }

}  // namespace detail

inline ReductionResult reduce_slope_one(const CrystallineParams& params) {
    CrystallineParams c = detail::working(params);
    u64 p = c.p;
    int P = static_cast<int>(p), b = c.b, r = c.r;
    if (b == 2) {
        // r = 2 has t infinite: only the first branch is possible.
        if (r == 2) return detail::irreducible(p, b + 1);
        Padic x = detail::x_of(c);
        int vx = x.is_zero() ? kInfiniteValuation : x.valuation();
        if (vx < c.t) return detail::irreducible(p, b + 1);
        if (vx > c.t) return detail::irreducible(p, b + P);
        return detail::reducible(p, detail::fq_residue(detail::u_of(c)), b, 1);
    }
    bool divides = (r - b) % P == 0;
    if (b < P) {
        if (divides) return detail::irreducible(p, b + 1);
        Padic lam = Padic::exact(b, b - r, p) * c.ap.scale_p(-1);
        return detail::reducible(p, detail::fq_residue(lam), b, 1);
    }
    if (!divides) return detail::irreducible(p, b + P);
    // lambda + 1/lambda = a_p/p - (r-p)/a_p; (r-p)/a_p is integral here.
    Padic cc = c.ap.scale_p(-1) - Padic::from_int(r - P, p) / c.ap;
    auto roots = solve_monic_quadratic(detail::fq_residue(cc));
    return detail::reducible(p, roots.first, 1, 1);
}

struct RamificationClass {
    enum class Kind { NotApplicable, PeuRamifiee, TresRamifiee, UnramifiedNonSplitStandardLattice, Undetermined };
    Kind kind = Kind::NotApplicable;
    std::string note;

    std::string str() const {
        switch (kind) {
            case Kind::NotApplicable: return "not_applicable";
            case Kind::PeuRamifiee: return "peu_ramifiee";
            case Kind::TresRamifiee: return "tres_ramifiee";
            case Kind::UnramifiedNonSplitStandardLattice: return "unramified_nonsplit_standard_lattice";
            case Kind::Undetermined: return "undetermined";
        }
        return "";
    }
};

inline RamificationClass classify_ramification(const CrystallineParams& params, const ReductionResult& res) {
    using K = RamificationClass::Kind;
    if (!res.reducible()) return {};
    CrystallineParams c = detail::working(params);
    u64 p = c.p;
    int P = static_cast<int>(p), r = c.r;
    const Fq& lam = *res.lambda;
    Fq one(p, 1), minus_one(p, p - 1);
    bool pm1 = lam == one || lam == minus_one;
    u64 ap_bar = c.ap.scale_p(-1).reduce_mod_p();

    if (c.b == 2 && r >= P + 1 && pm1) {
        if (reduce_signed(3 * static_cast<i64>(r) - 2, p) == 0)
            return {K::Undetermined, "r = 2/3 mod p: the extension type is not known in this case"};
        i64 eps = lam == one ? 1 : -1;
        u64 half_r = mulmod(reduce_signed(eps * r, p), invmod(2, p), p);
        if (ap_bar == half_r) return {K::PeuRamifiee, "a_p/p = eps r/2 mod p"};
        if (ap_bar == reduce_signed(eps * (1 - r), p)) {
            // a_p is rational, so Q_p(a_p) = Q_p and u - eps lies in p Z_p.
            Padic d = detail::u_of(c) - Padic::from_int(eps, p);
            bool small = !d.is_zero() && d.valuation() < 1;
            if (small) return {K::PeuRamifiee, "a_p/p = eps (1-r) mod p and v(u - eps) < 1"};
            return {K::TresRamifiee, "a_p/p = eps (1-r) mod p and v(u - eps) >= 1"};
        }
        return {K::Undetermined, "a_p/p is neither eps r/2 nor eps (1-r) mod p"};
    }
    if (c.b == P - 1 && r >= P + 1 && (r - c.b) % P != 0) {
        u64 s = reduce_signed(r + 1, p);
        if (ap_bar == s || ap_bar == (p - s) % p) return {K::PeuRamifiee, "a_p/p = +-(r+1) mod p"};
        return {};
    }
    if (c.b == P && (r - c.b) % P == 0 && r >= 3 * P - 2 && pm1)
        return {K::UnramifiedNonSplitStandardLattice,
                "proved for the reduction of the standard lattice only; other lattices may differ"};
    return {};
}

struct LLCFactor {
    int r = 0;  // weight V_r, 0 <= r <= p-1
    Fq lambda;
    int eta_omega_exp = 0;  // eta = w^m, m in [0, p-2]

    std::string str() const {
        return "pi(" + std::to_string(r) + ", " + lambda.str() + ", w^" + std::to_string(eta_omega_exp) + ")";
    }
    friend bool operator==(const LLCFactor& x, const LLCFactor& y) {
        return x.r == y.r && x.lambda == y.lambda && x.eta_omega_exp == y.eta_omega_exp;
    }
};

using LLCDescriptor = std::vector<LLCFactor>;

// ind(w2^(r'+1)) (x) w^m  ->  pi(r', 0, w^m), with r'+1 = e mod p+1 in
// [1, p] (never 0 mod p+1 for an irreducible) and m read off from the rest;
// mu_x w^i + mu_{1/x} w^j = (mu_x w^(r'+1) + mu_{1/x}) (x) w^j  ->
// pi(r', x, w^j) + pi([p-3-r'], 1/x, w^(j+r'+1)), r' = i-j-1 mod p-1.
inline LLCDescriptor llc(const ReductionResult& res, u64 p) {
    i64 P = static_cast<i64>(p), m = P - 1;
    if (!res.reducible()) {
        i64 e = res.induced_exp;
        i64 rp = pmod(e - 1, P + 1);
        if (rp == P) throw StructureError("llc: ind(w2^e) with p+1 | e is reducible");
        i64 eta = pmod((e - rp - 1) / (P + 1), m);
        if ((e - rp - 1) % (P + 1) != 0) throw StructureError("llc: exponent normalization failed");
        return {{static_cast<int>(rp), Fq(p, 0), static_cast<int>(eta)}};
    }
    const auto& f1 = res.factors[0];
    const auto& f2 = res.factors[1];
    Fq x = f1.inverse ? res.lambda->inv() : *res.lambda;
    i64 i = f1.omega_exp, j = f2.omega_exp;
    i64 rp = pmod(i - j - 1, m);
    LLCFactor first{static_cast<int>(rp), x, static_cast<int>(pmod(j, m))};
    LLCFactor second{static_cast<int>(pmod(P - 3 - rp, m)), x.inv(), static_cast<int>(pmod(j + rp + 1, m))};
    return {first, second};
}

// Weights V_r (x) D^m whose presence in P accounts for the factor:
// pi(r, 0, eta) = pi(p-1-r, 0, eta w^r), and pi(0, l, eta), pi(p-1, l, eta)
// have the same semisimplification.
inline std::vector<JHLabel> llc_weights(const LLCFactor& f, u64 p) {
    i64 P = static_cast<i64>(p);
    std::vector<JHLabel> out{jh_label(p, f.r, f.eta_omega_exp)};
    if (f.lambda.is_zero())
        out.push_back(jh_label(p, P - 1 - f.r, f.eta_omega_exp + f.r));
    else if (f.r == 0 || f.r == P - 1)
        out.push_back(jh_label(p, P - 1 - f.r, f.eta_omega_exp));
    return out;
}

struct CrossCheckReport {
    bool skipped = false;
    bool ok = true;
    std::string reason;              // why skipped, or the first failure
    std::vector<JHLabel> jh;         // labels of the nonzero J_i
    std::vector<int> killed;         // J_i whose whole induction dies
    std::vector<std::string> lines;  // one per check, for reports
};

namespace detail {

inline std::optional<u64> claim_coeff(const WitnessReport& rep, const VertexRep& at) {
    for (const auto& term : rep.claim)
        if (term.vertex == at && !term.vector.empty()) return term.vector[0];
    return std::nullopt;
}

// A claim x [c] + y sum_l [c l] (+ y [parent]) is y (T - (-x/y)) [c].
inline std::optional<Fq> claim_eigenvalue(const WitnessReport& rep, const VertexRep& centre, const VertexRep& child) {
    u64 p = rep.p;
    auto x = claim_coeff(rep, centre), y = claim_coeff(rep, child);
    if (!y || *y == 0) return std::nullopt;
    return -Fq(p, x.value_or(0)) / Fq(p, *y);
}

}  // namespace detail

// (i) every LLC factor has a weight among the J_i not killed by a witness;
// (ii) every applicable witness replays, and the Hecke eigenvalue its image
// exhibits is lambda or 1/lambda as the engine says.
inline CrossCheckReport cross_check(const CrystallineParams& c) {
    CrossCheckReport rep;
    u64 p = c.p;
    if (c.r < 2 * static_cast<int>(p)) {
        rep.skipped = true;
        rep.reason = "cross_check needs r >= 2p";
        return rep;
    }
    auto fail = [&](const std::string& why) {
        if (rep.ok) rep.reason = why;
        rep.ok = false;
        rep.lines.push_back("FAIL " + why);
    };
    ReductionResult res = reduce_slope_one(c);
    LLCDescriptor desc = llc(res, p);

    PStructure ps(p, c.r);
    std::vector<std::pair<int, JHLabel>> pieces;
    for (int i = 0; i < 3; ++i)
        if (ps.label(i)) {
            pieces.emplace_back(i, *ps.label(i));
            rep.jh.push_back(*ps.label(i));
        }

    const VertexRep id = VertexRep::identity(), g00 = VertexRep::g0({0}), g000 = VertexRep::g0({0, 0});
    for (const auto& wid : applicable_witnesses(p, c.r, c.ap)) {
        WitnessReport w = verify_witness(wid, p, c.r, c.ap);
        if (!w.integral || !w.matches_claim) {
            fail(wid + " does not replay: " + w.detail);
            continue;
        }
        rep.lines.push_back("ok   " + wid + " replays (" + w.image_location + ")");
        const std::string& loc = w.image_location;
        bool in_piece = loc.rfind("ind J", 0) == 0;
        if (in_piece && w.claim.size() == 1) {
            rep.killed.push_back(loc[5] - '0');
            continue;
        }
        std::optional<Fq> eig;
        bool inverse = false;
        if (wid == "W2" || wid == "W8" || wid == "W10") {
            eig = detail::claim_eigenvalue(w, id, g00);
            inverse = wid == "W8";
        } else if (wid == "W3") {
            eig = detail::claim_eigenvalue(w, g00, g000);
            inverse = true;
        } else if (wid == "W6") {
            // -[Id] + c sum [g0(l)] - sum [g0(l,m)] = -(T^2 - cT + 1)[Id] in ind J0.
            // c = 0 drops the radius-1 terms from the claim.
            auto x = detail::claim_coeff(w, id), y = detail::claim_coeff(w, g00);
            if (!x || *x == 0) {
                fail("W6 claim has no (T^2 - cT + 1) shape");
                continue;
            }
            Fq cw = Fq(p, y.value_or(0)) / -Fq(p, *x);
            if (!res.reducible()) {
                fail("W6 pairs J0 but the reduction is irreducible");
            } else if (cw != *res.lambda + res.lambda->inv()) {
                fail("W6 trace " + cw.str() + " != lambda + 1/lambda");
            } else {
                rep.lines.push_back("ok   W6 trace lambda + 1/lambda = " + cw.str());
            }
            continue;
        }
        if (!eig) continue;
        if (!res.reducible()) {
            fail(wid + " exhibits T - " + eig->str() + " but the reduction is irreducible");
            continue;
        }
        Fq want = inverse ? res.lambda->inv() : *res.lambda;
        if (*eig != want)
            fail(wid + " exhibits T - " + eig->str() + ", engine has " + want.str());
        else
            rep.lines.push_back("ok   " + wid + " eigenvalue " + eig->str());
    }
    std::sort(rep.killed.begin(), rep.killed.end());
    rep.killed.erase(std::unique(rep.killed.begin(), rep.killed.end()), rep.killed.end());

    std::vector<JHLabel> alive;
    for (const auto& [i, lab] : pieces)
        if (!std::binary_search(rep.killed.begin(), rep.killed.end(), i)) alive.push_back(lab);
    for (const auto& f : desc) {
        bool found = false;
        for (const auto& w : llc_weights(f, p))
            if (std::find(alive.begin(), alive.end(), w) != alive.end()) found = true;
        if (found)
            rep.lines.push_back("ok   " + f.str() + " has a weight in JH(P)");
        else
            fail(f.str() + " has no weight among the surviving JH factors of P");
    }
    return rep;
}

}  // namespace slope1
