// slope1/binomial.hpp
// SPDX-License-Identifier: Apache-2.0
//
// Exact binomial sums and the congruences built from them.  Every check
// recomputes both sides as integers and reduces only at the final comparison.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace slope1 {

inline BigInt binomial_exact(i64 n, i64 k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (i64 i = 1; i <= k; ++i) c = c * (n - k + i) / i;  // exact at every step
    return c;
}

// C(r, 0..r).
inline std::vector<BigInt> binomial_row(i64 r) {
    std::vector<BigInt> row(static_cast<std::size_t>(r + 1));
    row[0] = 1;
    for (i64 j = 1; j <= r; ++j) row[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] * (r - j + 1) / j;
    return row;
}

inline BigInt big_pow(u64 p, i64 k) {
    BigInt m = 1;
    for (i64 i = 0; i < k; ++i) m *= p;
    return m;
}

inline BigInt big_mod(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    return r < 0 ? BigInt(r + m) : r;
}

// num/den mod m for den a unit mod m; used for right-hand sides such as
// (a - r)/a or C(r,2)/(1 - p).
inline BigInt frac_mod(const BigInt& num, const BigInt& den, const BigInt& m) {
    BigInt a = big_mod(den, m), b = m, x0 = 1, x1 = 0;
    while (b != 0) {
        BigInt q = a / b, t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    if (a != 1) throw HypothesisError("frac_mod: denominator is not a unit");
    return big_mod(num * x0, m);
}

struct CongruenceReport {
    std::string lemma;
    std::map<std::string, i64> params;
    BigInt lhs, rhs, modulus;
    bool pass = false;
};

inline CongruenceReport make_report(std::string lemma, std::map<std::string, i64> params, BigInt lhs, BigInt rhs,
                                    BigInt modulus) {
    CongruenceReport rep{std::move(lemma), std::move(params), std::move(lhs), std::move(rhs), std::move(modulus), false};
    rep.pass = big_mod(rep.lhs - rep.rhs, rep.modulus) == 0;
    return rep;
}

namespace detail {

inline void require_odd_prime(u64 p, u64 min_p = 3) {
    if (p < min_p || !is_prime(p)) throw HypothesisError("p must be a prime >= " + std::to_string(min_p));
}

// sum over j in [lo, hi] with j = cls mod m of C(j, n) * row[j].
inline BigInt class_sum(const std::vector<BigInt>& row, i64 lo, i64 hi, i64 cls, i64 m, i64 n) {
    BigInt s = 0;
    for (i64 j = lo; j <= hi; ++j)
        if (pmod(j - cls, m) == 0) s += binomial_exact(j, n) * row[static_cast<std::size_t>(j)];
    return s;
}

}  // namespace detail

// S_r = sum_{0<j<r, j=a mod p-1} C(r,j): zero mod p, and S_r/p = (a-r)/a.
inline std::vector<CongruenceReport> verify_comb1(u64 p, i64 r) {
    detail::require_odd_prime(p);
    if (r < 1) throw HypothesisError("comb1: r >= 1");
    i64 P = static_cast<i64>(p), a = pmod(r, P - 1);
    if (a == 0) a = P - 1;
    auto row = binomial_row(r);
    BigInt s = detail::class_sum(row, 1, r - 1, a, P - 1, 0);
    std::map<std::string, i64> prm{{"p", P}, {"r", r}, {"a", a}};
    std::vector<CongruenceReport> out{make_report("comb1.0", prm, s, 0, P)};
    if (s % P != 0) {
        out.push_back(make_report("comb1.1", prm, s, 0, P));  // S_r/p is undefined
    } else {
        out.push_back(make_report("comb1.1", prm, BigInt(s / P), frac_mod(a - r, a, P), P));
    }
    return out;
}

// T_r = sum_{0<j<r-1, j=b-1 mod p-1} C(r,j) = b - r mod p, with 2 <= b <= p.
inline CongruenceReport verify_comb3(u64 p, i64 r) {
    detail::require_odd_prime(p);
    if (r < 2) throw HypothesisError("comb3: r >= 2");
    i64 P = static_cast<i64>(p), b = pmod(r - 2, P - 1) + 2;
    auto row = binomial_row(r);
    BigInt s = detail::class_sum(row, 1, r - 2, b - 1, P - 1, 0);
    return make_report("comb3.i", {{"p", P}, {"r", r}, {"b", b}}, s, b - r, P);
}

// The lemma on p^i C(s,i) for s = 1 mod p-1, t = v(s-1): every i >= 2 gives
// 0 mod p^(t+2).  For i >= t+2 the factor p^i alone is enough, so only
// 2 <= i < t+2 carries content; those are checked and the rest asserted.
inline CongruenceReport verify_congruences1(u64 p, i64 s) {
    detail::require_odd_prime(p);
    i64 P = static_cast<i64>(p);
    if (s <= 1 || pmod(s - 1, P - 1) != 0) throw HypothesisError("congruences1: s = 1 mod p-1, s > 1");
    i64 t = vp(BigInt(s - 1), p);
    BigInt worst = 0;  // first failing term, 0 when all pass
    i64 worst_i = 0;
    for (i64 i = 2; i <= std::min(s, t + 2); ++i) {
        BigInt term = big_pow(p, i) * binomial_exact(s, i);
        if (term % big_pow(p, t + 2) != 0) {
            worst = term;
            worst_i = i;
            break;
        }
    }
    return make_report("congruences1", {{"p", P}, {"s", s}, {"t", t}, {"i", worst_i}}, worst, 0, big_pow(p, t + 2));
}

// p^i C(r,i) = 0 mod p^(t+3) for i >= 3, r = 2 mod p-1, t = v(r-2), p > 3.
inline CongruenceReport verify_congruences2(u64 p, i64 r) {
    detail::require_odd_prime(p, 5);
    i64 P = static_cast<i64>(p);
    if (r <= 2 || pmod(r - 2, P - 1) != 0) throw HypothesisError("congruences2: r = 2 mod p-1, r > 2");
    i64 t = vp(BigInt(r - 2), p);
    BigInt worst = 0;
    i64 worst_i = 0;
    for (i64 i = 3; i <= std::min(r, t + 3); ++i) {
        BigInt term = big_pow(p, i) * binomial_exact(r, i);
        if (term % big_pow(p, t + 3) != 0) {
            worst = term;
            worst_i = i;
            break;
        }
    }
    return make_report("congruences2", {{"p", P}, {"r", r}, {"t", t}, {"i", worst_i}}, worst, 0, big_pow(p, t + 3));
}

// (1 + pX)^(p^t) = 1 + p^(t+1) X mod p^(t+2), coefficient by coefficient.
// The report carries the first offending coefficient index in "i" (-1 if none).
inline CongruenceReport verify_ppower(u64 p, i64 t) {
    detail::require_odd_prime(p);
    if (t < 0 || t > 6) throw HypothesisError("ppower: 0 <= t <= 6");
    i64 P = static_cast<i64>(p);
    i64 e = 1;
    for (i64 i = 0; i < t; ++i) e *= P;
    BigInt m = big_pow(p, t + 2);
    for (i64 i = 0; i <= e; ++i) {
        BigInt coeff = binomial_exact(e, i) * big_pow(p, i);
        BigInt want = i == 0 ? BigInt(1) : i == 1 ? big_pow(p, t + 1) : BigInt(0);
        if (big_mod(coeff - want, m) != 0)
            return make_report("ppower", {{"p", P}, {"t", t}, {"i", i}}, coeff, want, m);
        if (i >= t + 2) break;  // p^i alone kills the remaining coefficients
    }
    return make_report("ppower", {{"p", P}, {"t", t}, {"i", -1}}, 0, 0, m);
}

// The three families of sums over j in a class mod p-1, r (or s) written as
// c + n(p-1)p^t:
//   which = 2:  r = 2 + ..., j = 2 mod p-1, 0 < j < r
//   which = 1:  s = 1 + ..., j = 1 mod p-1, all j
//   which = 12: r = 2 + ..., j = 1 mod p-1, 1 < j <= r-1
// One report per numbered part; the "for all i" parts expand to one report
// per i up to the point where the modulus becomes trivial.
inline std::vector<CongruenceReport> verify_congrbinom(int which, u64 p, i64 n, i64 t) {
    detail::require_odd_prime(p, 5);
    if (which != 1 && which != 2 && which != 12) throw HypothesisError("congrbinom: which in {1, 2, 12}");
    // n = 0 makes the row degenerate (r = 2 or s = 1) and the parts with C(r,2)
    // or s(p-2)/(p-1) on the right fail; the derivation needs r > i.
    if (n < 1 || t < 0) throw HypothesisError("congrbinom: n >= 1, t >= 0");
    i64 P = static_cast<i64>(p);
    BigInt pt = big_pow(p, t);
    BigInt big_r = BigInt(which == 1 ? 1 : 2) + BigInt(n) * (P - 1) * pt;
    if (big_r > 100000) throw HypothesisError("congrbinom: row too long");
    i64 r = static_cast<i64>(big_r);
    auto row = binomial_row(r);
    BigInt m1 = big_pow(p, t + 1), m2 = big_pow(p, t + 2), pt1 = m1;
    std::map<std::string, i64> prm{{"p", P}, {"n", n}, {"t", t}, {which == 1 ? "s" : "r", r}};
    std::string id = "congrbinom" + std::to_string(which) + ".";
    std::vector<CongruenceReport> out;
    auto sum = [&](i64 i) {
        if (which == 2) return detail::class_sum(row, 1, r - 1, 2, P - 1, i);
        if (which == 1) return detail::class_sum(row, 0, r, 1, P - 1, i);
        return detail::class_sum(row, 2, r - 1, 1, P - 1, i);
    };
    BigInt c2 = binomial_exact(r, 2);
    if (which == 2) {
        out.push_back(make_report(id + "1", prm, sum(0), frac_mod(P * (2 - big_r), 2, m2), m2));
        out.push_back(make_report(id + "2", prm, sum(1), frac_mod(P * big_r * (2 - big_r), 1 - P, m2), m2));
        out.push_back(make_report(id + "3", prm, sum(2), frac_mod(c2, 1 - P, m1), m1));
    } else if (which == 1) {
        out.push_back(make_report(id + "1", prm, sum(0), big_mod(1 + n * pt1, m2), m2));
        out.push_back(make_report(id + "2", prm, sum(1),
                                  big_mod(frac_mod(big_r * (P - 2), P - 1, m2) - big_r * n * pt1, m2), m2));
    } else {
        out.push_back(make_report(id + "1", prm, sum(0), big_mod(2 - big_r + 2 * pt1 * n, m2), m2));
        out.push_back(make_report(id + "2", prm, sum(1), big_mod(n * big_r * pt1, m2), m2));
        out.push_back(make_report(id + "3", prm, sum(2), frac_mod(c2, P - 1, m1), m1));
    }
    // which = 1: parts i >= 2 mod p^(t+2-i); otherwise i >= 3 mod p^(t+3-i).
    i64 first = which == 1 ? 2 : 3, top = which == 1 ? t + 2 : t + 3;
    for (i64 i = first; i < top; ++i) {
        auto rep = make_report(id + (which == 1 ? "3" : "4"), prm, sum(i), 0, big_pow(p, top - i));
        rep.params["i"] = i;
        out.push_back(rep);
    }
    return out;
}

// Every (n, t) with r = c + n(p-1)p^t, n >= 1; c = 1 or 2.
inline std::vector<std::pair<i64, i64>> nt_representations(u64 p, i64 r, i64 c) {
    std::vector<std::pair<i64, i64>> out;
    i64 P = static_cast<i64>(p);
    if (r <= c || pmod(r - c, P - 1) != 0) return out;
    i64 m = (r - c) / (P - 1);
    for (i64 t = 0; m > 0; ++t) {
        out.emplace_back(m, t);
        if (m % P != 0) break;
        m /= P;
    }
    return out;
}

struct CoefficientFamily {
    std::string kind;  // "comb2", "comb6" or "beta"
    u64 p = 0;
    i64 r = 0;
    std::vector<i64> index;      // the j's
    std::vector<BigInt> values;  // alpha_j or beta_j
    std::vector<i64> slots;      // indices that were corrected
};

// The target congruences for a family: sum_j C(j,n) c_j against rhs mod p^(3-n).
struct FamilyCheck {
    std::vector<CongruenceReport> reports;
    bool pass = true;
};

inline FamilyCheck check_family(const CoefficientFamily& f) {
    FamilyCheck out;
    i64 P = static_cast<i64>(f.p);
    std::map<std::string, i64> prm{{"p", P}, {"r", f.r}};
    auto row = binomial_row(f.r);
    for (std::size_t k = 0; k < f.index.size(); ++k) {
        BigInt d = f.values[k] - row[static_cast<std::size_t>(f.index[k])];
        if (big_mod(d, P) != 0) {
            auto rep = make_report(f.kind + ".1", prm, f.values[k], row[static_cast<std::size_t>(f.index[k])], P);
            rep.params["j"] = f.index[k];
            out.reports.push_back(rep);
        }
    }
    if (out.reports.empty()) out.reports.push_back(make_report(f.kind + ".1", prm, 0, 0, P));
    int nmax = f.kind == "comb2" ? 1 : 2;
    for (int n = 0; n <= 2; ++n) {
        BigInt s = 0;
        for (std::size_t k = 0; k < f.index.size(); ++k) s += binomial_exact(f.index[k], n) * f.values[k];
        auto prm_n = prm;
        prm_n["n"] = n;
        if (n <= nmax) {
            out.reports.push_back(make_report(f.kind + ".2", prm_n, s, 0, big_pow(f.p, 3 - n)));
        } else {
            // comb2 part (3): 0 mod p when a >= 3, C(r,2) mod p when a = 2.
            i64 a = pmod(f.r, P - 1);
            if (a == 0) a = P - 1;
            BigInt rhs = a == 2 ? binomial_exact(f.r, 2) : BigInt(0);
            out.reports.push_back(make_report(f.kind + ".3", prm_n, s, rhs, P));
        }
    }
    for (const auto& rep : out.reports) out.pass = out.pass && rep.pass;
    return out;
}

namespace detail {

// Lift C(r,j) mod p to [0,p), then add p*x1, p*x2 at two slots j1 < j2 so that
// the n = 0 sum is 0 mod p^3 and the n = 1 sum is 0 mod p^2.  This needs
// j2 - j1 to be a unit mod p and both sums to be 0 mod p already; the n = 2
// sum mod p does not move under corrections by multiples of p.
inline CoefficientFamily correct_family(std::string kind, u64 p, i64 r, std::vector<i64> index) {
    CoefficientFamily f{std::move(kind), p, r, std::move(index), {}, {}};
    auto row = binomial_row(r);
    for (i64 j : f.index) f.values.push_back(big_mod(row[static_cast<std::size_t>(j)], p));
    if (f.index.empty()) return f;
    BigInt s0 = 0, s1 = 0;
    for (std::size_t k = 0; k < f.index.size(); ++k) {
        s0 += f.values[k];
        s1 += f.index[k] * f.values[k];
    }
    if (s0 % p != 0 || s1 % p != 0)
        throw StructureError(f.kind + ": weighted sums are not 0 mod p (p=" + std::to_string(p) + ", r=" + std::to_string(r) + ")");
    BigInt A = big_mod(-s0 / static_cast<i64>(p), big_pow(p, 2));  // x1 + x2 = A mod p^2
    BigInt B = big_mod(-s1 / static_cast<i64>(p), p);               // j1 x1 + j2 x2 = B mod p
    // The two smallest indices differ by p-1, a unit; otherwise widen to the
    // first pair with a unit difference.
    for (std::size_t u = 0; u < f.index.size(); ++u)
        for (std::size_t v = u + 1; v < f.index.size(); ++v) {
            i64 j1 = f.index[u], j2 = f.index[v];
            if (pmod(j2 - j1, static_cast<i64>(p)) == 0) continue;
            BigInt x2 = frac_mod(B - j1 * A, j2 - j1, p);
            BigInt x1 = big_mod(A - x2, big_pow(p, 2));
            f.values[u] += static_cast<i64>(p) * x1;
            f.values[v] += static_cast<i64>(p) * x2;
            f.slots = {j1, j2};
            return f;
        }
    // A single index: only possible if both sums already vanish.
    if (f.index.size() == 1) {
        f.values[0] += static_cast<i64>(p) * A;
        f.slots = {f.index[0]};
    }
    return f;
}

}  // namespace detail

// alpha_j for 0 < j < r, j = a mod p-1 (comb2; 2p <= r, 2 <= a <= p-1) or for
// 1 < j < r, j = 1 mod p-1 (comb6; 2p <= r = 1 mod p-1, p | r).
inline CoefficientFamily construct_alphas(u64 p, i64 r, const std::string& variant) {
    detail::require_odd_prime(p);
    i64 P = static_cast<i64>(p), a = pmod(r, P - 1);
    if (a == 0) a = P - 1;
    std::vector<i64> index;
    if (variant == "comb2") {
        if (r < 2 * P || a < 2) throw HypothesisError("comb2: 2p <= r, a >= 2");
        for (i64 j = a; j < r; j += P - 1) index.push_back(j);
    } else if (variant == "comb6") {
        if (r < 2 * P || a != 1 || r % P != 0) throw HypothesisError("comb6: 2p <= r = 1 mod p-1, p | r");
        for (i64 j = P; j < r; j += P - 1) index.push_back(j);
    } else {
        throw HypothesisError("construct_alphas: variant is comb2 or comb6");
    }
    auto f = detail::correct_family(variant, p, r, std::move(index));
    if (!check_family(f).pass) throw StructureError(variant + ": constructed family fails verification");
    return f;
}

// beta_j for j = b-1 mod p-1, b-1 <= j < r-1, where r = b mod p(p-1), 3 <= b <= p.
inline CoefficientFamily construct_betas(u64 p, i64 r) {
    detail::require_odd_prime(p);
    i64 P = static_cast<i64>(p), b = pmod(r, P * (P - 1));
    if (b < 3 || b > P) throw HypothesisError("comb3(ii): r = b mod p(p-1) with 3 <= b <= p");
    std::vector<i64> index;
    for (i64 j = b - 1; j < r - 1; j += P - 1) index.push_back(j);
    auto f = detail::correct_family("beta", p, r, std::move(index));
    if (!check_family(f).pass) throw StructureError("beta: constructed family fails verification");
    return f;
}

// Every verifier over all admissible parameters up to rmax.  Families are
// re-verified by check_family; a constructor that throws becomes a failing
// report rather than aborting the sweep.
inline std::vector<CongruenceReport> lemma_suite(u64 p, i64 rmax) {
    detail::require_odd_prime(p);
    i64 P = static_cast<i64>(p);
    std::vector<CongruenceReport> out;
    auto add = [&](std::vector<CongruenceReport> v) { out.insert(out.end(), v.begin(), v.end()); };
    auto add_family = [&](const std::string& kind, auto&& build, i64 r) {
        try {
            add(check_family(build()).reports);
        } catch (const std::exception&) {
            out.push_back(make_report(kind + ".construct", {{"p", P}, {"r", r}}, 1, 0, P));
        }
    };
    for (i64 r = 1; r <= rmax; ++r) {
        add(verify_comb1(p, r));
        if (r >= 2) out.push_back(verify_comb3(p, r));
        i64 a = pmod(r, P - 1);
        if (a == 0) a = P - 1;
        if (r >= 2 * P && a >= 2) add_family("comb2", [&] { return construct_alphas(p, r, "comb2"); }, r);
        if (r >= 2 * P && a == 1 && r % P == 0) add_family("comb6", [&] { return construct_alphas(p, r, "comb6"); }, r);
        i64 b = pmod(r, P * (P - 1));
        if (b >= 3 && b <= P) add_family("beta", [&] { return construct_betas(p, r); }, r);
        if (r > 1 && pmod(r - 1, P - 1) == 0) {
            out.push_back(verify_congruences1(p, r));
            if (p > 3)
                for (auto [n, t] : nt_representations(p, r, 1)) add(verify_congrbinom(1, p, n, t));
        }
        if (p > 3 && r > 2 && pmod(r - 2, P - 1) == 0) {
            out.push_back(verify_congruences2(p, r));
            for (auto [n, t] : nt_representations(p, r, 2)) {
                add(verify_congrbinom(2, p, n, t));
                add(verify_congrbinom(12, p, n, t));
            }
        }
    }
    for (i64 t = 0, pt = 1; pt <= rmax * P && t <= 6; ++t, pt *= P) out.push_back(verify_ppower(p, t));
    return out;
}

}  // namespace slope1
