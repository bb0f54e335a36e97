// slope1/lattice.hpp
// SPDX-License-Identifier: Apache-2.0
//
// Reduction mod p of the lattice Sym^r Z_p^2 + eta Sym^(r-p-1) Z_p^2 with
// eta = theta/p.  Elements are carried as p*F with integer coefficients
// mod p^2; that is enough to read off coordinates mod p in the basis
//   e     = X^r                      (coordinate 0)
//   f_k   = X^k Y^(r-k), 0 <= k < p  (coordinates 1..p)
//   eta_j = eta X^(r-p-1-j) Y^j      (coordinates p+1..r)
#pragma once

#include <algorithm>
#include <vector>

#include "gamma.hpp"
#include "pstructure.hpp"

namespace slope1 {

namespace detail {

// Substitution action with integer matrix entries, coefficients mod m.
inline Vec sym_act_mod(u64 m, const Mat2& g, const Vec& f) {
    Vec l1{g.a % m, g.c % m}, l2{g.b % m, g.d % m};
    Vec h{f[0] % m}, pw{1};
    for (std::size_t k = 1; k < f.size(); ++k) {
        h = poly_mul(h, l1, m);
        pw = poly_mul(pw, l2, m);
        for (std::size_t i = 0; i <= k; ++i) h[i] = (h[i] + mulmod(f[k], pw[i], m)) % m;
    }
    return h;
}

inline Vec theta_mul_mod(u64 p, u64 m, const Vec& f) {
    std::size_t s = f.size() - 1;
    Vec h(s + p + 2, 0);
    for (std::size_t i = 0; i <= s; ++i) {
        h[i + 1] = (h[i + 1] + f[i]) % m;
        h[i + p] = (h[i + p] + m - f[i] % m) % m;
    }
    return h;
}

}  // namespace detail

class NonstandardLattice {
public:
    NonstandardLattice(u64 p, int r) : p_(p), r_(r), m_(p * p) {
        if (p < 3 || !is_prime(p)) throw HypothesisError("lattice: p must be an odd prime");
        if (r < 2 * static_cast<int>(p) - 2 || r % (static_cast<int>(p) - 1) != 0)
            throw HypothesisError("lattice: needs r >= 2p-2 and (p-1) | r");
        n_ = static_cast<std::size_t>(r + 1);
        for (std::size_t k = 0; k < 3; ++k) mod_.gens[k] = action(generators(p)[k]);
        mod_.p = p;
        mod_.dim = n_;

        std::vector<Vec> m1;
        for (int i = 0; i <= r; ++i) m1.push_back(coords(scaled_lift(monomial(r, i))));
        m1_ = Subspace::span(p, n_, m1);
        m0_ = closure(mod_, {unit(0)});  // inside M1, where K1 is trivial
        n_bar_ = Subspace(p, n_);
        int s3 = r - 3 * static_cast<int>(p + 1);
        for (int j = 0; j <= s3; ++j) {
            // eta theta^2 F, carried as theta^3 F.
            Vec t = monomial(s3, j);
            for (int k = 0; k < 3; ++k) t = detail::theta_mul_mod(p, m_, t);
            n_bar_.insert(coords(t));
        }
        m2_ = m1_;
        for (const Vec& b : n_bar_.basis()) m2_.insert(b);
    }

    u64 p() const { return p_; }
    int r() const { return r_; }
    const Module& module() const { return mod_; }
    const Subspace& M0() const { return m0_; }
    const Subspace& M1() const { return m1_; }
    const Subspace& N() const { return n_bar_; }
    const Subspace& M2() const { return m2_; }

    // Coordinates mod p of the lattice element F given as p*F mod p^2.
    // Throws StructureError when p*F does not come from the lattice.
    Vec coords(Vec h) const {
        int P = static_cast<int>(p_), r = r_;
        Vec out(n_, 0);
        // theta G contributes +g_j at index j+1 and -g_j at index j+p; peel
        // g_0, g_1, ... off from the left.
        for (int j = 0; j + P + 1 <= r; ++j) {
            u64 g = h[static_cast<std::size_t>(j + 1)] % m_;
            out[static_cast<std::size_t>(P + 1 + j)] = g % p_;
            h[static_cast<std::size_t>(j + 1)] = 0;
            std::size_t k = static_cast<std::size_t>(j + P);
            h[k] = (h[k] + g) % m_;
        }
        for (std::size_t i = 0; i < n_; ++i)
            if (h[i] % p_) throw StructureError("lattice: vector is not integral on the basis");
        out[0] = (h[0] / p_) % p_;
        for (int k = 0; k < P; ++k) out[static_cast<std::size_t>(1 + k)] = (h[static_cast<std::size_t>(r - k)] / p_) % p_;
        return out;
    }

    // p * (basis element idx), coefficients mod p^2.
    Vec lift(std::size_t idx) const {
        int P = static_cast<int>(p_);
        if (idx == 0) return scaled_lift(monomial(r_, 0));
        if (idx <= p_) return scaled_lift(monomial(r_, r_ - static_cast<int>(idx - 1)));
        return detail::theta_mul_mod(p_, m_, monomial(r_ - P - 1, static_cast<int>(idx - p_ - 1)));
    }

    // Matrix of an integral 2x2 matrix with unit determinant on the reduction.
    Mat action(const Mat2& g) const {
        std::vector<Vec> cols;
        for (std::size_t i = 0; i < n_; ++i) cols.push_back(coords(detail::sym_act_mod(m_, g, lift(i))));
        return Mat::from_columns(p_, n_, cols);
    }

    // Generators of K1 = 1 + p M(2, Z_p).  K1 does not act trivially on the
    // whole reduction (gamma theta = det(gamma) theta only mod p), only on
    // the image of Sym^r.
    std::vector<Mat> k1_action() const {
        u64 P = p_;
        std::vector<Mat> out;
        for (const Mat2& g : {Mat2{1 + P, 0, 0, 1}, Mat2{1, 0, 0, 1 + P}, Mat2{1, P, 0, 1}, Mat2{1, 0, P, 1}})
            out.push_back(action(g));
        return out;
    }

    bool k1_trivial_on(const Subspace& s) const {
        for (const Mat& k : k1_action())
            for (const Vec& b : s.basis())
                if (k.apply(b) != b) return false;
        return true;
    }

    bool k_stable(const Subspace& s) const {
        if (!is_stable(mod_, s)) return false;
        for (const Mat& k : k1_action())
            for (const Vec& b : s.basis())
                if (!s.contains(k.apply(b))) return false;
        return true;
    }

    // JH factors of the K-module Vbar/S (S K-stable), read off the filtration
    // by iterated K1-invariants: each step has trivial K1 action and is a
    // Gamma-module through the lifted generators.
    std::vector<JHLabel> jh_of_quotient(const Subspace& s) const {
        if (!k_stable(s)) throw StructureError("lattice: subspace is not K-stable");
        auto k1 = k1_action();
        Subspace f = s;
        std::vector<JHLabel> out;
        while (f.dim() < n_) {
            auto fc = f.free_columns();
            auto quot = [&](const Mat& g) {
                std::vector<Vec> cols;
                for (auto j : fc) cols.push_back(f.quotient_coords(g.apply(unit(j))));
                return Mat::from_columns(p_, fc.size(), cols);
            };
            // Stack (k - 1) for the K1 generators; its kernel is the invariants.
            Mat stack(p_, 4 * fc.size(), fc.size());
            for (std::size_t t = 0; t < k1.size(); ++t) {
                Mat d = quot(k1[t]) - Mat::identity(p_, fc.size());
                for (std::size_t i = 0; i < fc.size(); ++i)
                    for (std::size_t j = 0; j < fc.size(); ++j) stack(t * fc.size() + i, j) = d(i, j);
            }
            Subspace inv = Subspace::span(p_, fc.size(), kernel(stack));
            if (inv.dim() == 0) throw StructureError("lattice: K1 has no invariants on a nonzero quotient");
            Module q{p_, fc.size(), {quot(mod_.gens[0]), quot(mod_.gens[1]), quot(mod_.gens[2])}};
            auto js = jordan_holder(submodule(q, inv));
            out.insert(out.end(), js.begin(), js.end());
            for (const Vec& b : inv.basis()) {
                Vec full(n_, 0);
                for (std::size_t k = 0; k < fc.size(); ++k) full[fc[k]] = b[k];
                f.insert(full);
            }
        }
        return out;
    }

    Vec unit(std::size_t i) const {
        Vec e(n_, 0);
        e[i] = 1;
        return e;
    }

private:
    Vec scaled_lift(const Vec& f) const { return scaled(f, p_, m_); }

    u64 p_;
    int r_;
    u64 m_;
    std::size_t n_ = 0;
    Module mod_;
    Subspace m0_, m1_, n_bar_, m2_;
};

struct LatticeReport {
    u64 p = 0;
    int r = 0;
    bool k1_trivial_on_M1 = false;
    bool k1_trivial_everywhere = false;  // expected false: see NonstandardLattice::k1_action
    std::size_t dim_M0 = 0, dim_M1 = 0;
    bool M1_kernel_is_Vstar = false;   // Sym^r -> M1 has kernel exactly V_r*
    bool M0_matches_Xr = false;        // the same map carries X_r onto M0
    std::vector<JHLabel> M0_labels, M1_over_M0_labels, top_labels;  // top = Vbar / M2
    bool M1_equals_M2 = false;
    bool top_in_allowed_set = false;
    bool pass = false;
};

// The allowed set for Vbar/M2 mentions V_(p-5), so p >= 5 here.
inline LatticeReport nonstandard_lattice_reduction(u64 p, int r) {
    if (p < 5) throw HypothesisError("lattice report: p >= 5");
    NonstandardLattice L(p, r);
    LatticeReport rep;
    rep.p = p;
    rep.r = r;
    rep.k1_trivial_on_M1 = L.k1_trivial_on(L.M1());
    rep.k1_trivial_everywhere = L.k1_trivial_on(Subspace::full(p, static_cast<std::size_t>(r + 1)));
    rep.dim_M0 = L.M0().dim();
    rep.dim_M1 = L.M1().dim();
    for (const Subspace* s : {&L.M0(), &L.M1(), &L.M2()})
        if (!L.k_stable(*s)) throw StructureError("lattice: filtration step is not stable");

    // Sym^r -> Vbar, monomial by monomial.
    std::vector<Vec> cols;
    for (int i = 0; i <= r; ++i) cols.push_back(L.coords(scaled(monomial(r, i), p, p * p)));
    Mat red = Mat::from_columns(p, static_cast<std::size_t>(r + 1), cols);
    rep.M1_kernel_is_Vstar = Subspace::span(p, static_cast<std::size_t>(r + 1), kernel(red)) == theta_power_part(p, r, 1);
    std::vector<Vec> xr_img;
    Subspace xr = x_r(sym_module(p, r));
    for (const Vec& b : xr.basis()) xr_img.push_back(red.apply(b));
    rep.M0_matches_Xr = Subspace::span(p, static_cast<std::size_t>(r + 1), xr_img) == L.M0();

    rep.M0_labels = jordan_holder(submodule(L.module(), L.M0()));
    Module m1 = submodule(L.module(), L.M1());
    Subspace m0_in_m1(p, L.M1().dim());
    for (const Vec& b : L.M0().basis()) m0_in_m1.insert(L.M1().coords(b));
    rep.M1_over_M0_labels = jordan_holder(quotient(m1, m0_in_m1));
    rep.M1_equals_M2 = L.M1() == L.M2();
    rep.top_labels = L.jh_of_quotient(L.M2());
    i64 P = static_cast<i64>(p);
    std::vector<JHLabel> allowed{jh_label(p, P - 5, 2), jh_label(p, 4, P - 3), jh_label(p, P - 3, 1), jh_label(p, 2, P - 2)};
    rep.top_in_allowed_set = std::all_of(rep.top_labels.begin(), rep.top_labels.end(), [&](const JHLabel& l) {
        return std::find(allowed.begin(), allowed.end(), l) != allowed.end();
    });
    rep.pass = rep.k1_trivial_on_M1 && rep.dim_M1 == p + 1 && rep.dim_M0 == p && rep.M1_kernel_is_Vstar && rep.M0_matches_Xr &&
               rep.M0_labels == std::vector<JHLabel>{jh_label(p, P - 1, 0)} &&
               rep.M1_over_M0_labels == std::vector<JHLabel>{jh_label(p, 0, 0)} && rep.top_in_allowed_set;
    return rep;
}

}  // namespace slope1
