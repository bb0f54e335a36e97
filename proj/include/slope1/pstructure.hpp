// slope1/pstructure.hpp
// SPDX-License-Identifier: Apache-2.0
//
// P = V_r / (X_r + V_r**) with its filtration W0 c W1 c W2 = P, the
// graded pieces J_i and their identifications with V_a (x) D^b.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gamma.hpp"

namespace slope1 {

// 1 <= a <= p-1 with r = a mod (p-1).
inline int residue_a(u64 p, i64 r) {
    i64 a = pmod(r, static_cast<i64>(p) - 1);
    return static_cast<int>(a == 0 ? static_cast<i64>(p) - 1 : a);
}

inline Subspace x_r(const Module& vr) { return closure(vr, {monomial(static_cast<int>(vr.dim) - 1, 0)}); }

// theta^k V_{r - k(p+1)} inside V_r.
inline Subspace theta_power_part(u64 p, int r, int k) {
    int s = r - k * static_cast<int>(p + 1);
    std::vector<Vec> gens;
    for (int i = 0; i <= s; ++i) gens.push_back(theta_pow_mul(p, monomial(s, i), k));
    return Subspace::span(p, static_cast<std::size_t>(r + 1), gens);
}

// The labels of J0, J1, J2 (nullopt for a zero piece) as tabulated for
// r >= 2p.
inline std::array<std::optional<JHLabel>, 3> expected_P_labels(u64 p, int r) {
    int a = residue_a(p, r);
    i64 P = static_cast<i64>(p);
    if (a == 1 && r % static_cast<int>(p) != 0) return {std::nullopt, jh_label(p, 1, 0), jh_label(p, P - 2, 1)};
    if (a == 1) return {jh_label(p, P - 2, 1), jh_label(p, 1, 0), jh_label(p, P - 2, 1)};
    if (a == 2) {
        std::optional<JHLabel> j1;
        if (r > 2 * static_cast<int>(p)) j1 = jh_label(p, 0, 1);
        return {jh_label(p, P - 1, 1), j1, jh_label(p, P - 3, 2)};
    }
    return {jh_label(p, a - 2, 1), jh_label(p, P - a + 1, a - 1), jh_label(p, P - 1 - a, a)};
}

// Anchor polynomial in V_r whose image in J_i is pinned to X^(a_i).
inline std::optional<Vec> anchor(u64 p, int r, int i) {
    int a = residue_a(p, r), s = r - static_cast<int>(p) - 1, P = static_cast<int>(p);
    auto th = [&](int j) { return theta_mul(p, monomial(s, j)); };
    switch (i) {
        case 0:
            if (a == 1 && r % P != 0) return std::nullopt;
            return th(0);
        case 1:
            if (a >= 3) return th(a - 2);
            if (a == 2) return r > 2 * P ? std::optional<Vec>(th(P - 1)) : std::nullopt;
            return th(P - 2);
        default:
            return monomial(r, a == 1 ? 1 : a);
    }
}

class PStructure {
public:
    PStructure(u64 p, int r) : p_(p), r_(r), a_(residue_a(p, r)) {
        if (p < 3 || !is_prime(p)) throw HypothesisError("build_P: p must be an odd prime");
        if (r < 2 * static_cast<int>(p)) throw HypothesisError("build_P: needs r >= 2p");
        vr_ = sym_module(p, r);
        xr_ = x_r(vr_);
        vstar_ = theta_power_part(p, r, 1);
        vss_ = r >= 2 * static_cast<int>(p) + 2 ? theta_power_part(p, r, 2) : Subspace(p, vr_.dim);
        k_ = xr_;
        for (const Vec& b : vss_.basis()) k_.insert(b);
        pm_ = quotient(vr_, k_);

        Vec th0 = theta_mul(p, monomial(r - static_cast<int>(p) - 1, 0));
        w_[0] = closure(pm_, {to_P(th0)});
        std::vector<Vec> w1;
        for (const Vec& b : vstar_.basis()) w1.push_back(to_P(b));
        w_[1] = Subspace::span(p, pm_.dim, w1);
        for (const Vec& b : w_[0].basis()) w_[1].insert(b);
        w_[2] = Subspace::full(p, pm_.dim);
        if (!w_[1].contains(w_[0]) || !is_stable(pm_, w_[1]))
            throw StructureError("filtration of P is not a chain of submodules");

        for (int i = 0; i < 3; ++i) {
            Module wi = submodule(pm_, w_[i]);
            lower_[i] = Subspace(p, w_[i].dim());
            if (i > 0)
                for (const Vec& b : w_[i - 1].basis()) lower_[i].insert(w_[i].coords(b));
            j_[i] = quotient(wi, lower_[i]);
            if (j_[i].dim == 0) continue;
            IrreducibleSub s = irreducible_submodule(j_[i]);
            if (s.space.dim() != j_[i].dim) throw StructureError("J_" + std::to_string(i) + " is reducible");
            label_[i] = s.label;
            Mat phi = isomorphism_to_standard(j_[i], s.hw, s.label);
            // Rescale so the anchor maps to exactly X^(a_i).
            auto anc = anchor(p, r, i);
            if (anc) {
                auto img = J_raw(*anc, i);
                if (!img) throw StructureError("anchor outside W_" + std::to_string(i));
                Vec y = phi.apply(*img);
                anchor_ok_[i] = y[0] != 0;
                for (std::size_t k = 1; k < y.size(); ++k) anchor_ok_[i] = anchor_ok_[i] && y[k] == 0;
                if (y[0] != 0) {
                    u64 c = invmod(y[0], p);
                    for (std::size_t x = 0; x < phi.rows(); ++x)
                        for (std::size_t z = 0; z < phi.cols(); ++z) phi(x, z) = mulmod(phi(x, z), c, p);
                }
            }
            phi_[i] = phi;
        }
    }

    u64 p() const { return p_; }
    int r() const { return r_; }
    int a() const { return a_; }
    const Module& V() const { return vr_; }
    const Module& P() const { return pm_; }
    const Subspace& kernel_space() const { return k_; }  // X_r + V_r**
    const Subspace& Xr() const { return xr_; }
    const Subspace& Vstar() const { return vstar_; }
    const Subspace& Vstarstar() const { return vss_; }
    const Subspace& W(int i) const { return w_[static_cast<std::size_t>(i)]; }
    const Module& J(int i) const { return j_[static_cast<std::size_t>(i)]; }
    const std::optional<JHLabel>& label(int i) const { return label_[static_cast<std::size_t>(i)]; }
    const Mat& phi(int i) const { return phi_[static_cast<std::size_t>(i)]; }
    // Whether the anchor landed on a multiple of X^(a_i) before rescaling.
    bool anchor_ok(int i) const { return anchor_ok_[static_cast<std::size_t>(i)]; }

    Vec to_P(const Vec& v) const { return k_.quotient_coords(v); }

    bool in_W(const Vec& v, int i) const {
        if (i < 0) return is_zero_vec(to_P(v));
        return w_[static_cast<std::size_t>(i)].contains(to_P(v));
    }

    // Image in J_i under the normalized identification, or nullopt when the
    // class of v is not in W_i.
    std::optional<Vec> to_J(const Vec& v, int i) const {
        auto raw = J_raw(v, i);
        if (!raw) return std::nullopt;
        if (j_[static_cast<std::size_t>(i)].dim == 0) return Vec{};
        return phi_[static_cast<std::size_t>(i)].apply(*raw);
    }

    // The same map on P-coordinates.
    std::optional<Vec> P_to_J(const Vec& x, int i) const {
        const Subspace& w = w_[static_cast<std::size_t>(i)];
        if (!w.contains(x)) return std::nullopt;
        Vec q = lower_[static_cast<std::size_t>(i)].quotient_coords(w.coords(x));
        if (j_[static_cast<std::size_t>(i)].dim == 0) return Vec{};
        return phi_[static_cast<std::size_t>(i)].apply(q);
    }

    // Largest i with the class of v outside W_{i-1}, i.e. the piece where v
    // first shows up; -1 when v dies in P.
    int level(const Vec& v) const {
        Vec x = to_P(v);
        if (is_zero_vec(x)) return -1;
        for (int i = 0; i < 3; ++i)
            if (w_[static_cast<std::size_t>(i)].contains(x)) return i;
        return 2;
    }

private:
    std::optional<Vec> J_raw(const Vec& v, int i) const {
        const Subspace& w = w_[static_cast<std::size_t>(i)];
        Vec x = to_P(v);
        if (!w.contains(x)) return std::nullopt;
        return lower_[static_cast<std::size_t>(i)].quotient_coords(w.coords(x));
    }

    u64 p_;
    int r_, a_;
    Module vr_, pm_;
    Subspace xr_, vstar_, vss_, k_;
    std::array<Subspace, 3> w_, lower_;
    std::array<Module, 3> j_;
    std::array<std::optional<JHLabel>, 3> label_;
    std::array<Mat, 3> phi_;
    std::array<bool, 3> anchor_ok_{true, true, true};
};

// For a = 2 and r > 2p: the Gamma-projection W1 -> J0 = V_{p-1} (x) D,
// normalized by theta X^(r-p-1) -> X^(p-1).  W1 is J0 (+) J1 here and the
// two pieces are non-isomorphic, so the map is unique up to scalar.
class W1Projection {
public:
    explicit W1Projection(const PStructure& ps) : ps_(ps) {
        u64 p = ps.p();
        if (ps.a() != 2 || ps.r() <= 2 * static_cast<int>(p)) throw HypothesisError("W1 projection needs a = 2 and r > 2p");
        Module w1 = submodule(ps.P(), ps.W(1));
        auto maps = equivariant_maps(w1, sym_module(p, static_cast<int>(p) - 1, 1));
        if (maps.size() != 1) throw StructureError("Hom(W1, J0) is not one-dimensional");
        pr_ = maps[0];
        Vec anc = theta_mul(p, monomial(ps.r() - static_cast<int>(p) - 1, 0));
        Vec y = pr_.apply(ps.W(1).coords(ps.to_P(anc)));
        for (std::size_t k = 1; k < y.size(); ++k)
            if (y[k]) throw StructureError("W1 projection: anchor not on the top weight");
        if (!y[0]) throw StructureError("W1 projection kills the anchor");
        u64 c = invmod(y[0], p);
        for (std::size_t i = 0; i < pr_.rows(); ++i)
            for (std::size_t j = 0; j < pr_.cols(); ++j) pr_(i, j) = mulmod(pr_(i, j), c, p);
    }

    std::optional<Vec> operator()(const Vec& v) const {
        Vec x = ps_.to_P(v);
        if (!ps_.W(1).contains(x)) return std::nullopt;
        return pr_.apply(ps_.W(1).coords(x));
    }

    std::optional<Vec> from_P(const Vec& x) const {
        if (!ps_.W(1).contains(x)) return std::nullopt;
        return pr_.apply(ps_.W(1).coords(x));
    }

private:
    const PStructure& ps_;
    Mat pr_;
};

}  // namespace slope1
