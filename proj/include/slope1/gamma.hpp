// slope1/gamma.hpp
// SPDX-License-Identifier: Apache-2.0
//
// GL2(F_p)-modules given by the matrices of three generators
//   w = (0 1; 1 0),  t = diag(g, 1),  u = (1 1; 0 1),
// g the smallest primitive root.  V_r is modelled on degree-r forms with
// coefficient i attached to X^(r-i) Y^i and the action
// (a b; c d) . F(X, Y) = F(aX + cY, bX + dY).
#pragma once

#include <array>
#include <compare>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "fp_linalg.hpp"

namespace slope1 {

struct Mat2 {
    u64 a, b, c, d;
};

inline u64 det_mod(const Mat2& g, u64 p) {
    return (mulmod(g.a, g.d, p) + p - mulmod(g.b, g.c, p)) % p;
}

inline Vec monomial(int r, int i) {
    Vec v(static_cast<std::size_t>(r + 1), 0);
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

// Product of homogeneous forms.
inline Vec poly_mul(const Vec& f, const Vec& g, u64 p) {
    Vec h(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = (h[i + j] + mulmod(f[i], g[j], p)) % p;
    }
    return h;
}

// F(aX + cY, bX + dY) by a homogeneous Horner scheme:
// H_k = H_{k-1} L1 + c_k L2^k with L1 = aX + cY, L2 = bX + dY.
inline Vec sym_act(u64 p, const Mat2& g, const Vec& f) {
    if (det_mod(g, p) == 0) throw HypothesisError("act: singular matrix");
    Vec l1{g.a % p, g.c % p}, l2{g.b % p, g.d % p};
    Vec h{f[0] % p}, pw{1};
    for (std::size_t k = 1; k < f.size(); ++k) {
        h = poly_mul(h, l1, p);
        pw = poly_mul(pw, l2, p);
        for (std::size_t i = 0; i <= k; ++i) h[i] = (h[i] + mulmod(f[k], pw[i], p)) % p;
    }
    return h;
}

// theta * F with theta = X^p Y - X Y^p; F has degree s, the result s + p + 1.
inline Vec theta_mul(u64 p, const Vec& f) {
    std::size_t s = f.size() - 1;
    Vec h(s + p + 2, 0);
    for (std::size_t i = 0; i <= s; ++i) {
        h[i + 1] = (h[i + 1] + f[i]) % p;
        h[i + p] = (h[i + p] + p - f[i] % p) % p;
    }
    return h;
}

inline Vec theta_pow_mul(u64 p, const Vec& f, int k) {
    Vec h = f;
    for (int i = 0; i < k; ++i) h = theta_mul(p, h);
    return h;
}

struct JHLabel {
    int a = 0;  // V_a
    int b = 0;  // D^b, reduced into [0, p-2]

    friend auto operator<=>(const JHLabel&, const JHLabel&) = default;

    std::string str() const {
        return "V_" + std::to_string(a) + "(x)D^" + std::to_string(b);
    }
};

inline JHLabel jh_label(u64 p, i64 a, i64 b) {
    return {static_cast<int>(a), static_cast<int>(pmod(b, static_cast<i64>(p) - 1))};
}

// A finite-dimensional F_p[Gamma]-module: the matrices of w, t, u.
struct Module {
    u64 p = 0;
    std::size_t dim = 0;
    std::array<Mat, 3> gens;

    Mat tprime() const { return gens[0] * gens[1] * gens[0]; }  // diag(1, g)
};

inline std::array<Mat2, 3> generators(u64 p) {
    return {Mat2{0, 1, 1, 0}, Mat2{primitive_root(p), 0, 0, 1}, Mat2{1, 1, 0, 1}};
}

inline Mat sym_matrix(u64 p, int r, const Mat2& g, i64 twist = 0) {
    std::vector<Vec> cols;
    u64 dt = powmod(det_mod(g, p), static_cast<u64>(pmod(twist, static_cast<i64>(p) - 1)), p);
    for (int i = 0; i <= r; ++i) cols.push_back(scaled(sym_act(p, g, monomial(r, i)), dt, p));
    return Mat::from_columns(p, static_cast<std::size_t>(r + 1), cols);
}

// V_r (x) D^twist.
inline Module sym_module(u64 p, int r, i64 twist = 0) {
    Module m{p, static_cast<std::size_t>(r + 1), {}};
    auto gs = generators(p);
    for (int k = 0; k < 3; ++k) m.gens[static_cast<std::size_t>(k)] = sym_matrix(p, r, gs[static_cast<std::size_t>(k)], twist);
    return m;
}

inline Subspace closure(const Module& m, const std::vector<Vec>& seeds) {
    Subspace s(m.p, m.dim);
    std::deque<Vec> todo;
    for (const Vec& v : seeds)
        if (s.insert(v)) todo.push_back(v);
    while (!todo.empty()) {
        Vec v = todo.front();
        todo.pop_front();
        for (const Mat& g : m.gens) {
            Vec gv = g.apply(v);
            if (s.insert(gv)) todo.push_back(gv);
        }
    }
    return s;
}

inline bool is_stable(const Module& m, const Subspace& s) {
    for (const Vec& v : s.basis())
        for (const Mat& g : m.gens)
            if (!s.contains(g.apply(v))) return false;
    return true;
}

// Restriction to a stable subspace, in the coordinates Subspace::coords.
inline Module submodule(const Module& m, const Subspace& s) {
    Module out{m.p, s.dim(), {}};
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<Vec> cols;
        for (const Vec& b : s.basis()) {
            Vec gb = m.gens[k].apply(b);
            if (!s.contains(gb)) throw StructureError("submodule: subspace is not stable");
            cols.push_back(s.coords(gb));
        }
        out.gens[k] = Mat::from_columns(m.p, s.dim(), cols);
    }
    return out;
}

// Quotient by a stable subspace, in the coordinates Subspace::quotient_coords.
inline Module quotient(const Module& m, const Subspace& s) {
    auto fc = s.free_columns();
    Module out{m.p, fc.size(), {}};
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<Vec> cols;
        for (auto j : fc) {
            Vec e(m.dim, 0);
            e[j] = 1;
            cols.push_back(s.quotient_coords(m.gens[k].apply(e)));
        }
        out.gens[k] = Mat::from_columns(m.p, fc.size(), cols);
    }
    return out;
}

// Matrix of the projection onto quotient coordinates.
inline Mat quotient_map(const Subspace& s) {
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < s.ambient(); ++j) {
        Vec e(s.ambient(), 0);
        e[j] = 1;
        cols.push_back(s.quotient_coords(e));
    }
    return Mat::from_columns(s.prime(), s.free_columns().size(), cols);
}

inline Module direct_sum(const Module& x, const Module& y) {
    Module out{x.p, x.dim + y.dim, {}};
    for (std::size_t k = 0; k < 3; ++k) {
        Mat g(x.p, out.dim, out.dim);
        for (std::size_t i = 0; i < x.dim; ++i)
            for (std::size_t j = 0; j < x.dim; ++j) g(i, j) = x.gens[k](i, j);
        for (std::size_t i = 0; i < y.dim; ++i)
            for (std::size_t j = 0; j < y.dim; ++j) g(x.dim + i, x.dim + j) = y.gens[k](i, j);
        out.gens[k] = g;
    }
    return out;
}

inline Subspace fixed_space(const Module& m) {
    return Subspace::span(m.p, m.dim, kernel(m.gens[2] - Mat::identity(m.p, m.dim)));
}

// U-fixed vectors on which diag(g,1) and diag(1,g) act by g^e1 and g^e2.
struct WeightSpace {
    int e1 = 0, e2 = 0;
    std::vector<Vec> basis;
};

inline std::vector<WeightSpace> highest_weight_spaces(const Module& m) {
    u64 p = m.p, g = primitive_root(p);
    Mat id = Mat::identity(p, m.dim);
    Mat um = m.gens[2] - id, t1 = m.gens[1], t2 = m.tprime();
    std::vector<WeightSpace> out;
    for (u64 e1 = 0; e1 + 1 < p; ++e1) {
        Mat a1 = t1;
        u64 l1 = powmod(g, e1, p);
        for (std::size_t i = 0; i < m.dim; ++i) a1(i, i) = (a1(i, i) + p - l1) % p;
        for (u64 e2 = 0; e2 + 1 < p; ++e2) {
            Mat a2 = t2;
            u64 l2 = powmod(g, e2, p);
            for (std::size_t i = 0; i < m.dim; ++i) a2(i, i) = (a2(i, i) + p - l2) % p;
            Mat stack(p, 3 * m.dim, m.dim);
            for (std::size_t i = 0; i < m.dim; ++i)
                for (std::size_t j = 0; j < m.dim; ++j) {
                    stack(i, j) = um(i, j);
                    stack(m.dim + i, j) = a1(i, j);
                    stack(2 * m.dim + i, j) = a2(i, j);
                }
            auto ker = kernel(stack);
            if (!ker.empty()) out.push_back({static_cast<int>(e1), static_cast<int>(e2), ker});
        }
    }
    return out;
}

// Label of an irreducible module from a highest-weight vector: a from the
// dimension, b from diag(1,g) acting by g^b; diag(g,1) must give g^(a+b).
inline JHLabel label_irreducible(const Module& m, const WeightSpace& hw) {
    i64 a = static_cast<i64>(m.dim) - 1;
    i64 n = static_cast<i64>(m.p) - 1;
    if (pmod(hw.e1 - hw.e2 - a, n) != 0) throw StructureError("highest weight inconsistent with dimension");
    return jh_label(m.p, a, hw.e2);
}

struct IrreducibleSub {
    Subspace space;   // in the module's coordinates
    Vec hw;           // highest-weight vector
    JHLabel label;
};

// Some irreducible submodule of a nonzero module.
inline IrreducibleSub irreducible_submodule(const Module& m) {
    auto ws = highest_weight_spaces(m);
    if (ws.empty()) throw StructureError("nonzero module without U-fixed weight vectors");
    Subspace s = closure(m, {ws[0].basis[0]});
    Module sm = submodule(m, s);
    if (fixed_space(sm).dim() == 1) {
        return {s, ws[0].basis[0], label_irreducible(sm, ws[0])};
    }
    // s is a quotient of a principal series, so its U-fixed part is
    // 2-dimensional and some weight line inside it generates the socle.
    for (const WeightSpace& w : highest_weight_spaces(sm)) {
        std::vector<Vec> lines;
        if (w.basis.size() == 1) {
            lines.push_back(w.basis[0]);
        } else if (w.basis.size() == 2) {
            lines.push_back(w.basis[0]);
            for (u64 c = 0; c < m.p; ++c) lines.push_back(add_scaled(w.basis[1], w.basis[0], c, m.p));
        } else {
            throw StructureError("cyclic module with more than two U-fixed dimensions");
        }
        for (const Vec& x : lines) {
            Subspace c = closure(sm, {x});
            Module cm = submodule(sm, c);
            if (fixed_space(cm).dim() != 1) continue;
            std::vector<Vec> amb;
            for (const Vec& b : c.basis()) amb.push_back(s.from_coords(b));
            WeightSpace hw{w.e1, w.e2, {x}};
            return {Subspace::span(m.p, m.dim, amb), s.from_coords(x), label_irreducible(cm, hw)};
        }
    }
    throw StructureError("no irreducible submodule found");
}

// Labels of a composition series, bottom first (socle-first choices).
inline std::vector<JHLabel> jordan_holder(Module m) {
    std::vector<JHLabel> out;
    while (m.dim > 0) {
        IrreducibleSub s = irreducible_submodule(m);
        out.push_back(s.label);
        m = quotient(m, s.space);
    }
    return out;
}

inline bool is_irreducible(const Module& m) {
    return m.dim > 0 && jordan_holder(m).size() == 1;
}

// Basis of Hom_Gamma(a, b) as dim(b) x dim(a) matrices.
inline std::vector<Mat> equivariant_maps(const Module& a, const Module& b) {
    u64 p = a.p;
    std::size_t na = a.dim, nb = b.dim, n = na * nb;
    Mat sys(p, 3 * n, n);
    // unknown S(i, j) at column i * na + j; rows encode (g_b S - S g_a)(i, j).
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < na; ++j) {
                std::size_t row = k * n + i * na + j;
                for (std::size_t l = 0; l < nb; ++l) sys(row, l * na + j) = (sys(row, l * na + j) + b.gens[k](i, l)) % p;
                for (std::size_t l = 0; l < na; ++l)
                    sys(row, i * na + l) = (sys(row, i * na + l) + p - a.gens[k](l, j)) % p;
            }
    std::vector<Mat> out;
    for (const Vec& x : kernel(sys)) {
        Mat s(p, nb, na);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < na; ++j) s(i, j) = x[i * na + j];
        out.push_back(s);
    }
    return out;
}

// Whether m -> m/s has a Gamma-equivariant section.
inline bool has_equivariant_section(const Module& m, const Subspace& s) {
    u64 p = m.p;
    Module q = quotient(m, s);
    Mat pi = quotient_map(s);
    std::size_t nm = m.dim, nq = q.dim, n = nm * nq;
    Mat sys(p, 3 * n + nq * nq, n);
    Vec rhs(3 * n + nq * nq, 0);
    // unknown S (nm x nq) at column i * nq + j; g_m S = S g_q and pi S = I.
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < nm; ++i)
            for (std::size_t j = 0; j < nq; ++j) {
                std::size_t row = k * n + i * nq + j;
                for (std::size_t l = 0; l < nm; ++l) sys(row, l * nq + j) = (sys(row, l * nq + j) + m.gens[k](i, l)) % p;
                for (std::size_t l = 0; l < nq; ++l)
                    sys(row, i * nq + l) = (sys(row, i * nq + l) + p - q.gens[k](l, j)) % p;
            }
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < nq; ++j) {
            std::size_t row = 3 * n + i * nq + j;
            for (std::size_t l = 0; l < nm; ++l) sys(row, l * nq + j) = pi(i, l);
            rhs[row] = (i == j) ? 1 : 0;
        }
    return solve(sys, rhs).has_value();
}

// A Gamma-isomorphism from an irreducible module onto V_a (x) D^b, found as
// the graph generated by (highest-weight vector, X^a).
inline Mat isomorphism_to_standard(const Module& j, const Vec& hw, const JHLabel& lab) {
    Module v = sym_module(j.p, lab.a, lab.b);
    if (v.dim != j.dim) throw StructureError("dimension mismatch in identification");
    Module sum = direct_sum(j, v);
    Vec seed = hw;
    Vec top = monomial(lab.a, 0);
    seed.insert(seed.end(), top.begin(), top.end());
    Subspace graph = closure(sum, {seed});
    if (graph.dim() != j.dim) throw StructureError("no isomorphism onto " + lab.str());
    Mat phi(j.p, v.dim, j.dim);
    for (std::size_t k = 0; k < graph.dim(); ++k) {
        if (graph.pivots()[k] != k) throw StructureError("graph is not a function");
        for (std::size_t i = 0; i < v.dim; ++i) phi(i, k) = graph.basis()[k][j.dim + i];
    }
    return phi;
}

}  // namespace slope1
