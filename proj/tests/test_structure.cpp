// tests/test_structure.cpp
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "slope1/structure.hpp"

using namespace slope1;

TEST(Structure, NamedExamples) {
    // X^15 Y - (4-16)/4 theta X^8 lies in X_16 + V_16**; checked here with a
    // fresh membership computation rather than through the verifier.
    u64 p = 7;
    Subspace k = kernel_space(p, 16);
    Vec v = add_scaled(monomial(16, 1), theta_mul(p, monomial(8, 0)), 3, p);  // -(4-16)/4 = 3
    EXPECT_TRUE(k.contains(v));
    EXPECT_TRUE(verify_structural_lemma("a_mod_p", 7, 16).pass);
    EXPECT_TRUE(verify_structural_lemma("goodcasenew_ii", 5, 10).pass);
    EXPECT_TRUE(verify_structural_lemma("goodcasenew_ii", 5, 30).pass);
    // r = 15 has a = 3, outside the a = 2 hypothesis; the same congruence
    // still holds there because (a-r)/a = 1 mod 5.
    EXPECT_THROW(verify_structural_lemma("goodcasenew_ii", 5, 15), HypothesisError);
    Subspace k15 = kernel_space(5, 15);
    EXPECT_TRUE(k15.contains(add_scaled(monomial(15, 1), theta_mul(5, monomial(9, 0)), 4, 5)));

    auto split = verify_structural_lemma("es1_i", 5, 12);
    EXPECT_TRUE(split.pass);
    EXPECT_EQ(split.detail.rfind("split", 0), 0u);
    auto nonsplit = verify_structural_lemma("es1_i", 5, 14);
    EXPECT_TRUE(nonsplit.pass);
    EXPECT_EQ(nonsplit.detail.rfind("non-split", 0), 0u);

    EXPECT_THROW(verify_structural_lemma("a_mod_p", 7, 14), HypothesisError);  // a = 2
    EXPECT_THROW(verify_structural_lemma("nope", 7, 16), HypothesisError);
}

TEST(Structure, IntersectMatchesDimensionFormula) {
    u64 p = 5;
    Subspace a = theta_power_part(p, 20, 1), b = x_r(sym_module(p, 20));
    Subspace sum = a;
    for (const Vec& x : b.basis()) sum.insert(x);
    Subspace c = intersect(a, b);
    EXPECT_EQ(c.dim() + sum.dim(), a.dim() + b.dim());
    EXPECT_TRUE(a.contains(c));
    EXPECT_TRUE(b.contains(c));
}

TEST(Structure, AllLemmasSmallGrid) {
    for (u64 p : {5u, 7u})
        for (int r = static_cast<int>(p); r <= 6 * static_cast<int>(p); ++r)
            for (const auto& name : structural_lemmas_for(p, r)) {
                auto rep = verify_structural_lemma(name, p, r);
                EXPECT_TRUE(rep.pass) << name << " p=" << p << " r=" << r << ": " << rep.detail;
            }
}

TEST(Structure, LatticeExamples) {
    auto r8 = nonstandard_lattice_reduction(5, 8);
    EXPECT_TRUE(r8.pass);
    EXPECT_EQ(r8.top_labels, std::vector<JHLabel>{jh_label(5, 2, 1)});
    EXPECT_TRUE(r8.M1_equals_M2);

    auto r12 = nonstandard_lattice_reduction(5, 12);
    EXPECT_TRUE(r12.pass);
    auto sorted = [](std::vector<JHLabel> v) {
        std::sort(v.begin(), v.end(), [](auto& x, auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
        return v;
    };
    EXPECT_EQ(sorted(r12.top_labels), sorted({jh_label(5, 0, 2), jh_label(5, 2, 1), jh_label(5, 2, 3)}));

    auto r16 = nonstandard_lattice_reduction(5, 16);
    EXPECT_EQ(sorted(r16.top_labels), sorted({jh_label(5, 4, 2), jh_label(5, 2, 1), jh_label(5, 2, 3)}));
    EXPECT_TRUE(r16.M1_equals_M2);

    for (int r = 8; r <= 40; r += 4) {
        auto rep = nonstandard_lattice_reduction(5, r);
        EXPECT_EQ(rep.dim_M1, 6u) << r;  // p + 1
        EXPECT_EQ(rep.dim_M0, 5u) << r;
        EXPECT_TRUE(rep.M1_kernel_is_Vstar) << r;
        EXPECT_TRUE(rep.k1_trivial_on_M1) << r;
        EXPECT_FALSE(rep.k1_trivial_everywhere) << r;
        EXPECT_TRUE(rep.pass) << r;
    }
    EXPECT_THROW(nonstandard_lattice_reduction(5, 10), HypothesisError);
}

TEST(Structure, LatticeCoordinatesRoundTrip) {
    NonstandardLattice L(7, 24);
    for (std::size_t i = 0; i < 25; ++i) EXPECT_EQ(L.coords(L.lift(i)), L.unit(i));
    // X^(r-1)Y is p * (theta X^(r-p-1)/p) plus p-divisible terms, never integral on its own scale.
    EXPECT_THROW(L.coords(monomial(24, 1)), StructureError);
}
