// tests/test_fq.cpp
// SPDX-License-Identifier: Apache-2.0
#include <set>

#include <gtest/gtest.h>

#include "slope1/fq.hpp"

using namespace slope1;

TEST(Fq, ModelExamples) {
    EXPECT_EQ(fq2_model(5).n, 2u);
    EXPECT_EQ(fq2_model(7).n, 3u);
    EXPECT_EQ(fq2_model(13).n, 2u);
}

TEST(Fq, OperationExamples) {
    EXPECT_EQ(Fq(5, 1).inv(), Fq(5, 1));
    EXPECT_EQ(*Fq(5, 4).sqrt(), Fq(5, 2));
    Fq s(5, 0, 1);
    EXPECT_EQ(s.pow(5), -s);
    EXPECT_THROW(Fq(5, 0).inv(), HypothesisError);
}

TEST(Fq, FieldAxioms) {
    for (u64 p = 3; p <= 101; p += 2) {
        if (!is_prime(p)) continue;
        for (u64 a0 = 0; a0 < p; a0 += (p > 31 ? 7 : 1))
            for (u64 a1 = 0; a1 < p; a1 += (p > 31 ? 5 : 1)) {
                Fq x(p, a0, a1);
                if (x.is_zero()) continue;
                ASSERT_EQ(x * x.inv(), Fq(p, 1));
                ASSERT_EQ(x.pow(p * p - 1), Fq(p, 1));
                ASSERT_EQ(x.frobenius() == x, a1 == 0);
            }
    }
}

TEST(Fq, SqrtMatchesBruteForce) {
    for (u64 p : {3u, 5u, 7u, 11u, 13u}) {
        for (u64 a0 = 0; a0 < p; ++a0)
            for (u64 a1 = 0; a1 < p; ++a1) {
                Fq x(p, a0, a1);
                std::set<Fq> roots;
                for (u64 c0 = 0; c0 < p; ++c0)
                    for (u64 c1 = 0; c1 < p; ++c1)
                        if (Fq(p, c0, c1) * Fq(p, c0, c1) == x) roots.insert(Fq(p, c0, c1));
                auto r = x.sqrt();
                if (roots.empty()) {
                    EXPECT_FALSE(r.has_value());
                } else {
                    ASSERT_TRUE(r.has_value());
                    EXPECT_EQ(*r, *roots.begin());
                }
            }
    }
}

TEST(Fq, QuadraticExamples) {
    auto [a, b] = solve_monic_quadratic(Fq(5, 2));
    EXPECT_EQ(a, Fq(5, 1));
    EXPECT_EQ(b, Fq(5, 1));
    auto [c, d] = solve_monic_quadratic(Fq(5, 0));
    EXPECT_EQ(c * c, Fq(5, 4));
    EXPECT_EQ(c * d, Fq(5, 1));
    auto [e, f] = solve_monic_quadratic(Fq(7, 3));
    EXPECT_EQ(e.degree(), 2);  // discriminant 5 is a non-residue mod 7
    EXPECT_EQ(e * f, Fq(7, 1));
}

TEST(Fq, QuadraticVieta) {
    for (u64 p = 3; p <= 31; p += 2) {
        if (!is_prime(p)) continue;
        for (u64 c = 0; c < p; ++c) {
            auto [x, y] = solve_monic_quadratic(Fq(p, c));
            ASSERT_EQ(x * y, Fq(p, 1));
            ASSERT_EQ(x + y, Fq(p, c));
            ASSERT_FALSE(y < x);
        }
    }
}

TEST(Fq, QuadraticBruteForce) {
    for (u64 p : {3u, 5u, 7u, 11u, 13u})
        for (u64 c = 0; c < p; ++c) {
            std::set<Fq> roots;
            for (u64 a0 = 0; a0 < p; ++a0)
                for (u64 a1 = 0; a1 < p; ++a1) {
                    Fq x(p, a0, a1);
                    if (x * x - Fq(p, c) * x + Fq(p, 1) == Fq(p, 0)) roots.insert(x);
                }
            auto [x, y] = solve_monic_quadratic(Fq(p, c));
            std::set<Fq> got{x, y};
            EXPECT_EQ(got, roots) << "p=" << p << " c=" << c;
        }
}
