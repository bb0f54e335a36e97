// tests/test_padic.cpp
// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <gtest/gtest.h>

#include "slope1/padic.hpp"

using namespace slope1;

namespace {

// Oracle: x mod p^k for a rational num/den, by exact big-integer arithmetic.
u64 rational_mod(const BigInt& num, const BigInt& den, u64 p, int k) {
    BigInt m = 1;
    for (int i = 0; i < k; ++i) m *= p;
    BigInt n = num % m, d = den % m;
    if (n < 0) n += m;
    if (d < 0) d += m;
    // inverse of d by brute extended Euclid on big integers
    BigInt a = d, b = m, x0 = 1, x1 = 0;
    while (b != 0) {
        BigInt q = a / b, t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    BigInt r = (n * x0) % m;
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

}  // namespace

TEST(Padic, FromRationalExamples) {
    Padic x = Padic::from_rational(4830, 1, 5, 6);
    EXPECT_EQ(x.valuation(), 1);
    EXPECT_EQ(x.abs_precision(), 6);
    EXPECT_EQ(x.unit(), 966 % 3125);

    EXPECT_TRUE(Padic::from_rational(0, 1, 5, 6).is_zero());

    Padic y = Padic::from_rational(225, 966, 5, 6);
    EXPECT_EQ(y.valuation(), 2);
    EXPECT_EQ(y.unit(), rational_mod(9, 966, 5, 4));
}

TEST(Padic, Errors) {
    EXPECT_THROW(Padic::from_rational(1, 0, 5, 4), HypothesisError);
    EXPECT_THROW(Padic::from_rational(1, 1, 9, 4), HypothesisError);
    EXPECT_THROW(Padic::zero(5, 3).valuation(), PrecisionError);
    EXPECT_THROW(Padic::zero(5, 3).inv(), PrecisionError);
    EXPECT_THROW(Padic::from_int(5, 5).residue(), HypothesisError);
}

TEST(Padic, ValuationExamples) {
    EXPECT_EQ(Padic::from_int(4830, 5).valuation(), 1);
    EXPECT_EQ(Padic::from_int(5, 5).valuation(), 1);
    Padic z = Padic::from_int(966, 5) - Padic::exact(225, 966, 5);
    EXPECT_EQ(z.valuation(), 0);
}

TEST(Padic, RingExamples) {
    Padic p5 = Padic::from_int(5, 5);
    EXPECT_EQ((p5 * p5).valuation(), 2);
    Padic x = Padic::from_rational(966, 1, 5, 4);
    EXPECT_TRUE((x + (-x)).is_zero());
    EXPECT_EQ(x.inv().unit(), rational_mod(1, 966, 5, 4));
}

TEST(Padic, ResidueExamples) {
    EXPECT_EQ(Padic::from_int(966, 5).residue(), 1u);
    EXPECT_EQ(Padic::from_int(1, 5).residue(), 1u);
    EXPECT_EQ(Padic::from_int(-2392, 7).residue(), 2u);
}

TEST(Padic, TeichmullerExamples) {
    EXPECT_EQ(Padic::teichmuller(1, 5, 4).unit(), 1u);
    EXPECT_TRUE(Padic::teichmuller(0, 5, 4).is_exact_zero());
    // Fixed point of x -> x^5 mod 125 starting at 2, by direct iteration.
    u64 x = 2;
    for (int i = 0; i < 10; ++i) x = powmod(x, 5, 125);
    EXPECT_EQ(Padic::teichmuller(2, 5, 3).unit(), x);
    EXPECT_EQ(x, 57u);
}

TEST(Padic, DigitStrings) {
    Padic x = Padic::parse_digits("1:1,3,4", 5);
    EXPECT_EQ(x.valuation(), 1);
    EXPECT_EQ(x.unit(), 1u + 3 * 5 + 4 * 25);
    EXPECT_EQ(x.abs_precision(), 4);
    Padic y = Padic::parse_digits("1:0,2", 5);
    EXPECT_EQ(y.valuation(), 2);
    EXPECT_EQ(y.abs_precision(), 3);
    EXPECT_TRUE(Padic::parse_digits("0:0,0", 7).is_zero());
    EXPECT_EQ(Padic::parse_digits("-1:3", 7).valuation(), -1);
    EXPECT_THROW(Padic::parse_digits("1:5", 5), HypothesisError);
    EXPECT_THROW(Padic::parse_digits("x:1", 5), HypothesisError);
    EXPECT_THROW(Padic::parse_digits("11", 5), HypothesisError);
}

TEST(Padic, PrecisionPropagation) {
    Padic a = Padic::from_rational(1, 1, 5, 3);
    Padic b = Padic::from_rational(1, 1, 5, 6);
    EXPECT_EQ((a + b).abs_precision(), 3);
    Padic pb = Padic::from_rational(5, 1, 5, 6);
    EXPECT_EQ((a * pb).abs_precision(), 4);  // rel min(3,5) at valuation 1
    EXPECT_EQ(a.scale_p(2).abs_precision(), 5);
    Padic z = Padic::zero(5, 3);
    EXPECT_EQ((z * pb).abs_precision(), 4);
    EXPECT_TRUE((Padic::zero(5) * a).is_exact_zero());
}

TEST(Padic, RandomRingLaws) {
    std::mt19937_64 rng(11);
    for (u64 p : {3u, 5u, 7u, 31u}) {
        std::uniform_int_distribution<long long> dist(-100000, 100000);
        for (int trial = 0; trial < 2000; ++trial) {
            BigInt a = dist(rng), b = dist(rng), c = dist(rng), d = dist(rng);
            if (a == 0 || b == 0 || c == 0 || d == 0) continue;
            int N = 8;
            Padic x = Padic::from_rational(a, b, p, N), y = Padic::from_rational(c, d, p, N);
            Padic sum = Padic::from_rational(a * d + b * c, b * d, p, N);
            EXPECT_TRUE((x + y).agrees(sum));
            EXPECT_EQ((x * y).valuation(), x.valuation() + y.valuation());
            if (x.valuation() != y.valuation()) {
                EXPECT_EQ((x + y).valuation(), std::min(x.valuation(), y.valuation()));
            } else if (!(x + y).is_zero()) {
                EXPECT_GE((x + y).valuation(), x.valuation());
            }
            EXPECT_TRUE((x * x.inv()).agrees(Padic::one(p)));
        }
    }
}
