// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "nlhb/error.hpp"
#include "nlhb/tails.hpp"

using namespace nlhb;

namespace {

BigInt factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

// Direct rational summation with binomials from factorials.
BigRational direct_fa(unsigned D, unsigned u) {
    BigRational s = 0;
    for (unsigned i = 0; i <= u; ++i) {
        s += BigRational(factorial(D) / (factorial(i) * factorial(D - i)), BigInt(1) << D);
    }
    return s;
}

BigRational direct_fr(unsigned D, BigRational eps, unsigned u) {
    BigRational s = 0;
    for (unsigned i = u + 1; i <= D; ++i) {
        BigRational term = BigRational(factorial(D) / (factorial(i) * factorial(D - i)));
        for (unsigned j = 0; j < i; ++j) {
            term *= eps;
        }
        for (unsigned j = i; j < D; ++j) {
            term *= 1 - eps;
        }
        s += term;
    }
    return s;
}

// Independent floating oracle: long-double terms via lgamma.
double float_fa(unsigned D, unsigned u) {
    long double s = 0;
    for (unsigned i = 0; i <= u; ++i) {
        s += std::exp(std::lgamma(D + 1.0L) - std::lgamma(i + 1.0L) - std::lgamma(D - i + 1.0L) - D * std::log(2.0L));
    }
    return static_cast<double>(std::log2(s));
}

double float_fr(unsigned D, long double e, unsigned u) {
    long double s = 0;
    for (unsigned i = u + 1; i <= D; ++i) {
        s += std::exp(std::lgamma(D + 1.0L) - std::lgamma(i + 1.0L) - std::lgamma(D - i + 1.0L) + i * std::log(e) +
                      (D - i) * std::log(1 - e));
    }
    return static_cast<double>(std::log2(s));
}

}  // namespace

TEST_CASE("false accept basics") {
    CHECK(false_accept(10, 10).log2_value == 0.0);
    auto t = false_accept(4, 1);
    CHECK(t.exact() == BigRational(5, 16));
    CHECK_THROWS_AS(false_accept(4, 5), Error);
}

TEST_CASE("false reject basics") {
    CHECK(false_reject(10, Rational(1, 4), 10).is_zero());
    CHECK(std::isinf(false_reject(10, Rational(1, 4), 10).log2_value));
    CHECK(false_reject(2, Rational(1, 4), 0).exact() == BigRational(7, 16));
    CHECK_THROWS_AS(false_reject(4, Rational(1, 2), 1), Error);
    CHECK_THROWS_AS(false_reject(4, Rational(0, 1), 1), Error);
}

TEST_CASE("exact tails match direct summation for small D") {
    for (unsigned D : {1u, 5u, 17u, 40u, 64u}) {
        for (unsigned u = 0; u <= D; u += 1 + D / 7) {
            auto fa = false_accept(D, u);
            CHECK(fa.exact() == direct_fa(D, u));
            CHECK(std::abs(fa.log2_value - std::log2(static_cast<double>(fa.exact()))) < 1e-9);
            auto fr = false_reject(D, Rational(3, 10), u);
            CHECK(fr.exact() == direct_fr(D, BigRational(3, 10), u));
            if (!fr.is_zero()) {
                CHECK(std::abs(fr.log2_value - std::log2(static_cast<double>(fr.exact()))) < 1e-9);
            }
        }
    }
}

TEST_CASE("tail monotonicity in u and complement at one half") {
    for (unsigned D : {7u, 30u, 100u}) {
        BigRational prev_fa = -1;
        BigRational prev_fr = 2;
        for (unsigned u = 0; u <= D; ++u) {
            auto fa = false_accept(D, u).exact();
            auto fr = false_reject(D, Rational(1, 5), u).exact();
            CHECK(fa >= prev_fa);
            CHECK(fr <= prev_fr);
            prev_fa = fa;
            prev_fr = fr;
            // Upper tail at 1/2 written as the complement sum.
            BigRational upper = 0;
            for (unsigned i = u + 1; i <= D; ++i) {
                upper += BigRational(factorial(D) / (factorial(i) * factorial(D - i)), BigInt(1) << D);
            }
            CHECK(fa + upper == 1);
        }
    }
}

TEST_CASE("reference parameter tails") {
    auto fa = false_accept(1164, 405);
    auto fr = false_reject(1164, Rational(1, 4), 405);
    CHECK(fa.at_most_pow2(-80));
    CHECK(fr.at_most_pow2(-40));
    CHECK(std::abs(fa.log2_value - float_fa(1164, 405)) < 1e-6);
    CHECK(std::abs(fr.log2_value - float_fr(1164, 0.25L, 405)) < 1e-6);
}

TEST_CASE("length search") {
    auto trivial = find_min_length(Rational(1, 4), Rational(87, 250), 0, 0);
    CHECK(trivial.D == 1);

    auto ref = find_min_length(Rational(1, 4), Rational(348, 1000), -80, -40);
    CHECK(ref.D <= 1164);
    CHECK(ref.u == Rational(87, 250).floor_times(ref.D));
    CHECK(ref.pfa.log2_value <= -80);
    CHECK(ref.pfr.log2_value <= -40);

    const Rational e(1, 8);
    const Rational ep(1, 4);
    auto r = find_min_length(e, ep, -20, -20);
    auto pass = [&](std::uint64_t D) {
        const auto u = ep.floor_times(D);
        return false_accept(D, u).log2_value <= -20 && false_reject(D, e, u).log2_value <= -20;
    };
    CHECK(pass(r.D));
    for (std::uint64_t D = 1; D < r.D; ++D) {
        CHECK_FALSE(pass(D));
    }
    CHECK_THROWS_AS(find_min_length(e, ep, -20, -20, 10), Error);
}
