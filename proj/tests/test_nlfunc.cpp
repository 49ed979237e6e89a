// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "nlhb/error.hpp"
#include "nlhb/nlfunc.hpp"

using namespace nlhb;

namespace {

// Bit-loop oracle for f using the truth table of g.
BitVector naive_f(const NonlinearFunctionSpec& spec, const BitVector& x) {
    const auto table = spec.truth_table();
    const std::size_t p = spec.window();
    BitVector y(x.size() - p);
    for (std::size_t i = 1; i <= y.size(); ++i) {
        std::uint32_t w = 0;
        for (std::size_t o = 1; o <= p; ++o) {
            if (x.get(i + o)) {
                w |= 1U << (o - 1);
            }
        }
        y.set(i, x.get(i) != table[w]);
    }
    return y;
}

bool has_maximizer(const EnumerationResult& r, const char* text) {
    auto target = NonlinearFunctionSpec::parse(text);
    return std::any_of(r.maximizers.begin(), r.maximizers.end(),
                       [&](const FunctionEntropy& f) { return f.spec == target; });
}

// Merge into column j at a fixed position inside a longer vector; the
// joint error pattern should match the local enumeration.
std::vector<std::uint64_t> merge_counts_at(const NonlinearFunctionSpec& spec, std::size_t j, std::size_t n) {
    const unsigned p = spec.window();
    std::vector<std::uint64_t> counts(std::size_t{1} << (p + 1), 0);
    const std::size_t lo = j - p;
    const std::size_t hi = j + p;
    for (std::uint32_t w = 0; w < (1U << (2 * p + 1)); ++w) {
        for (int xk = 0; xk <= 1; ++xk) {
            BitVector x(n);
            for (std::size_t t = 0; t <= 2 * p; ++t) {
                x.set(lo + t, (w >> t) & 1U);
            }
            (void)hi;
            BitVector xbar = x;
            if (xk) {
                xbar.flip(j);
            }
            BitVector diff = apply_f(spec, x) ^ apply_f(spec, xbar);
            std::uint32_t pattern = 0;
            for (std::size_t t = 0; t <= p; ++t) {
                if (diff.get(j - p + t)) {
                    pattern |= 1U << t;
                }
            }
            ++counts[pattern];
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("spec parsing") {
    auto c = NonlinearFunctionSpec::parse("p=3; g=x1x2+x2x3+x3x1");
    CHECK(c == NonlinearFunctionSpec::candidate());
    CHECK(c.to_string() == "p=3; g=x1x2+x1x3+x2x3");
    CHECK(NonlinearFunctionSpec::parse("p=2; g=0").monomials().empty());
    CHECK_THROWS_AS(NonlinearFunctionSpec::parse("p=3; g=x1"), Error);
    CHECK_THROWS_AS(NonlinearFunctionSpec::parse("p=3; g=x1x4"), Error);
    CHECK_THROWS_AS(NonlinearFunctionSpec::parse("p=3; g=x1x2+x2x1"), Error);
    CHECK_THROWS_AS(NonlinearFunctionSpec::parse("g=x1x2"), Error);
    CHECK(c.and_gates() == 3);
}

TEST_CASE("apply_f examples") {
    auto c = NonlinearFunctionSpec::candidate();
    CHECK(apply_f(c, BitVector(20)).is_zero());
    CHECK(apply_f(c, BitVector::from_string("111100")).to_string() == "001");
    CHECK(naive_f(c, BitVector::from_string("111100")).to_string() == "001");
    RandomSource rng(1);
    BitVector x = BitVector::random(50, rng);
    CHECK(apply_f(NonlinearFunctionSpec::zero(4), x) == x.slice(1, 46));
    CHECK_THROWS_AS(apply_f(c, BitVector(3)), Error);
}

TEST_CASE("apply_f agrees with truth-table oracle for every enumerated spec") {
    RandomSource rng(2);
    for (unsigned p = 2; p <= 3; ++p) {
        std::vector<std::uint32_t> pool;
        for (std::uint32_t m = 0; m < (1U << p); ++m) {
            if (__builtin_popcount(m) >= 2) {
                pool.push_back(m);
            }
        }
        for (std::uint32_t subset = 0; subset < (1U << pool.size()); ++subset) {
            std::vector<std::uint32_t> mons;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (subset & (1U << i)) {
                    mons.push_back(pool[i]);
                }
            }
            NonlinearFunctionSpec spec(p, mons);
            for (int t = 0; t < 5; ++t) {
                BitVector x = BitVector::random(p + 1 + rng.uniform_below(150), rng);
                CHECK(apply_f(spec, x) == naive_f(spec, x));
            }
        }
    }
}

TEST_CASE("balance") {
    auto r = balance_check(NonlinearFunctionSpec::candidate(), 16);
    CHECK(r.uniform);
    CHECK(r.output_bits == 13);
    CHECK(r.min_count == 8);
    CHECK(r.max_count == 8);
    CHECK(r.distinct_outputs == 8192);
    CHECK(balance_check(NonlinearFunctionSpec::zero(2), 9).uniform);
    auto p2 = balance_check(NonlinearFunctionSpec::parse("p=2; g=x1x2"), 12);
    CHECK(p2.uniform);
    CHECK(p2.min_count == 4);
    CHECK_THROWS_AS(balance_check(NonlinearFunctionSpec::candidate(), 24), Error);
}

TEST_CASE("per-bit balance over p+1 inputs") {
    for (auto spec : enumerate_functions(3).maximizers) {
        const auto table = spec.spec.truth_table();
        int ones = 0;
        for (std::uint32_t w = 0; w < 16; ++w) {
            ones += ((w & 1U) != 0) != table[w >> 1];
        }
        CHECK(ones == 8);
    }
}

TEST_CASE("merge entropy values") {
    auto d = merge_error_distribution(NonlinearFunctionSpec::candidate());
    CHECK(d.total == 256);
    CHECK(d.entropy.dyadic);
    CHECK(d.entropy.numerator == 5);
    CHECK(d.entropy.denominator_log2 == 1);
    CHECK(merge_error_distribution(NonlinearFunctionSpec::parse("p=2; g=x1x2")).entropy.bits == 2.0);
    CHECK(merge_error_distribution(NonlinearFunctionSpec::parse("p=4; g=x1x4+x2x3")).entropy.bits == 3.0);
}

TEST_CASE("last error bit equals the merged parity") {
    for (unsigned p = 2; p <= 4; ++p) {
        for (const auto& f : enumerate_functions(p).maximizers) {
            auto d = merge_error_distribution(f.spec);
            std::uint64_t ones = 0;
            for (std::size_t pat = 0; pat < d.counts.size(); ++pat) {
                if (pat & (std::size_t{1} << p)) {
                    ones += d.counts[pat];
                }
            }
            CHECK(2 * ones == d.total);
        }
    }
}

TEST_CASE("merge distribution is translation invariant") {
    auto spec = NonlinearFunctionSpec::candidate();
    auto local = merge_error_distribution(spec).counts;
    for (std::size_t j : {4u, 9u, 20u}) {
        CHECK(merge_counts_at(spec, j, 40) == local);
    }
}

TEST_CASE("entropy of counts") {
    auto h = entropy_of_counts({1, 1, 2});
    CHECK(h.dyadic);
    CHECK(h.bits == 1.5);
    auto g = entropy_of_counts({1, 2});
    CHECK_FALSE(g.dyadic);
    CHECK(std::abs(g.bits - (std::log2(3.0) - 2.0 / 3.0)) < 1e-12);
}

TEST_CASE("enumeration reproduces the maximum entropies") {
    auto r2 = enumerate_functions(2);
    CHECK(r2.functions_evaluated == 1);
    CHECK(r2.maximum.bits == 2.0);
    CHECK(has_maximizer(r2, "p=2; g=x1x2"));

    auto r3 = enumerate_functions(3);
    CHECK(r3.functions_evaluated == 15);
    CHECK(r3.maximum.dyadic);
    CHECK(r3.maximum.bits == 2.5);
    CHECK(has_maximizer(r3, "p=3; g=x1x2+x2x3+x1x3"));

    auto r4 = enumerate_functions(4);
    CHECK(r4.functions_evaluated == 2047);
    CHECK(r4.maximum.bits == 3.0);
    CHECK(has_maximizer(r4, "p=4; g=x1x4+x2x3"));
    CHECK_THROWS_AS(enumerate_functions(5), Error);
}
