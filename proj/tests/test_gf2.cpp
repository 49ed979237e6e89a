// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nlhb/error.hpp"
#include "nlhb/gf2.hpp"

using namespace nlhb;

namespace {

// Naive oracles: per-bit loops with no word tricks.
BitVector naive_mul(const BitVector& s, const BitMatrix& a) {
    BitVector out(a.cols());
    for (std::size_t j = 1; j <= a.cols(); ++j) {
        bool acc = false;
        for (std::size_t i = 1; i <= a.rows(); ++i) {
            acc ^= s.get(i) && a.get(i, j);
        }
        out.set(j, acc);
    }
    return out;
}

std::size_t naive_hamming(const BitVector& a, const BitVector& b) {
    std::size_t d = 0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        d += a.get(i) != b.get(i);
    }
    return d;
}

std::size_t naive_rank(BitMatrix a) {
    std::size_t r = 0;
    for (std::size_t c = 1; c <= a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r + 1;
        while (piv <= a.rows() && !a.get(piv, c)) {
            ++piv;
        }
        if (piv > a.rows()) {
            continue;
        }
        BitVector tmp = a.row(piv);
        a.set_row(piv, a.row(r + 1));
        a.set_row(r + 1, tmp);
        for (std::size_t i = r + 2; i <= a.rows(); ++i) {
            if (a.get(i, c)) {
                for (std::size_t j = 1; j <= a.cols(); ++j) {
                    a.set(i, j, a.get(i, j) != a.get(r + 1, j));
                }
            }
        }
        ++r;
    }
    return r;
}

}  // namespace

TEST_CASE("mat_vec_mul basic cases") {
    RandomSource rng(1);
    BitMatrix a = BitMatrix::random(5, 70, rng);
    CHECK(mat_vec_mul(BitVector(5), a).is_zero());
    BitVector s = BitVector::random(9, rng);
    CHECK(mat_vec_mul(s, BitMatrix::identity(9)) == s);

    std::vector<BitVector> cols = {BitVector::from_string("100"), BitVector::from_string("010"),
                                   BitVector::from_string("001"), BitVector::from_string("111")};
    BitMatrix m = BitMatrix::from_columns(cols, 3);
    BitVector v = BitVector::from_string("101");
    // Column 111 has parity 1+0+1 = 0 against 101.
    CHECK(naive_mul(v, m).to_string() == "1010");
    CHECK(mat_vec_mul(v, m) == naive_mul(v, m));
    CHECK_THROWS_AS(mat_vec_mul(BitVector(4), m), Error);
}

TEST_CASE("mat_vec_mul matches naive oracle on random inputs") {
    RandomSource rng(2);
    for (int t = 0; t < 50; ++t) {
        std::size_t k = 1 + rng.uniform_below(40);
        std::size_t n = 1 + rng.uniform_below(200);
        BitMatrix a = BitMatrix::random(k, n, rng);
        BitVector s = BitVector::random(k, rng);
        CHECK(mat_vec_mul(s, a) == naive_mul(s, a));
    }
}

TEST_CASE("hamming distance") {
    BitVector x = BitVector::from_string("10110");
    CHECK(hamming(x, x) == 0);
    CHECK(hamming(BitVector::from_string("0000"), BitVector::from_string("1111")) == 4);
    RandomSource rng(3);
    for (int t = 0; t < 20; ++t) {
        BitVector a = BitVector::random(64, rng);
        BitVector b = BitVector::random(64, rng);
        CHECK(hamming(a, b) == naive_hamming(a, b));
        CHECK(hamming(a, b) == (a ^ b).weight());
    }
    CHECK_THROWS_AS(hamming(BitVector(3), BitVector(4)), Error);
}

TEST_CASE("xor group laws and metric axioms") {
    RandomSource rng(4);
    for (int t = 0; t < 100; ++t) {
        std::size_t len = 1 + rng.uniform_below(300);
        BitVector a = BitVector::random(len, rng);
        BitVector b = BitVector::random(len, rng);
        BitVector c = BitVector::random(len, rng);
        CHECK(((a ^ b) ^ c) == (a ^ (b ^ c)));
        CHECK((a ^ b) == (b ^ a));
        CHECK((a ^ a).is_zero());
        CHECK(hamming(a, b) == hamming(b, a));
        CHECK(hamming(a, c) <= hamming(a, b) + hamming(b, c));
        CHECK((hamming(a, b) == 0) == (a == b));
        CHECK(a.weight() <= len);
    }
}

TEST_CASE("linearity of mat_vec_mul") {
    RandomSource rng(5);
    for (int t = 0; t < 50; ++t) {
        BitMatrix a = BitMatrix::random(17, 130, rng);
        BitVector s1 = BitVector::random(17, rng);
        BitVector s2 = BitVector::random(17, rng);
        CHECK(mat_vec_mul(s1 ^ s2, a) == (mat_vec_mul(s1, a) ^ mat_vec_mul(s2, a)));
    }
}

TEST_CASE("column extraction round-trips") {
    RandomSource rng(6);
    BitMatrix a = BitMatrix::random(7, 99, rng);
    BitMatrix b(7, 99);
    for (std::size_t j = 1; j <= 99; ++j) {
        b.set_column(j, a.column(j));
    }
    CHECK(a == b);
    CHECK(a.transpose().transpose() == a);
}

TEST_CASE("slice") {
    RandomSource rng(7);
    BitVector x = BitVector::random(300, rng);
    for (std::size_t first : {1u, 2u, 63u, 64u, 65u, 130u}) {
        BitVector s = x.slice(first, 100);
        for (std::size_t i = 1; i <= 100; ++i) {
            CHECK(s.get(i) == x.get(first + i - 1));
        }
    }
}

TEST_CASE("gaussian_solve") {
    BitVector s = BitVector::from_string("1101");
    BitMatrix padded(4, 6);
    for (std::size_t i = 1; i <= 4; ++i) {
        padded.set(i, i, true);
    }
    auto r = gaussian_solve(padded, mat_vec_mul(s, padded));
    REQUIRE(r.ok());
    CHECK(r.solution == s);

    RandomSource rng(8);
    int solved = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t k = 1 + rng.uniform_below(20);
        std::size_t m = k + rng.uniform_below(10);
        BitMatrix a = BitMatrix::random(k, m, rng);
        BitVector planted = BitVector::random(k, rng);
        auto res = gaussian_solve(a, mat_vec_mul(planted, a));
        CHECK(res.rank == naive_rank(a));
        CHECK(rank(a) == naive_rank(a));
        if (naive_rank(a) == k) {
            REQUIRE(res.ok());
            CHECK(res.solution == planted);
            ++solved;
        } else {
            CHECK(res.status == SolveStatus::RankDeficient);
        }
    }
    CHECK(solved > 100);

    // Two equal columns only: rank 1 < k = 2.
    std::vector<BitVector> cols = {BitVector::from_string("11"), BitVector::from_string("11")};
    BitMatrix dup = BitMatrix::from_columns(cols, 2);
    CHECK(gaussian_solve(dup, BitVector::from_string("00")).status == SolveStatus::RankDeficient);
    CHECK(gaussian_solve(dup, BitVector::from_string("01")).status == SolveStatus::Inconsistent);
}

TEST_CASE("bernoulli sampling") {
    RandomSource rng(9);
    CHECK_THROWS_AS(bernoulli_vector(10, Rational(0, 1), rng), Error);
    CHECK_THROWS_AS(bernoulli_vector(10, Rational(1, 2), rng), Error);

    const Rational eps(1, 4);
    double total = 0;
    const int draws = 1000;
    for (int t = 0; t < draws; ++t) {
        total += static_cast<double>(bernoulli_vector(1164, eps, rng).weight());
    }
    const double mean = total / draws;
    const double sigma = std::sqrt(1164.0 * 0.25 * 0.75 / draws);
    CHECK(std::abs(mean - 291.0) < 4 * sigma);

    RandomSource a(77);
    RandomSource b(77);
    CHECK(bernoulli_vector(500, eps, a) == bernoulli_vector(500, eps, b));
}

TEST_CASE("exact bernoulli on a dyadic rate uses the threshold") {
    // With eps = 1/4 the threshold is 2^62 exactly and no tie-break occurs.
    RandomSource rng(10);
    RandomSource mirror(10);
    for (int t = 0; t < 1000; ++t) {
        bool bit = rng.bernoulli(Rational(1, 4));
        CHECK(bit == (mirror.next_u64() < (std::uint64_t{1} << 62)));
    }
}

TEST_CASE("bounded weight sampler") {
    RandomSource rng(11);
    for (int t = 0; t < 200; ++t) {
        CHECK(bounded_weight_vector(40, Rational(1, 8), rng).weight() <= 5);
    }
}

TEST_CASE("hex round trip") {
    RandomSource rng(12);
    for (std::size_t len : {1u, 3u, 4u, 5u, 64u, 65u, 1164u}) {
        BitVector v = BitVector::random(len, rng);
        CHECK(parse_bitvector(to_hex(v)) == v);
    }
    BitMatrix m = BitMatrix::random(5, 13, rng);
    CHECK(parse_bitmatrix(to_hex(m)) == m);
    CHECK(hex_digits(BitVector::from_string("1000")) == "8");
    CHECK(hex_digits(BitVector::from_string("00001")) == "08");
    CHECK_THROWS_AS(parse_bitvector("bits 5\nff\n"), Error);
    CHECK_THROWS_AS(parse_bitvector("bits 5\nzz\n"), Error);
}
