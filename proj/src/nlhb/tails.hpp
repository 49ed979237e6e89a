// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact binomial tails for false accept / false reject and the scan that
// picks the shortest response length meeting both targets.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlhb/random.hpp"

namespace nlhb {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct TailProbability {
    /// log2 of the probability; -infinity for an exact zero.
    double log2_value = 0.0;
    /// Exact value numerator / denominator (always filled).
    BigInt numerator;
    BigInt denominator;

    bool is_zero() const { return numerator == 0; }
    BigRational exact() const { return BigRational(numerator, denominator); }
    /// True iff value <= 2^exponent, decided on the exact integers.
    bool at_most_pow2(long exponent) const;
};

/// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& x);

/// sum_{i=0..u} C(D,i) 2^-D
TailProbability false_accept(std::uint64_t D, std::uint64_t u);

/// sum_{i=u+1..D} C(D,i) eps^i (1-eps)^(D-i)
TailProbability false_reject(std::uint64_t D, const Rational& eps, std::uint64_t u);

struct LengthSearch {
    std::uint64_t D = 0;
    std::uint64_t u = 0;
    TailProbability pfa;
    TailProbability pfr;
    std::uint64_t scanned = 0;
    std::uint64_t exact_checks = 0;
    /// Lengths where a tail got larger than at the previous length (the
    /// floor in u makes both tails saw-toothed in D).
    std::vector<std::uint64_t> pfa_increases;
    std::vector<std::uint64_t> pfr_increases;
};

inline constexpr std::uint64_t kMaxSearchLength = 100000;

/// Smallest D with u = floor(eps' D) meeting log2 P_FA <= pfa_log2 and
/// log2 P_FR <= pfr_log2. Throws Range when no D <= cap works.
LengthSearch find_min_length(const Rational& eps, const Rational& epsp, double pfa_log2, double pfr_log2,
                             std::uint64_t cap = kMaxSearchLength);

}  // namespace nlhb
