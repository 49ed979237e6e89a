// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// The sliding-window nonlinear map f: {0,1}^n -> {0,1}^(n-p),
//   y_i = x_i + g(x_{i+1}, ..., x_{i+p}),
// where g is a XOR of monomials of degree >= 2.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nlhb/gf2.hpp"

namespace nlhb {

class NonlinearFunctionSpec {
  public:
    /// Each monomial is a bitmask over window offsets: bit (o-1) set means
    /// x_{i+o} is a factor. Monomials must have at least two factors.
    NonlinearFunctionSpec(unsigned p, std::vector<std::uint32_t> monomials);

    /// Text form "p=3; g=x1x2+x2x3+x3x1"; "g=0" is the empty sum.
    static NonlinearFunctionSpec parse(std::string_view text);

    /// The low-cost p=3 candidate x1x2 + x2x3 + x3x1.
    static NonlinearFunctionSpec candidate();
    static NonlinearFunctionSpec zero(unsigned p);

    unsigned window() const noexcept { return p_; }
    const std::vector<std::uint32_t>& monomials() const noexcept { return monomials_; }

    /// g evaluated on a window packed as bit (o-1) = x_{i+o}.
    bool eval_g(std::uint32_t window_bits) const noexcept;
    std::vector<bool> truth_table() const;

    /// AND gates per output bit (sum of degree-1 over monomials).
    std::uint64_t and_gates() const noexcept;

    std::string to_string() const;
    /// Only the g part, e.g. "x1x2+x1x3+x2x3" or "0".
    std::string monomial_string() const;

    friend bool operator==(const NonlinearFunctionSpec&, const NonlinearFunctionSpec&) = default;

  private:
    unsigned p_ = 0;
    std::vector<std::uint32_t> monomials_;  // sorted, unique
};

/// f(x); requires x.size() > p.
BitVector apply_f(const NonlinearFunctionSpec& spec, const BitVector& x);

struct UniformityReport {
    unsigned n = 0;
    unsigned output_bits = 0;
    std::uint64_t expected_count = 0;  // 2^p
    std::uint64_t min_count = 0;
    std::uint64_t max_count = 0;
    std::uint64_t distinct_outputs = 0;
    /// multiplicity -> number of outputs occurring that many times
    std::map<std::uint64_t, std::uint64_t> count_histogram;
    bool uniform = false;
};

inline constexpr unsigned kMaxBalanceInputBits = 20;

/// Exhaustive evaluation of f on all 2^n inputs (n <= 20).
UniformityReport balance_check(const NonlinearFunctionSpec& spec, unsigned n);

/// Shannon entropy of a distribution given by integer counts over a total.
/// When every nonzero count is a power of two the value is a dyadic
/// rational, reported exactly as numerator / 2^denominator_log2.
struct Entropy {
    double bits = 0.0;
    bool dyadic = false;
    std::uint64_t numerator = 0;
    unsigned denominator_log2 = 0;

    std::string to_string() const;
};

Entropy entropy_of_counts(const std::vector<std::uint64_t>& counts);

/// Exact joint distribution of (E_{j-p}, ..., E_j) after adding column k into
/// column j. Pattern bit t (0-based) is E_{j-p+t}; probability = count/total.
struct MergeErrorDistribution {
    unsigned p = 0;
    std::vector<std::uint64_t> counts;  // size 2^(p+1)
    std::uint64_t total = 0;            // 2^(2p+2)
    Entropy entropy;
};

MergeErrorDistribution merge_error_distribution(const NonlinearFunctionSpec& spec);

struct FunctionEntropy {
    NonlinearFunctionSpec spec;
    Entropy entropy;
};

struct EnumerationResult {
    unsigned p = 0;
    std::uint64_t functions_evaluated = 0;
    Entropy maximum;
    std::vector<FunctionEntropy> maximizers;
};

/// Every nonempty monomial set for p in {2,3,4}; returns all maximizers.
EnumerationResult enumerate_functions(unsigned p);

/// Table-1 shaped TSV: p, function, max entropy.
std::string enumeration_tsv(const EnumerationResult& result, bool all_maximizers);

}  // namespace nlhb
