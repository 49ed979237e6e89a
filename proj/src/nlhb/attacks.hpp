// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Key recovery attacks: majority vote (active), LF2 column merging and
// noise-free position selection (passive).
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlhb/gf2.hpp"
#include "nlhb/nlfunc.hpp"
#include "nlhb/protocols.hpp"

namespace nlhb {

struct AttackReport {
    std::string attack;
    Protocol target = Protocol::HB;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::uint64_t queries = 0;
    bool success = false;
    std::optional<BitVector> recovered_key;
    std::vector<std::pair<std::string, double>> statistics;
    std::string summary;

    void param(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
    void stat(std::string key, double value) { statistics.emplace_back(std::move(key), value); }
    std::optional<double> find_stat(std::string_view key) const;

    /// key<TAB>value lines.
    std::string tsv() const;
};

/// Answers arbitrary challenge matrices with a fresh noisy response.
using ProverOracle = std::function<BitVector(const BitMatrix&)>;

ProverOracle honest_prover(const Scheme& scheme, const SecretKey& key, RandomSource& rng);

/// Smallest odd r with Pr[majority of r Bernoulli(eps) bits is wrong] <= 2^-20.
unsigned default_majority_reps(const Rational& eps);

struct MajorityOptions {
    unsigned reps = 0;        // 0 -> default_majority_reps
    unsigned max_rounds = 8;  // fresh challenges tried before giving up
    std::size_t brute_force_limit = 20;
};

/// Denoises each challenge by majority over reps repeated queries. HB:
/// Gaussian elimination. NLHB: exhaustive search of 2^k keys.
AttackReport majority_vote_attack(const ProverOracle& oracle, const Scheme& scheme, RandomSource& rng,
                                  const MajorityOptions& options = {});

struct MergeResult {
    BitMatrix reduced;  // same row count; rows of the bucket key are zero
    BitVector merged;
    /// (pivot, partner) 1-based input column indices; output column t came
    /// from log[t-1].
    std::vector<std::pair<std::size_t, std::size_t>> log;
    std::size_t buckets_used = 0;
    std::size_t empty_buckets = 0;
    std::size_t singleton_buckets = 0;
};

/// Buckets columns by rows b+1..k and XORs each column with its bucket's
/// first column, so merged columns vanish below row b.
MergeResult lf2_merge(const BitMatrix& a, const BitVector& z, std::size_t b);

/// Same, bucketing on rows first_row..last_row only.
MergeResult lf2_merge_rows(const BitMatrix& a, const BitVector& z, std::size_t first_row, std::size_t last_row);

struct Lf2Options {
    std::size_t b = 8;
    std::size_t holdout = 16;          // trailing transcripts kept for verification
    std::optional<Rational> noise;     // assumed rate for the sample estimate; default eps
};

/// Samples are (column i, z_i) for i <= D of every non-held-out transcript.
AttackReport lf2_attack(const std::vector<SessionTranscript>& transcripts, const Scheme& scheme,
                        const Lf2Options& options = {});

/// Minimum merged samples the b-bit search needs at bias beta.
double lf2_required_samples(std::size_t b, double beta);

struct NoiseFreeOptions {
    std::size_t trials = 1000;
    std::size_t holdout = 8;
    std::size_t brute_force_limit = 16;
};

AttackReport noise_free_selection_attack(const std::vector<SessionTranscript>& transcripts, const Scheme& scheme,
                                         RandomSource& rng, const NoiseFreeOptions& options = {});

/// Candidate check used by the attacks: the total distance over the
/// transcripts is at most aggregate_threshold(params, count).
bool verifies_on(const Scheme& scheme, const BitVector& candidate, const std::vector<SessionTranscript>& ts);

/// max(u * count, floor(count * D * (eps + 1/2) / 2)).
std::size_t aggregate_threshold(const ProtocolParams& params, std::size_t count);

/// Exhaustive key search minimizing total distance of f(cA) to y.
struct BruteForceResult {
    BitVector key;
    std::size_t distance = 0;
    std::uint64_t evaluations = 0;
    bool unique = true;
};
BruteForceResult brute_force_key(const NonlinearFunctionSpec& spec, const std::vector<const BitMatrix*>& challenges,
                                 const std::vector<const BitVector*>& targets, std::size_t k);

/// Single-merge error patterns at planted s: merges a column from outside
/// the window into column j and records (E_{j-p}, ..., E_j) as in
/// merge_error_distribution.
std::vector<std::uint64_t> measure_merge_errors(const NonlinearFunctionSpec& spec, std::size_t k, std::size_t n,
                                                std::size_t samples, RandomSource& rng);

double total_variation(const std::vector<std::uint64_t>& counts_a, std::uint64_t total_a,
                       const std::vector<std::uint64_t>& counts_b, std::uint64_t total_b);

}  // namespace nlhb
