// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Executable reductions: the LPN -> UNLD embedding, the hybrid row
// perturbation, the bit-by-bit secret extractor driven by a distinguisher,
// and the distinguishers built from passive and active forgers.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "nlhb/gf2.hpp"
#include "nlhb/nlfunc.hpp"
#include "nlhb/protocols.hpp"
#include "nlhb/random.hpp"

namespace nlhb {

/// One (kn + D)-bit string: a k x n matrix and a D-bit vector.
struct Bitstring {
    BitMatrix a;
    BitVector z;

    friend bool operator==(const Bitstring&, const Bitstring&) = default;
};

using BitstringSource = std::function<Bitstring()>;

/// <A, f(sA) + v> with A uniform and v ~ Bernoulli(eps)^D.
BitstringSource honest_source(const Scheme& scheme, const BitVector& s, RandomSource& rng);
/// Uniform kn + D bits.
BitstringSource uniform_source(const ProtocolParams& params, RandomSource& rng);

// ---------------------------------------------------------------- embedding

struct EmbeddingLayout {
    std::size_t n = 0;
    std::size_t n_prime = 0;
    std::size_t p = 0;
    std::vector<std::size_t> gaps;       // r_1 .. r_{n'-1}
    std::vector<std::size_t> positions;  // 1-based column of g_i in A

    /// sum r_i = n - p - n', every r_i >= p - 1, positions consistent.
    bool valid() const;
};

/// n' <= (n - 1) / p, i.e. n' p <= n - 1 (and n' >= 1).
bool embedding_feasible(std::size_t n, std::size_t n_prime, std::size_t p);

/// r_i = p - 1 with the surplus n - n'p - 1 added to r_1.
EmbeddingLayout default_layout(std::size_t n, std::size_t n_prime, std::size_t p);

struct Embedding {
    BitMatrix a;  // k x n
    BitVector y;  // n - p
    EmbeddingLayout layout;
};

/// Spreads G's columns over a k x n matrix with zero gaps and fills the
/// gap positions of y with Bernoulli(eps) bits. Requires k < n'.
Embedding lpn_to_unld_embed(const BitMatrix& g, const BitVector& z, const NonlinearFunctionSpec& spec,
                            std::size_t n, const Rational& eps, RandomSource& rng);
Embedding lpn_to_unld_embed(const BitMatrix& g, const BitVector& z, const NonlinearFunctionSpec& spec,
                            const EmbeddingLayout& layout, const Rational& eps, RandomSource& rng);

/// Exhaustive UNLD decoder: the s minimizing d(f(sA), y), first in Gray
/// order on ties.
BitVector unld_brute_force(const BitMatrix& a, const BitVector& y, const NonlinearFunctionSpec& spec);

/// Exhaustive LPN decoder on <G, z> with the same tie rule.
BitVector lpn_brute_force(const BitMatrix& g, const BitVector& z);

// ------------------------------------------------------------------ hybrids

/// Adds c to row i (1-based) of the matrix; z unchanged.
Bitstring hybrid_sample(const Bitstring& x, std::size_t i, const BitVector& c);
Bitstring hybrid_sample(const Bitstring& x, std::size_t i, RandomSource& rng);

/// Exact distribution of <A', z> by enumeration of (A, v, c), as integer
/// masses: key = A' rows then z, packed into a word; mass uses eps = a/b
/// so v has weight a^wt (b-a)^(D-wt). Requires k*n + D <= 24.
struct ExactDistribution {
    std::map<std::uint64_t, std::uint64_t> mass;
    std::uint64_t total = 0;
};
ExactDistribution hybrid_distribution(const Scheme& scheme, const BitVector& s, std::size_t i);
/// The honest <A, z> distribution scaled to the same total as the hybrid.
ExactDistribution honest_distribution(const Scheme& scheme, const BitVector& s);
/// Total variation distance as an exact fraction numerator / (2 * total).
struct ExactDistance {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;
    bool is_zero() const { return numerator == 0; }
};
ExactDistance exact_tv(const ExactDistribution& a, const ExactDistribution& b);
/// Uniform over all 2^(kn+D) points with the given total.
ExactDistribution uniform_distribution(const ProtocolParams& params, std::uint64_t total);

// ----------------------------------------------------------- distinguishers

class Distinguisher {
  public:
    virtual ~Distinguisher() = default;
    virtual std::size_t batch_size() const = 0;
    virtual bool decide(std::span<const Bitstring> batch) = 0;
};

/// Outputs 1 iff every string in the batch verifies against s.
class IdealDistinguisher : public Distinguisher {
  public:
    IdealDistinguisher(Scheme scheme, BitVector s, std::size_t q);
    std::size_t batch_size() const override { return q_; }
    bool decide(std::span<const Bitstring> batch) override;

  private:
    Scheme scheme_;
    BitVector s_;
    std::size_t q_;
};

struct AlgorithmXResult {
    BitVector estimate;
    double p = 0;
    std::vector<double> p_i;
    std::size_t N = 0;
    std::uint64_t strings_drawn = 0;
};

inline constexpr double kDefaultXConstant = 4.0;

/// N = ceil(c * delta^-2 * log2 k), at least 1.
std::size_t algorithm_x_rounds(double delta, std::size_t k, double c = kDefaultXConstant);

/// Estimates p on uniform batches and p_i on row-i hybrids of honest
/// batches; s'_i = 0 iff |p_i - p| >= delta/4.
AlgorithmXResult algorithm_x(Distinguisher& y, const BitstringSource& source, const ProtocolParams& params,
                             std::size_t N, double delta, RandomSource& rng);

// ------------------------------------------------------------ passive forger

class PassiveForger {
  public:
    virtual ~PassiveForger() = default;
    /// Start of an attack run (clears any prior state).
    virtual void begin() = 0;
    virtual void observe(const Bitstring& transcript) = 0;
    virtual BitVector respond(const BitMatrix& challenge) = 0;
};

/// Knows s and answers f(sA) without noise.
class PerfectForger : public PassiveForger {
  public:
    PerfectForger(NonlinearFunctionSpec spec, BitVector s) : spec_(std::move(spec)), s_(std::move(s)) {}
    void begin() override {}
    void observe(const Bitstring&) override {}
    BitVector respond(const BitMatrix& challenge) override;

  private:
    NonlinearFunctionSpec spec_;
    BitVector s_;
};

/// Answers uniformly random bits.
class RandomForger : public PassiveForger {
  public:
    RandomForger(std::size_t D, std::uint64_t seed) : D_(D), seed_(seed), rng_(seed) {}
    void begin() override { rng_ = RandomSource(seed_); }
    void observe(const Bitstring&) override {}
    BitVector respond(const BitMatrix&) override { return BitVector::random(D_, rng_); }

  private:
    std::size_t D_;
    std::uint64_t seed_;
    RandomSource rng_;
};

/// eps'' bounds: the open interval (eps' + eps - 2 eps eps', 1/2).
Rational passive_threshold_lower(const ProtocolParams& params);
Rational passive_threshold_default(const ProtocolParams& params);

/// Feeds q strings to the forger, challenges with string q+1's matrix and
/// outputs 1 iff d(z', z_hat) <= floor(eps'' D).
class ForgerDistinguisher : public Distinguisher {
  public:
    ForgerDistinguisher(PassiveForger& forger, std::size_t q, const ProtocolParams& params, Rational eps_dd);
    std::size_t batch_size() const override { return q_ + 1; }
    bool decide(std::span<const Bitstring> batch) override;
    std::size_t threshold() const { return threshold_; }

  private:
    PassiveForger& forger_;
    std::size_t q_;
    ProtocolParams params_;
    std::size_t threshold_;
};

std::unique_ptr<ForgerDistinguisher> forger_to_distinguisher(PassiveForger& forger, std::size_t q,
                                                             const ProtocolParams& params, const Rational& eps_dd);

// ------------------------------------------------------------- active forger

/// Interactive NLHB+ adversary. Query phase: receives the prover's blinding
/// matrix, returns a challenge, receives the response. Challenge phase:
/// sends a blinding matrix, then answers a challenge. clone() is the
/// snapshot used for rewinding.
class ActiveForger {
  public:
    virtual ~ActiveForger() = default;
    virtual BitMatrix query_challenge(const BitMatrix& blinding) = 0;
    virtual void query_response(const BitVector& z) = 0;
    virtual BitMatrix blinding() = 0;
    virtual BitVector respond(const BitMatrix& challenge) = 0;
    virtual std::unique_ptr<ActiveForger> clone() const = 0;
};

/// What a forger factory sees. harness_s2 is filled only when the harness
/// deliberately hands the distinguisher's second secret to the forger.
struct ForgerContext {
    std::uint64_t seed = 0;
    const BitVector* harness_s2 = nullptr;
};

using ActiveForgerFactory = std::function<std::unique_ptr<ActiveForger>(const ForgerContext&)>;

/// Knows s1, learns s2 from single-row probe challenges during the query
/// phase, then answers honestly. Challenge noise is a function of its state
/// and the challenge, so replays after a restore are identical.
std::unique_ptr<ActiveForger> make_learning_forger(const Scheme& scheme, const BitVector& s1, std::uint64_t seed);
/// Honest NLHB+ prover with both secrets fixed up front.
std::unique_ptr<ActiveForger> make_honest_plus_forger(const Scheme& scheme, const BitVector& s1,
                                                      const BitVector& s2, std::uint64_t seed);
/// Random challenges in the query phase, uniform answers afterwards.
std::unique_ptr<ActiveForger> make_random_active_forger(const ProtocolParams& params, std::uint64_t seed);

/// eps_1 bounds: the open interval (2 eps'(1 - eps'), 1/2).
Rational active_threshold_lower(const ProtocolParams& params);
Rational active_threshold_default(const ProtocolParams& params);

/// Rewinding distinguisher: q query rounds driven by the input strings,
/// then two challenges from one snapshot. Coins (s2, A1, A2, forger seed)
/// come from the seed and are redrawn identically on every call.
class RewindingDistinguisher : public Distinguisher {
  public:
    RewindingDistinguisher(ActiveForgerFactory factory, std::size_t q, const Scheme& scheme, Rational eps_1,
                           std::uint64_t coins, bool hand_s2_to_forger = false);
    std::size_t batch_size() const override { return q_; }
    bool decide(std::span<const Bitstring> batch) override;
    std::size_t threshold() const { return threshold_; }
    std::size_t last_distance() const { return last_distance_; }

  private:
    ActiveForgerFactory factory_;
    std::size_t q_;
    Scheme scheme_;
    std::size_t threshold_;
    std::uint64_t coins_;
    bool hand_s2_;
    std::size_t last_distance_ = 0;
};

std::unique_ptr<RewindingDistinguisher> active_forger_to_distinguisher(ActiveForgerFactory factory, std::size_t q,
                                                                       const Scheme& scheme, const Rational& eps_1,
                                                                       std::uint64_t coins,
                                                                       bool hand_s2_to_forger = false);

/// Fraction of `trials` batches from `source` on which y outputs 1.
double acceptance_rate(Distinguisher& y, const BitstringSource& source, std::size_t trials);

}  // namespace nlhb
