// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Parallel (single exchange) HB, HB+, NLHB and NLHB+ provers and verifiers.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlhb/gf2.hpp"
#include "nlhb/nlfunc.hpp"
#include "nlhb/random.hpp"

namespace nlhb {

enum class Protocol { HB, HBPlus, NLHB, NLHBPlus };

const char* to_string(Protocol proto);
Protocol parse_protocol(std::string_view text);
inline bool is_plus(Protocol p) { return p == Protocol::HBPlus || p == Protocol::NLHBPlus; }
inline bool is_nonlinear(Protocol p) { return p == Protocol::NLHB || p == Protocol::NLHBPlus; }

struct ProtocolParams {
    Protocol proto = Protocol::HB;
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t D = 0;
    Rational eps;
    Rational epsp;
    std::size_t u = 0;

    /// Validates 0 < eps < eps' < 1/2, sets D and u = floor(eps' * D).
    static ProtocolParams make(Protocol proto, std::size_t k, std::size_t n, std::size_t p, Rational eps,
                               Rational epsp);

    /// "params k=.. n=.. p=.. D=.. eps=.. epsp=.. u=.."
    std::string to_line() const;
    static ProtocolParams parse_line(Protocol proto, std::string_view line);

    friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

/// The public part of a deployment: parameters plus the nonlinear map
/// (the zero map with p = 0 for the linear protocols).
struct Scheme {
    ProtocolParams params;
    NonlinearFunctionSpec spec = NonlinearFunctionSpec::zero(0);

    static Scheme make(const ProtocolParams& params, const NonlinearFunctionSpec& spec);
    static Scheme linear(const ProtocolParams& params) { return make(params, NonlinearFunctionSpec::zero(0)); }
};

struct SecretKey {
    BitVector s1;
    std::optional<BitVector> s2;

    static SecretKey generate(const ProtocolParams& params, RandomSource& rng);
    void check(const ProtocolParams& params) const;

    friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

enum class Decision { Accept, Reject };
const char* to_string(Decision d);

struct Verdict {
    Decision decision = Decision::Reject;
    std::size_t distance = 0;

    bool accepted() const noexcept { return decision == Decision::Accept; }
};

struct SessionTranscript {
    Protocol proto = Protocol::HB;
    ProtocolParams params;
    std::optional<NonlinearFunctionSpec> spec;
    std::optional<BitMatrix> blinding;
    BitMatrix challenge;
    BitVector response;
    Decision decision = Decision::Reject;
    std::size_t distance = 0;

    friend bool operator==(const SessionTranscript&, const SessionTranscript&) = default;
};

// Pure response maps; `noise` is the test hook (pass a zero vector to
// disable noise).
BitVector hb_response(const BitVector& s, const BitMatrix& a, const BitVector& noise);
BitVector nlhb_response(const BitVector& s, const BitMatrix& a, const NonlinearFunctionSpec& spec,
                        const BitVector& noise);
BitVector hbplus_response(const BitVector& s1, const BitVector& s2, const BitMatrix& b, const BitMatrix& a,
                          const BitVector& noise);
BitVector nlhbplus_response(const BitVector& s1, const BitVector& s2, const BitMatrix& b, const BitMatrix& a,
                            const NonlinearFunctionSpec& spec, const BitVector& noise);

// Noise-drawing provers.
BitVector hb_respond(const SecretKey& key, const BitMatrix& a, RandomSource& rng, const ProtocolParams& params);
BitVector nlhb_respond(const SecretKey& key, const BitMatrix& a, const NonlinearFunctionSpec& spec,
                       RandomSource& rng, const ProtocolParams& params);

Verdict hb_verify(const SecretKey& key, const BitMatrix& a, const BitVector& z, const ProtocolParams& params);
Verdict nlhb_verify(const SecretKey& key, const BitMatrix& a, const BitVector& z, const NonlinearFunctionSpec& spec,
                    const ProtocolParams& params);

/// The verifier's expected response for any variant (b ignored if not "+").
BitVector expected_response(const Scheme& scheme, const SecretKey& key, const BitMatrix* b, const BitMatrix& a);

/// Thresholded check for any variant. Throws MalformedResponse on a
/// wrong-length z.
Verdict verify(const Scheme& scheme, const SecretKey& key, const BitMatrix* b, const BitMatrix& a,
               const BitVector& z);

/// Prover response for any variant with noise drawn from rng.
BitVector respond(const Scheme& scheme, const SecretKey& key, const BitMatrix* b, const BitMatrix& a,
                  RandomSource& rng);

BitMatrix draw_blinding(const ProtocolParams& params, RandomSource& rng_prover);
BitMatrix draw_challenge(const ProtocolParams& params, RandomSource& rng_verifier);

/// B (prover) -> A (verifier) -> z (prover) -> decision.
SessionTranscript run_session(const Scheme& scheme, const SecretKey& key, RandomSource& rng_prover,
                              RandomSource& rng_verifier);
SessionTranscript hbplus_session(const SecretKey& key, RandomSource& rng_prover, RandomSource& rng_verifier,
                                 const ProtocolParams& params);
SessionTranscript nlhbplus_session(const SecretKey& key, const NonlinearFunctionSpec& spec,
                                   RandomSource& rng_prover, RandomSource& rng_verifier,
                                   const ProtocolParams& params);

/// q honest sessions, prover and verifier sharing one stream.
std::vector<SessionTranscript> transcript_sampler(const Scheme& scheme, const SecretKey& key, RandomSource& rng,
                                                  std::size_t q);

SessionTranscript make_transcript(const Scheme& scheme, const std::optional<BitMatrix>& b, const BitMatrix& a,
                                  const BitVector& z, const Verdict& verdict);

void write_transcript(std::ostream& out, const SessionTranscript& t);
std::string format_transcript(const SessionTranscript& t);
/// Reads the next record; returns nullopt at end of input.
std::optional<SessionTranscript> read_transcript(std::istream& in);
std::vector<SessionTranscript> read_transcripts(std::istream& in);

/// Structural audit of a record: dimensions and decision/threshold agreement.
void check_transcript(const SessionTranscript& t);

}  // namespace nlhb
