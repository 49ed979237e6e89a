// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nlhb/error.hpp"
#include "nlhb/protocols.hpp"
#include "nlhb/tails.hpp"

using namespace nlhb;

namespace {

const Rational kQuarter(1, 4);
const Rational kEpsP(348, 1000);

ProtocolParams nlhb_params(std::size_t k, std::size_t D) {
    return ProtocolParams::make(Protocol::NLHB, k, D + 3, 3, kQuarter, kEpsP);
}

}  // namespace

TEST_CASE("params invariants") {
    auto p = nlhb_params(64, 1164);
    CHECK(p.D == 1164);
    CHECK(p.u == 405);
    CHECK(p.epsp == Rational(87, 250));
    CHECK_THROWS_AS(ProtocolParams::make(Protocol::NLHB, 8, 10, 1, kQuarter, kEpsP), Error);
    CHECK_THROWS_AS(ProtocolParams::make(Protocol::HB, 8, 10, 0, kEpsP, kQuarter), Error);
    CHECK_THROWS_AS(ProtocolParams::make(Protocol::HB, 8, 10, 0, kQuarter, Rational(1, 2)), Error);
    CHECK(ProtocolParams::parse_line(Protocol::NLHB, p.to_line()) == p);
}

TEST_CASE("hb respond and verify") {
    RandomSource rng(1);
    auto params = ProtocolParams::make(Protocol::HB, 8, 32, 0, kQuarter, kEpsP);
    SecretKey key = SecretKey::generate(params, rng);
    BitMatrix a = BitMatrix::random(8, 32, rng);
    CHECK(hb_response(key.s1, a, BitVector(32)) == mat_vec_mul(key.s1, a));
    CHECK(hb_response(BitVector(8), a, BitVector(32)).is_zero());

    // Recompute from a copy of the stream.
    RandomSource r1(42);
    RandomSource r2(42);
    BitVector z = hb_respond(key, a, r1, params);
    CHECK(z == (mat_vec_mul(key.s1, a) ^ bernoulli_vector(32, kQuarter, r2)));

    auto ok = hb_verify(key, a, mat_vec_mul(key.s1, a), params);
    CHECK(ok.accepted());
    CHECK(ok.distance == 0);
    auto bad = hb_verify(key, a, mat_vec_mul(key.s1, a) ^ BitVector::ones(32), params);
    CHECK_FALSE(bad.accepted());
    CHECK(bad.distance == 32);
    CHECK_THROWS_AS(hb_verify(key, a, BitVector(31), params), Error);
    try {
        hb_verify(key, a, BitVector(31), params);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedResponse);
    }
}

TEST_CASE("honest hb at the reference parameters accepts") {
    RandomSource rng(2);
    auto params = ProtocolParams::make(Protocol::HB, 16, 1164, 0, kQuarter, kEpsP);
    SecretKey key = SecretKey::generate(params, rng);
    int accepted = 0;
    for (int t = 0; t < 1000; ++t) {
        BitMatrix a = BitMatrix::random(16, 1164, rng);
        accepted += hb_verify(key, a, hb_respond(key, a, rng, params), params).accepted();
    }
    CHECK(accepted >= 999);
}

TEST_CASE("nlhb respond and verify") {
    auto spec = NonlinearFunctionSpec::candidate();
    auto params = ProtocolParams::make(Protocol::NLHB, 8, 11, 3, kQuarter, kEpsP);
    RandomSource rng(3);
    SecretKey key = SecretKey::generate(params, rng);
    BitMatrix a = BitMatrix::random(8, 11, rng);
    auto v = nlhb_verify(key, a, nlhb_response(key.s1, a, spec, BitVector(8)), spec, params);
    CHECK(v.accepted());
    CHECK(v.distance == 0);

    RandomSource r1(9);
    RandomSource r2(9);
    BitVector z = nlhb_respond(key, a, spec, r1, params);
    CHECK(z == (apply_f(spec, mat_vec_mul(key.s1, a)) ^ bernoulli_vector(8, kQuarter, r2)));
    CHECK_THROWS_AS(nlhb_respond(key, a, NonlinearFunctionSpec::parse("p=2; g=x1x2"), r1, params), Error);
}

TEST_CASE("hb is the p=0 case of nlhb") {
    auto params = ProtocolParams::make(Protocol::HB, 12, 70, 0, kQuarter, kEpsP);
    RandomSource rng(4);
    SecretKey key = SecretKey::generate(params, rng);
    for (int t = 0; t < 20; ++t) {
        BitMatrix a = BitMatrix::random(12, 70, rng);
        RandomSource r1(100 + t);
        RandomSource r2(100 + t);
        CHECK(nlhb_respond(key, a, NonlinearFunctionSpec::zero(0), r1, params) == hb_respond(key, a, r2, params));
    }
}

TEST_CASE("nlhb+ with zero blinding equals nlhb") {
    auto spec = NonlinearFunctionSpec::candidate();
    RandomSource rng(5);
    for (int t = 0; t < 20; ++t) {
        BitVector s1 = BitVector::random(10, rng);
        BitVector s2 = BitVector::random(10, rng);
        BitMatrix a = BitMatrix::random(10, 40, rng);
        BitVector noise = bernoulli_vector(37, kQuarter, rng);
        CHECK(nlhbplus_response(s1, s2, BitMatrix(10, 40), a, spec, noise) == nlhb_response(s2, a, spec, noise));
    }
}

TEST_CASE("plus sessions") {
    auto spec = NonlinearFunctionSpec::candidate();
    auto params = ProtocolParams::make(Protocol::NLHBPlus, 32, 1167, 3, kQuarter, kEpsP);
    RandomSource rng(6);
    SecretKey key = SecretKey::generate(params, rng);
    int accepted = 0;
    for (int t = 0; t < 1000; ++t) {
        accepted += nlhbplus_session(key, spec, rng, rng, params).decision == Decision::Accept;
    }
    CHECK(accepted >= 999);

    SecretKey wrong = key;
    wrong.s1 = BitVector::random(32, rng);
    int wrong_accepts = 0;
    for (int t = 0; t < 50; ++t) {
        auto tr = nlhbplus_session(key, spec, rng, rng, params);
        auto v = verify(Scheme::make(params, spec), wrong, &*tr.blinding, tr.challenge, tr.response);
        wrong_accepts += v.accepted();
        CHECK(std::abs(static_cast<double>(v.distance) - 582.0) < 100.0);
    }
    CHECK(wrong_accepts == 0);

    SecretKey missing{key.s1, std::nullopt};
    CHECK_THROWS_AS(nlhbplus_session(missing, spec, rng, rng, params), Error);

    auto hbp = ProtocolParams::make(Protocol::HBPlus, 16, 256, 0, Rational(1, 8), Rational(1, 4));
    SecretKey hk = SecretKey::generate(hbp, rng);
    RandomSource rp(1);
    RandomSource rv(2);
    auto tr = hbplus_session(hk, rp, rv, hbp);
    CHECK(tr.blinding.has_value());
    RandomSource rp2(1);
    RandomSource rv2(2);
    BitMatrix b = BitMatrix::random(16, 256, rp2);
    BitMatrix a = BitMatrix::random(16, 256, rv2);
    BitVector v = bernoulli_vector(256, Rational(1, 8), rp2);
    CHECK(*tr.blinding == b);
    CHECK(tr.challenge == a);
    CHECK(tr.response == (mat_vec_mul(hk.s1, b) ^ mat_vec_mul(*hk.s2, a) ^ v));
}

TEST_CASE("session noise is zero when forced") {
    auto params = ProtocolParams::make(Protocol::HBPlus, 8, 30, 0, kQuarter, kEpsP);
    RandomSource rng(7);
    SecretKey key = SecretKey::generate(params, rng);
    BitMatrix b = BitMatrix::random(8, 30, rng);
    BitMatrix a = BitMatrix::random(8, 30, rng);
    BitVector z = hbplus_response(key.s1, *key.s2, b, a, BitVector(30));
    auto v = verify(Scheme::linear(params), key, &b, a, z);
    CHECK(v.accepted());
    CHECK(v.distance == 0);
}

TEST_CASE("completeness: honest distance has mean eps*D") {
    auto spec = NonlinearFunctionSpec::candidate();
    auto params = nlhb_params(16, 1164);
    RandomSource rng(8);
    SecretKey key = SecretKey::generate(params, rng);
    auto ts = transcript_sampler(Scheme::make(params, spec), key, rng, 1000);
    double total = 0;
    for (const auto& t : ts) {
        total += static_cast<double>(t.distance);
    }
    const double mean = total / 1000.0;
    const double sigma = std::sqrt(1164 * 0.25 * 0.75 / 1000.0);
    CHECK(std::abs(mean - 291.0) < 4 * sigma);
}

TEST_CASE("per-bit response bias") {
    auto spec = NonlinearFunctionSpec::candidate();
    auto params = ProtocolParams::make(Protocol::NLHB, 8, 67, 3, kQuarter, kEpsP);
    RandomSource rng(9);
    SecretKey key = SecretKey::generate(params, rng);
    auto ts = transcript_sampler(Scheme::make(params, spec), key, rng, 1000);
    std::vector<int> flips(64, 0);
    for (const auto& t : ts) {
        BitVector e = t.response ^ apply_f(spec, mat_vec_mul(key.s1, t.challenge));
        for (std::size_t i = 1; i <= 64; ++i) {
            flips[i - 1] += e.get(i);
        }
    }
    const double sigma = std::sqrt(0.25 * 0.75 / 1000.0);
    for (int f : flips) {
        CHECK(std::abs(f / 1000.0 - 0.25) < 4.5 * sigma);
    }
}

TEST_CASE("soundness floor matches the exact tail") {
    // Small D so the acceptance rate is measurable: D=16, u=5.
    auto params = ProtocolParams::make(Protocol::HB, 8, 16, 0, Rational(1, 8), Rational(1, 3));
    CHECK(params.u == 5);
    RandomSource rng(10);
    SecretKey key = SecretKey::generate(params, rng);
    const int trials = 20000;
    int accepted = 0;
    for (int t = 0; t < trials; ++t) {
        BitMatrix a = BitMatrix::random(8, 16, rng);
        accepted += hb_verify(key, a, BitVector::random(16, rng), params).accepted();
    }
    const double p = std::exp2(false_accept(16, 5).log2_value);
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(static_cast<double>(accepted) / trials - p) < 4 * sigma);
}

TEST_CASE("transcript format round trip and determinism") {
    auto spec = NonlinearFunctionSpec::candidate();
    for (Protocol proto : {Protocol::HB, Protocol::HBPlus, Protocol::NLHB, Protocol::NLHBPlus}) {
        const std::size_t p = is_nonlinear(proto) ? 3 : 0;
        auto params = ProtocolParams::make(proto, 10, 50, p, kQuarter, kEpsP);
        Scheme scheme = is_nonlinear(proto) ? Scheme::make(params, spec) : Scheme::linear(params);
        RandomSource k1(11);
        SecretKey key = SecretKey::generate(params, k1);
        RandomSource r1(12);
        RandomSource r2(12);
        auto t1 = transcript_sampler(scheme, key, r1, 5);
        auto t2 = transcript_sampler(scheme, key, r2, 5);
        std::ostringstream o1;
        std::ostringstream o2;
        for (std::size_t i = 0; i < 5; ++i) {
            write_transcript(o1, t1[i]);
            write_transcript(o2, t2[i]);
        }
        CHECK(o1.str() == o2.str());
        std::istringstream in(o1.str());
        auto back = read_transcripts(in);
        REQUIRE(back.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(back[i] == t1[i]);
        }
    }
    RandomSource r(0);
    CHECK(transcript_sampler(Scheme::linear(ProtocolParams::make(Protocol::HB, 4, 8, 0, kQuarter, kEpsP)),
                             SecretKey{BitVector(4), std::nullopt}, r, 0)
              .empty());
}

TEST_CASE("transcript audit rejects inconsistent records") {
    auto params = ProtocolParams::make(Protocol::HB, 4, 8, 0, kQuarter, kEpsP);
    RandomSource rng(13);
    SecretKey key = SecretKey::generate(params, rng);
    auto t = run_session(Scheme::linear(params), key, rng, rng);
    t.decision = t.decision == Decision::Accept ? Decision::Reject : Decision::Accept;
    CHECK_THROWS_AS(check_transcript(t), Error);
    std::istringstream truncated("proto=hb\nparams k=4 n=8 p=0 D=8 eps=1/4 epsp=87/250 u=2\nmat 4 8\n00\n");
    CHECK_THROWS_AS(read_transcript(truncated), Error);
}
