// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "nlhb/attacks.hpp"
#include "nlhb/error.hpp"

using namespace nlhb;

namespace {

// Pr[Binomial(r, e) > r/2] summed directly in long double.
long double wrong_majority(unsigned r, long double e) {
    long double s = 0;
    for (unsigned i = (r + 1) / 2; i <= r; ++i) {
        s += std::exp(std::lgamma(r + 1.0L) - std::lgamma(i + 1.0L) - std::lgamma(r - i + 1.0L) + i * std::log(e) +
                      (r - i) * std::log(1 - e));
    }
    return s;
}

std::vector<SessionTranscript> noiseless_transcripts(const Scheme& scheme, const SecretKey& key, RandomSource& rng,
                                                     std::size_t q) {
    std::vector<SessionTranscript> out;
    for (std::size_t i = 0; i < q; ++i) {
        BitMatrix a = draw_challenge(scheme.params, rng);
        BitVector z = expected_response(scheme, key, nullptr, a);
        out.push_back(make_transcript(scheme, std::nullopt, a, z, Verdict{Decision::Accept, 0}));
    }
    return out;
}

// Fraction of fresh challenges on which the candidate's noise-free
// response equals the key's.
double noise_free_agreement(const Scheme& scheme, const SecretKey& key, const BitVector& candidate,
                            RandomSource& rng) {
    int ok = 0;
    for (int t = 0; t < 100; ++t) {
        BitMatrix a = draw_challenge(scheme.params, rng);
        ok += expected_response(scheme, key, nullptr, a) ==
              expected_response(scheme, SecretKey{candidate, std::nullopt}, nullptr, a);
    }
    return ok / 100.0;
}

// Fraction of fresh honest transcripts within u of the candidate's response.
double threshold_rate(const Scheme& scheme, const SecretKey& key, const BitVector& candidate, RandomSource& rng) {
    int ok = 0;
    for (int t = 0; t < 100; ++t) {
        auto tr = run_session(scheme, key, rng, rng);
        ok += hamming(tr.response, expected_response(scheme, SecretKey{candidate, std::nullopt}, nullptr,
                                                     tr.challenge)) <= scheme.params.u;
    }
    return ok / 100.0;
}

}  // namespace

TEST_CASE("default repetitions") {
    auto r = default_majority_reps(Rational(1, 4));
    CHECK(r % 2 == 1);
    // Oracle: the exact wrong-majority tail at r passes and at r-2 fails.
    CHECK(wrong_majority(r, 0.25L) <= std::ldexp(1.0L, -20));
    CHECK(wrong_majority(r - 2, 0.25L) > std::ldexp(1.0L, -20));
}

TEST_CASE("majority vote with a noiseless oracle needs one query per challenge") {
    auto params = ProtocolParams::make(Protocol::HB, 16, 48, 0, Rational(1, 4), Rational(1, 3));
    Scheme scheme = Scheme::linear(params);
    RandomSource rng(1);
    SecretKey key = SecretKey::generate(params, rng);
    ProverOracle exact = [&](const BitMatrix& a) { return mat_vec_mul(key.s1, a); };
    MajorityOptions opt;
    opt.reps = 1;
    auto rep = majority_vote_attack(exact, scheme, rng, opt);
    REQUIRE(rep.success);
    CHECK(*rep.recovered_key == key.s1);
    CHECK(rep.queries == static_cast<std::uint64_t>(rep.find_stat("rounds").value()) + 4);
}

TEST_CASE("majority vote on noisy hb") {
    auto params = ProtocolParams::make(Protocol::HB, 32, 64, 0, Rational(1, 4), Rational(1, 3));
    Scheme scheme = Scheme::linear(params);
    int wins = 0;
    for (int seed = 0; seed < 10; ++seed) {
        RandomSource rng(100 + seed);
        SecretKey key = SecretKey::generate(params, rng);
        auto oracle = honest_prover(scheme, key, rng);
        MajorityOptions opt;
        opt.reps = 101;
        auto rep = majority_vote_attack(oracle, scheme, rng, opt);
        wins += rep.success && *rep.recovered_key == key.s1;
        if (rep.success) {
            CHECK(noise_free_agreement(scheme, key, *rep.recovered_key, rng) >= 0.99);
        }
    }
    CHECK(wins == 10);
}

TEST_CASE("majority vote on nlhb with brute force") {
    auto params = ProtocolParams::make(Protocol::NLHB, 10, 40, 3, Rational(1, 4), Rational(1, 3));
    Scheme scheme = Scheme::make(params, NonlinearFunctionSpec::candidate());
    RandomSource rng(2);
    SecretKey key = SecretKey::generate(params, rng);
    auto oracle = honest_prover(scheme, key, rng);
    auto rep = majority_vote_attack(oracle, scheme, rng);
    REQUIRE(rep.success);
    CHECK(*rep.recovered_key == key.s1);
    CHECK(rep.find_stat("brute_force_evaluations").value() == 1024);
}

TEST_CASE("lf2_merge basics") {
    std::vector<BitVector> cols = {BitVector::from_string("1011"), BitVector::from_string("1011")};
    BitMatrix a = BitMatrix::from_columns(cols, 4);
    auto m = lf2_merge(a, BitVector::from_string("10"), 2);
    REQUIRE(m.reduced.cols() == 1);
    CHECK(m.reduced.column(1).is_zero());
    CHECK(m.merged.get(1) == true);
    CHECK(m.log.front() == std::make_pair(std::size_t{1}, std::size_t{2}));
    CHECK(m.empty_buckets == 3);
    CHECK(m.singleton_buckets == 0);
}

TEST_CASE("lf2_merge conserves the planted relation") {
    RandomSource rng(3);
    for (int t = 0; t < 20; ++t) {
        BitMatrix a = BitMatrix::random(12, 400, rng);
        BitVector s = BitVector::random(12, rng);
        auto m = lf2_merge(a, mat_vec_mul(s, a), 5);
        CHECK(m.merged == mat_vec_mul(s, m.reduced));
        for (std::size_t r = 6; r <= 12; ++r) {
            CHECK(m.reduced.row(r).is_zero());
        }
        for (std::size_t c = 1; c <= m.reduced.cols(); ++c) {
            auto [piv, other] = m.log[c - 1];
            CHECK(m.reduced.column(c) == (a.column(piv) ^ a.column(other)));
        }
    }
}

TEST_CASE("lf2 block recovery on noiseless hb") {
    auto params = ProtocolParams::make(Protocol::HB, 8, 64, 0, Rational(1, 8), Rational(1, 4));
    Scheme scheme = Scheme::linear(params);
    RandomSource rng(4);
    SecretKey key = SecretKey::generate(params, rng);
    auto ts = noiseless_transcripts(scheme, key, rng, 20);
    BitMatrix all(8, 0);
    std::vector<BitVector> cols;
    BitVector bits(64 * 4);
    for (std::size_t t = 0; t < 4; ++t) {
        for (std::size_t j = 1; j <= 64; ++j) {
            cols.push_back(ts[t].challenge.column(j));
            bits.set(t * 64 + j, ts[t].response.get(j));
        }
    }
    auto m = lf2_merge(BitMatrix::from_columns(cols, 8), bits, 4);
    // Exhaustive 2^4 search on the reduced system.
    int matches = 0;
    for (std::uint32_t x = 0; x < 16; ++x) {
        BitVector cand(8);
        for (std::size_t i = 0; i < 4; ++i) {
            cand.set(i + 1, (x >> i) & 1U);
        }
        if (mat_vec_mul(cand, m.reduced) == m.merged) {
            ++matches;
            CHECK(cand.slice(1, 4) == key.s1.slice(1, 4));
        }
    }
    CHECK(matches == 1);

    Lf2Options opt;
    opt.b = 4;
    opt.holdout = 4;
    opt.noise = Rational(0, 1);
    auto rep = lf2_attack(ts, scheme, opt);
    CHECK(rep.success);
    CHECK(*rep.recovered_key == key.s1);
}

TEST_CASE("merged noise rate is 2 eps (1 - eps)") {
    RandomSource rng(5);
    const Rational eps(1, 8);
    const int trials = 10000;
    int ones = 0;
    for (int t = 0; t < trials; ++t) {
        ones += rng.bernoulli(eps) != rng.bernoulli(eps);
    }
    const double p = 2 * 0.125 * 0.875;
    CHECK(std::abs(ones / static_cast<double>(trials) - p) < 4 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("lf2 on hb and nlhb") {
    const Rational eps(1, 8);
    auto hbp = ProtocolParams::make(Protocol::HB, 16, 64, 0, eps, Rational(1, 4));
    Scheme hb = Scheme::linear(hbp);
    RandomSource rng(6);
    SecretKey key = SecretKey::generate(hbp, rng);
    Lf2Options opt;
    opt.b = 8;
    auto ts = transcript_sampler(hb, key, rng, 256 + opt.holdout);
    auto rep = lf2_attack(ts, hb, opt);
    CHECK(rep.success);
    CHECK(*rep.recovered_key == key.s1);
    CHECK(threshold_rate(hb, key, *rep.recovered_key, rng) >= 0.95);

    auto nlp = ProtocolParams::make(Protocol::NLHB, 16, 67, 3, eps, Rational(1, 4));
    Scheme nl = Scheme::make(nlp, NonlinearFunctionSpec::candidate());
    auto nts = transcript_sampler(nl, key, rng, 256 + opt.holdout);
    auto nrep = lf2_attack(nts, nl, opt);
    CHECK_FALSE(nrep.success);
    CHECK(nrep.find_stat("residual_bias").value() < 0.2);

    auto few = transcript_sampler(hb, key, rng, opt.holdout + 1);
    Lf2Options tiny = opt;
    CHECK_THROWS_AS(lf2_attack(std::vector<SessionTranscript>(few.begin(), few.begin() + 17), hb, tiny), Error);
}

TEST_CASE("single-merge error distribution matches the exact one") {
    auto spec = NonlinearFunctionSpec::candidate();
    RandomSource rng(7);
    auto measured = measure_merge_errors(spec, 16, 40, 10000, rng);
    auto exact = merge_error_distribution(spec);
    CHECK(total_variation(measured, 10000, exact.counts, exact.total) < 0.05);
}

TEST_CASE("noise-free selection") {
    const Rational eps(1, 8);
    auto params = ProtocolParams::make(Protocol::HB, 12, 64, 0, eps, Rational(1, 4));
    Scheme scheme = Scheme::linear(params);
    RandomSource rng(8);
    SecretKey key = SecretKey::generate(params, rng);

    auto clean = noiseless_transcripts(scheme, key, rng, 20);
    auto first = noise_free_selection_attack(clean, scheme, rng);
    CHECK(first.success);
    CHECK(first.find_stat("trials").value() == 1);

    double total = 0;
    const int runs = 60;
    for (int r = 0; r < runs; ++r) {
        auto ts = transcript_sampler(scheme, key, rng, 40);
        auto rep = noise_free_selection_attack(ts, scheme, rng);
        REQUIRE(rep.success);
        CHECK(*rep.recovered_key == key.s1);
        total += rep.find_stat("trials").value();
    }
    const double p = std::pow(7.0 / 8.0, 12);
    const double sigma = std::sqrt((1 - p) / (p * p) / runs);
    CHECK(std::abs(total / runs - 1 / p) < 4 * sigma);

    auto nlp = ProtocolParams::make(Protocol::NLHB, 12, 67, 3, eps, Rational(1, 4));
    Scheme nl = Scheme::make(nlp, NonlinearFunctionSpec::candidate());
    auto nts = transcript_sampler(nl, key, rng, 20);
    auto nrep = noise_free_selection_attack(nts, nl, rng);
    CHECK(nrep.find_stat("linear_solve_applicable").value() == 0);
    CHECK(nrep.find_stat("brute_force_evaluations").value() == 4096);
    CHECK(nrep.success);
    CHECK(*nrep.recovered_key == key.s1);
}

TEST_CASE("report tsv") {
    AttackReport r;
    r.attack = "x";
    r.param("k", "4");
    r.stat("bias", 0.5);
    auto tsv = r.tsv();
    CHECK(tsv.find("param.k\t4") != std::string::npos);
    CHECK(tsv.find("stat.bias\t0.5") != std::string::npos);
    CHECK(tsv.find("recovered_key\t-") != std::string::npos);
}
