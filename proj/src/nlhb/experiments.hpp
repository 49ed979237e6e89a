// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded end-to-end drivers shared by the C API, the CLI and the
// acceptance suite. Zero / empty fields take per-mode defaults.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlhb/attacks.hpp"
#include "nlhb/protocols.hpp"

namespace nlhb {

struct SimulateConfig {
    Protocol proto = Protocol::NLHB;
    std::size_t k = 64;
    std::size_t n = 0;  // 0 -> D + p with D = 1164
    std::size_t p = 3;
    Rational eps{1, 4};
    Rational epsp{87, 250};
    std::string spec;  // empty -> candidate for nonlinear variants
    std::size_t sessions = 10;
    std::uint64_t seed = 1;
    /// Responder ignores the key and answers uniform bits.
    bool random_responder = false;
};

struct SimulateResult {
    Scheme scheme;
    SecretKey key;
    std::vector<SessionTranscript> transcripts;
    std::size_t accepted = 0;
};

Scheme make_scheme(Protocol proto, std::size_t k, std::size_t n, std::size_t p, const Rational& eps,
                   const Rational& epsp, const std::string& spec);

SimulateResult simulate(const SimulateConfig& config);

struct AttackConfig {
    std::string attack = "majority";  // majority | lf2 | noisefree
    Protocol proto = Protocol::HB;
    std::size_t k = 16;
    std::size_t n = 0;  // 0 -> 64 + p
    std::size_t p = 3;
    Rational eps{1, 8};
    Rational epsp{1, 4};
    std::string spec;
    std::size_t b = 8;
    std::size_t samples = 0;  // transcripts; 0 -> per-attack default
    unsigned reps = 0;
    std::uint64_t seed = 1;
};

/// Plants a key, produces the attack's input and runs it. Adds stat
/// key_match (1 iff the recovered key equals the planted one).
AttackReport run_attack(const AttackConfig& config);

struct ReduceConfig {
    std::string mode = "embed";  // embed | hybrid | thm2 | thm3 | thm4
    std::string oracle;          // per-mode menu; empty -> the mode's default
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t n_prime = 0;
    std::size_t p = 3;
    std::optional<Rational> eps;
    std::optional<Rational> epsp;
    std::string spec;
    std::size_t trials = 0;
    std::size_t q = 0;
    double delta = 1.0;
    double c = 4.0;
    std::uint64_t seed = 1;
    /// LPN noise conditioned on weight <= floor(eps n') (embed mode).
    bool bounded_noise = false;
};

/// embed: LPN-to-UNLD embedding + brute-force decoder; oracle ignored.
/// hybrid: exhaustive row-hybrid distribution check.
/// thm2: algorithm X; oracle ideal | random.
/// thm3: algorithm X over a passive-forger distinguisher; oracle perfect | random.
/// thm4: rewinding distinguisher; oracle perfect (query-learning) | honest | random.
AttackReport run_reduction(const ReduceConfig& config);

/// Oracle names accepted by a mode.
std::vector<std::string> reduction_oracles(const std::string& mode);

}  // namespace nlhb
