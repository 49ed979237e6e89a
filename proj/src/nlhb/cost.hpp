// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Prover/verifier operation counts (scalar GF(2) multiplications = AND
// gates, additions = XOR gates). Noise addition is not counted.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlhb/nlfunc.hpp"
#include "nlhb/protocols.hpp"

namespace nlhb {

struct OpPhase {
    std::string name;
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;
};

struct OpCount {
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;
    std::vector<OpPhase> breakdown;

    void add(OpPhase phase);
};

/// Counts for one response. n = D for the linear variants and D + p for
/// the nonlinear ones; spec is required (and must match) for the latter.
OpCount count_ops(Protocol proto, std::uint64_t k, std::uint64_t D, const NonlinearFunctionSpec* spec);

struct CostRow {
    Protocol proto;
    std::uint64_t k;
    std::uint64_t D;
    std::string spec;
};

/// The HB k=512 vs NLHB k=128 comparison plus the k=512 NLHB point.
std::vector<CostRow> default_cost_rows();

/// TSV: protocol, k, D, n, function, multiplications, additions.
std::string cost_table(const std::vector<CostRow>& rows);

}  // namespace nlhb
