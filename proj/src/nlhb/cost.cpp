// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/cost.hpp"

#include <sstream>

#include "nlhb/error.hpp"

namespace nlhb {

void OpCount::add(OpPhase phase) {
    multiplications += phase.multiplications;
    additions += phase.additions;
    breakdown.push_back(std::move(phase));
}

OpCount count_ops(Protocol proto, std::uint64_t k, std::uint64_t D, const NonlinearFunctionSpec* spec) {
    if (k == 0 || D == 0) {
        fail(ErrorCode::Argument, "k and D must be positive");
    }
    const bool nonlinear = is_nonlinear(proto);
    if (nonlinear && spec == nullptr) {
        fail(ErrorCode::Argument, "nonlinear variants need a function spec");
    }
    if (!nonlinear && spec != nullptr && (spec->window() != 0 || !spec->monomials().empty())) {
        fail(ErrorCode::Argument, "linear variants take no function spec");
    }
    const std::uint64_t p = nonlinear ? spec->window() : 0;
    const std::uint64_t n = D + p;
    const int copies = is_plus(proto) ? 2 : 1;

    OpCount out;
    for (int c = 0; c < copies; ++c) {
        const char* suffix = copies == 1 ? "" : (c == 0 ? " (s1 B)" : " (s2 A)");
        out.add({std::string("matrix product") + suffix, k * n, (k - 1) * n});
        if (nonlinear) {
            out.add({std::string("f evaluation") + suffix, D * spec->and_gates(), D * spec->monomials().size()});
        }
    }
    if (copies == 2) {
        out.add({"combine", 0, D});
    }
    return out;
}

std::vector<CostRow> default_cost_rows() {
    const std::string candidate = NonlinearFunctionSpec::candidate().to_string();
    return {{Protocol::HB, 512, 1164, ""}, {Protocol::NLHB, 128, 1164, candidate}, {Protocol::NLHB, 512, 1164, candidate}};
}

std::string cost_table(const std::vector<CostRow>& rows) {
    std::ostringstream out;
    out << "protocol\tk\tD\tn\tfunction\tmultiplications\tadditions\n";
    for (const auto& row : rows) {
        std::optional<NonlinearFunctionSpec> spec;
        if (!row.spec.empty()) {
            spec = NonlinearFunctionSpec::parse(row.spec);
        }
        OpCount c = count_ops(row.proto, row.k, row.D, spec ? &*spec : nullptr);
        out << to_string(row.proto) << '\t' << row.k << '\t' << row.D << '\t' << row.D + (spec ? spec->window() : 0)
            << '\t' << (spec ? spec->to_string() : "-") << '\t' << c.multiplications << '\t' << c.additions << '\n';
    }
    return out.str();
}

}  // namespace nlhb
