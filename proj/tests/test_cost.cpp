// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "nlhb/cost.hpp"
#include "nlhb/error.hpp"

using namespace nlhb;

TEST_CASE("reference counts") {
    auto spec = NonlinearFunctionSpec::candidate();
    auto hb = count_ops(Protocol::HB, 512, 1164, nullptr);
    CHECK(hb.multiplications == 595968);
    CHECK(hb.additions == 594804);
    auto nl = count_ops(Protocol::NLHB, 128, 1164, &spec);
    CHECK(nl.multiplications == 152868);
    CHECK(nl.additions == 151701);
    auto nl512 = count_ops(Protocol::NLHB, 512, 1164, &spec);
    CHECK(nl512.multiplications == 600996);
    CHECK(nl512.additions == 599829);
}

TEST_CASE("closed forms and breakdown sums") {
    for (std::uint64_t k : {1u, 7u, 64u, 300u}) {
        for (std::uint64_t n : {1u, 10u, 1164u}) {
            auto c = count_ops(Protocol::HB, k, n, nullptr);
            CHECK(c.multiplications == k * n);
            CHECK(c.additions == (k - 1) * n);
            auto z = NonlinearFunctionSpec::zero(0);
            auto nz = count_ops(Protocol::NLHB, k, n, &z);
            CHECK(nz.multiplications == c.multiplications);
            CHECK(nz.additions == c.additions);
            for (Protocol proto : {Protocol::HBPlus, Protocol::NLHBPlus}) {
                auto spec = NonlinearFunctionSpec::parse("p=4; g=x1x2x3+x2x4");
                auto pc = count_ops(proto, k, n, is_nonlinear(proto) ? &spec : nullptr);
                std::uint64_t m = 0;
                std::uint64_t a = 0;
                for (const auto& ph : pc.breakdown) {
                    m += ph.multiplications;
                    a += ph.additions;
                }
                CHECK(m == pc.multiplications);
                CHECK(a == pc.additions);
            }
        }
    }
}

TEST_CASE("generic spec rule") {
    // x1x2x3 costs 2 ANDs, x2x4 costs 1; two monomials give two XORs.
    auto spec = NonlinearFunctionSpec::parse("p=4; g=x1x2x3+x2x4");
    auto c = count_ops(Protocol::NLHB, 10, 100, &spec);
    CHECK(c.multiplications == 10 * 104 + 3 * 100);
    CHECK(c.additions == 9 * 104 + 2 * 100);
    CHECK_THROWS_AS(count_ops(Protocol::NLHB, 10, 100, nullptr), Error);
}

TEST_CASE("cost table") {
    auto tsv = cost_table(default_cost_rows());
    CHECK(tsv.find("hb\t512\t1164\t1164\t-\t595968\t594804") != std::string::npos);
    CHECK(tsv.find("nlhb\t128\t1164\t1167\tp=3; g=x1x2+x1x3+x2x3\t152868\t151701") != std::string::npos);
}
