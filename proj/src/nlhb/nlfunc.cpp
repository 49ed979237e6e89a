// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/nlfunc.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nlhb/error.hpp"

namespace nlhb {

namespace {

constexpr unsigned kMaxWindow = 16;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::uint32_t parse_monomial(std::string_view text, unsigned p) {
    std::uint32_t mask = 0;
    std::size_t pos = 0;
    unsigned factors = 0;
    while (pos < text.size()) {
        if (text[pos] != 'x') {
            fail(ErrorCode::Parse, "monomial '" + std::string(text) + "' must look like x1x2");
        }
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (start == pos) {
            fail(ErrorCode::Parse, "missing variable index in '" + std::string(text) + "'");
        }
        unsigned index = static_cast<unsigned>(std::stoul(std::string(text.substr(start, pos - start))));
        if (index == 0 || index > p) {
            fail(ErrorCode::Parse, "variable x" + std::to_string(index) + " outside window 1.." + std::to_string(p));
        }
        const std::uint32_t bit = std::uint32_t{1} << (index - 1);
        if (mask & bit) {
            fail(ErrorCode::Parse, "repeated variable in monomial '" + std::string(text) + "'");
        }
        mask |= bit;
        ++factors;
    }
    if (factors < 2) {
        fail(ErrorCode::Parse, "monomial '" + std::string(text) + "' has degree < 2");
    }
    return mask;
}

std::string monomial_text(std::uint32_t mask) {
    std::string out;
    for (unsigned o = 1; mask != 0; ++o, mask >>= 1) {
        if (mask & 1U) {
            out += "x" + std::to_string(o);
        }
    }
    return out;
}

}  // namespace

NonlinearFunctionSpec::NonlinearFunctionSpec(unsigned p, std::vector<std::uint32_t> monomials) : p_(p) {
    if (p > kMaxWindow) {
        fail(ErrorCode::Range, "window width " + std::to_string(p) + " exceeds " + std::to_string(kMaxWindow));
    }
    const std::uint32_t full = p == 0 ? 0 : ((std::uint32_t{1} << p) - 1);
    for (auto m : monomials) {
        if (std::popcount(m) < 2) {
            fail(ErrorCode::Argument, "monomials must have degree >= 2");
        }
        if ((m & ~full) != 0) {
            fail(ErrorCode::Argument, "monomial uses a variable outside the window");
        }
    }
    std::sort(monomials.begin(), monomials.end());
    if (std::adjacent_find(monomials.begin(), monomials.end()) != monomials.end()) {
        fail(ErrorCode::Argument, "duplicate monomial");
    }
    monomials_ = std::move(monomials);
}

NonlinearFunctionSpec NonlinearFunctionSpec::parse(std::string_view text) {
    auto semi = text.find(';');
    if (semi == std::string_view::npos) {
        fail(ErrorCode::Parse, "spec must look like 'p=<int>; g=<monomials>'");
    }
    auto p_part = trim(text.substr(0, semi));
    auto g_part = trim(text.substr(semi + 1));
    if (p_part.substr(0, 2) != "p=" || g_part.substr(0, 2) != "g=") {
        fail(ErrorCode::Parse, "spec must look like 'p=<int>; g=<monomials>'");
    }
    auto p_text = trim(p_part.substr(2));
    if (p_text.empty() || !std::all_of(p_text.begin(), p_text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        fail(ErrorCode::Parse, "window width must be a non-negative integer");
    }
    unsigned long p = std::stoul(std::string(p_text));
    if (p > kMaxWindow) {
        fail(ErrorCode::Range, "window width exceeds " + std::to_string(kMaxWindow));
    }
    std::string g;
    for (char c : g_part.substr(2)) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            g += c;
        }
    }
    std::vector<std::uint32_t> monomials;
    if (g != "0") {
        std::size_t start = 0;
        for (;;) {
            auto plus = g.find('+', start);
            monomials.push_back(parse_monomial(std::string_view(g).substr(start, plus - start), static_cast<unsigned>(p)));
            if (plus == std::string::npos) {
                break;
            }
            start = plus + 1;
        }
    }
    return {static_cast<unsigned>(p), std::move(monomials)};
}

NonlinearFunctionSpec NonlinearFunctionSpec::candidate() { return {3, {0b011, 0b110, 0b101}}; }

NonlinearFunctionSpec NonlinearFunctionSpec::zero(unsigned p) { return {p, {}}; }

bool NonlinearFunctionSpec::eval_g(std::uint32_t window_bits) const noexcept {
    bool value = false;
    for (auto m : monomials_) {
        value ^= (window_bits & m) == m;
    }
    return value;
}

std::vector<bool> NonlinearFunctionSpec::truth_table() const {
    std::vector<bool> table(std::size_t{1} << p_);
    for (std::uint32_t w = 0; w < table.size(); ++w) {
        table[w] = eval_g(w);
    }
    return table;
}

std::uint64_t NonlinearFunctionSpec::and_gates() const noexcept {
    std::uint64_t total = 0;
    for (auto m : monomials_) {
        total += static_cast<std::uint64_t>(std::popcount(m)) - 1;
    }
    return total;
}

std::string NonlinearFunctionSpec::monomial_string() const {
    if (monomials_.empty()) {
        return "0";
    }
    std::string out;
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
        if (i != 0) {
            out += '+';
        }
        out += monomial_text(monomials_[i]);
    }
    return out;
}

std::string NonlinearFunctionSpec::to_string() const { return "p=" + std::to_string(p_) + "; g=" + monomial_string(); }

BitVector apply_f(const NonlinearFunctionSpec& spec, const BitVector& x) {
    const std::size_t p = spec.window();
    if (x.size() <= p) {
        fail(ErrorCode::Argument, "apply_f needs n > p (n=" + std::to_string(x.size()) + ", p=" + std::to_string(p) + ")");
    }
    const std::size_t d = x.size() - p;
    BitVector y = x.slice(1, d);
    if (spec.monomials().empty()) {
        return y;
    }
    std::vector<BitVector> shifted;
    shifted.reserve(p);
    for (std::size_t o = 1; o <= p; ++o) {
        shifted.push_back(x.slice(1 + o, d));
    }
    for (auto m : spec.monomials()) {
        BitVector term = BitVector::ones(d);
        for (std::size_t o = 1; o <= p; ++o) {
            if (m & (std::uint32_t{1} << (o - 1))) {
                term &= shifted[o - 1];
            }
        }
        y ^= term;
    }
    return y;
}

UniformityReport balance_check(const NonlinearFunctionSpec& spec, unsigned n) {
    if (n > kMaxBalanceInputBits) {
        fail(ErrorCode::Range, "exhaustive balance check limited to n <= " + std::to_string(kMaxBalanceInputBits));
    }
    if (n <= spec.window()) {
        fail(ErrorCode::Argument, "balance check needs n > p");
    }
    UniformityReport report;
    report.n = n;
    report.output_bits = n - spec.window();
    report.expected_count = std::uint64_t{1} << spec.window();
    std::vector<std::uint64_t> counts(std::size_t{1} << report.output_bits, 0);
    BitVector x(n);
    for (std::uint64_t input = 0; input < (std::uint64_t{1} << n); ++input) {
        x.words_mut()[0] = input;
        BitVector y = apply_f(spec, x);
        ++counts[y.words().empty() ? 0 : y.words()[0]];
    }
    report.min_count = *std::min_element(counts.begin(), counts.end());
    report.max_count = *std::max_element(counts.begin(), counts.end());
    for (auto c : counts) {
        ++report.count_histogram[c];
        if (c != 0) {
            ++report.distinct_outputs;
        }
    }
    report.uniform = report.min_count == report.expected_count && report.max_count == report.expected_count;
    return report;
}

std::string Entropy::to_string() const {
    if (dyadic) {
        // Dyadic values with a short binary expansion print exactly.
        std::ostringstream out;
        out.precision(17);
        out << bits;
        return out.str();
    }
    std::ostringstream out;
    out.precision(15);
    out << bits;
    return out.str();
}

Entropy entropy_of_counts(const std::vector<std::uint64_t>& counts) {
    const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    require(total > 0, ErrorCode::Argument, "entropy of an empty distribution");
    Entropy h;
    double acc = 0.0;
    bool dyadic = std::has_single_bit(total);
    unsigned __int128 weighted_log = 0;
    for (auto c : counts) {
        if (c == 0) {
            continue;
        }
        const double prob = static_cast<double>(c) / static_cast<double>(total);
        acc -= prob * std::log2(prob);
        if (std::has_single_bit(c)) {
            weighted_log += static_cast<unsigned __int128>(c) * static_cast<unsigned>(std::countr_zero(c));
        } else {
            dyadic = false;
        }
    }
    h.bits = acc;
    if (dyadic) {
        const unsigned t = static_cast<unsigned>(std::countr_zero(total));
        unsigned __int128 num = static_cast<unsigned __int128>(t) * total - weighted_log;
        unsigned den_log2 = t;
        while (den_log2 > 0 && (num & 1) == 0) {
            num >>= 1;
            --den_log2;
        }
        h.dyadic = true;
        h.numerator = static_cast<std::uint64_t>(num);
        h.denominator_log2 = den_log2;
        h.bits = static_cast<double>(h.numerator) / std::ldexp(1.0, static_cast<int>(den_log2));
    }
    return h;
}

MergeErrorDistribution merge_error_distribution(const NonlinearFunctionSpec& spec) {
    const unsigned p = spec.window();
    // Local variables: window bits w[0..2p] standing for x_{j-p}..x_{j+p},
    // plus the added column's parity x_k. Output i = j-p+t reads w[t..t+p].
    const unsigned span_bits = 2 * p + 1;
    MergeErrorDistribution dist;
    dist.p = p;
    dist.counts.assign(std::size_t{1} << (p + 1), 0);
    dist.total = std::uint64_t{1} << (span_bits + 1);
    const std::uint32_t window_mask = p == 0 ? 0 : ((std::uint32_t{1} << p) - 1);
    for (std::uint32_t w = 0; w < (std::uint32_t{1} << span_bits); ++w) {
        for (std::uint32_t xk = 0; xk <= 1; ++xk) {
            const std::uint32_t merged = w ^ (xk << p);  // x_j sits at w[p]
            std::uint32_t pattern = 0;
            for (unsigned t = 0; t <= p; ++t) {
                const bool y = ((w >> t) & 1U) ^ spec.eval_g((w >> (t + 1)) & window_mask);
                const bool y_bar = ((merged >> t) & 1U) ^ spec.eval_g((merged >> (t + 1)) & window_mask);
                if (y != y_bar) {
                    pattern |= std::uint32_t{1} << t;
                }
            }
            ++dist.counts[pattern];
        }
    }
    dist.entropy = entropy_of_counts(dist.counts);
    return dist;
}

namespace {

std::vector<std::uint32_t> nonlinear_monomials(unsigned p) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << p); ++m) {
        if (std::popcount(m) >= 2) {
            out.push_back(m);
        }
    }
    return out;
}

int compare_entropy(const Entropy& a, const Entropy& b) {
    if (a.dyadic && b.dyadic) {
        // a.num / 2^da vs b.num / 2^db
        unsigned __int128 lhs = static_cast<unsigned __int128>(a.numerator) << b.denominator_log2;
        unsigned __int128 rhs = static_cast<unsigned __int128>(b.numerator) << a.denominator_log2;
        return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    }
    if (std::abs(a.bits - b.bits) <= 1e-12) {
        return 0;
    }
    return a.bits < b.bits ? -1 : 1;
}

}  // namespace

EnumerationResult enumerate_functions(unsigned p) {
    if (p < 2 || p > 4) {
        fail(ErrorCode::Range, "function enumeration supports p in {2,3,4}");
    }
    const auto pool = nonlinear_monomials(p);
    EnumerationResult result;
    result.p = p;
    for (std::uint32_t subset = 1; subset < (std::uint32_t{1} << pool.size()); ++subset) {
        std::vector<std::uint32_t> chosen;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (subset & (std::uint32_t{1} << i)) {
                chosen.push_back(pool[i]);
            }
        }
        NonlinearFunctionSpec spec(p, std::move(chosen));
        Entropy h = merge_error_distribution(spec).entropy;
        ++result.functions_evaluated;
        int cmp = result.maximizers.empty() ? 1 : compare_entropy(h, result.maximum);
        if (cmp > 0) {
            result.maximum = h;
            result.maximizers.clear();
        }
        if (cmp >= 0) {
            result.maximizers.push_back({std::move(spec), h});
        }
    }
    return result;
}

std::string enumeration_tsv(const EnumerationResult& result, bool all_maximizers) {
    std::ostringstream out;
    out << "p\tfunction\tmax_entropy_bits\tmaximizers\tevaluated\n";
    const std::size_t rows = all_maximizers ? result.maximizers.size() : std::min<std::size_t>(1, result.maximizers.size());
    for (std::size_t i = 0; i < rows; ++i) {
        out << result.p << "\ty_i = x_i + " << result.maximizers[i].spec.monomial_string() << '\t'
            << result.maximum.to_string() << '\t' << result.maximizers.size() << '\t' << result.functions_evaluated
            << '\n';
    }
    return out.str();
}

}  // namespace nlhb
