// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlhb/error.hpp"

namespace nlhb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Approximate log2 tails by summing a window of terms around u in the log
// domain. Used only to prefilter; every answer is confirmed exactly.
double log2_add(double a, double b) {
    if (a == kNegInf) {
        return b;
    }
    if (b == kNegInf) {
        return a;
    }
    const double hi = std::max(a, b);
    return hi + std::log2(std::exp2(a - hi) + std::exp2(b - hi));
}

double log2_choose(std::uint64_t n, std::uint64_t k) {
    return (std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
            std::lgamma(static_cast<double>(n - k) + 1)) /
           std::log(2.0);
}

double approx_false_accept(std::uint64_t D, std::uint64_t u) {
    double acc = kNegInf;
    const double drop = std::log2(static_cast<double>(D) + 1) + 80;
    double top = kNegInf;
    for (std::uint64_t i = u + 1; i-- > 0;) {
        double term = log2_choose(D, i) - static_cast<double>(D);
        top = std::max(top, term);
        acc = log2_add(acc, term);
        if (term < top - drop) {
            break;
        }
    }
    return acc;
}

double approx_false_reject(std::uint64_t D, double eps, std::uint64_t u) {
    if (u >= D) {
        return kNegInf;
    }
    const double le = std::log2(eps);
    const double lq = std::log2(1 - eps);
    const double drop = std::log2(static_cast<double>(D) + 1) + 80;
    double acc = kNegInf;
    double top = kNegInf;
    for (std::uint64_t i = u + 1; i <= D; ++i) {
        double term = log2_choose(D, i) + static_cast<double>(i) * le + static_cast<double>(D - i) * lq;
        top = std::max(top, term);
        acc = log2_add(acc, term);
        if (term < top - drop) {
            break;
        }
    }
    return acc;
}

TailProbability finish(BigInt num, BigInt den) {
    TailProbability t;
    t.log2_value = num == 0 ? kNegInf : log2_big(num) - log2_big(den);
    t.numerator = std::move(num);
    t.denominator = std::move(den);
    return t;
}

}  // namespace

double log2_big(const BigInt& x) {
    require(x > 0, ErrorCode::Argument, "log2 of a non-positive integer");
    const std::size_t top = boost::multiprecision::msb(x);
    if (top < 63) {
        return std::log2(static_cast<double>(static_cast<std::uint64_t>(x)));
    }
    const std::size_t shift = top - 63;
    const auto head = static_cast<std::uint64_t>(x >> shift);
    return std::log2(static_cast<double>(head)) + static_cast<double>(shift);
}

bool TailProbability::at_most_pow2(long exponent) const {
    if (exponent >= 0) {
        return numerator <= (denominator << static_cast<unsigned>(exponent));
    }
    return (numerator << static_cast<unsigned>(-exponent)) <= denominator;
}

TailProbability false_accept(std::uint64_t D, std::uint64_t u) {
    if (u > D) {
        fail(ErrorCode::Range, "threshold u=" + std::to_string(u) + " exceeds D=" + std::to_string(D));
    }
    BigInt binom = 1;
    BigInt sum = 0;
    for (std::uint64_t i = 0; i <= u; ++i) {
        sum += binom;
        binom = binom * (D - i) / (i + 1);
    }
    BigInt den = BigInt(1) << static_cast<unsigned>(D);
    return finish(std::move(sum), std::move(den));
}

TailProbability false_reject(std::uint64_t D, const Rational& eps, std::uint64_t u) {
    if (!eps.in_open_half()) {
        fail(ErrorCode::Range, "noise rate " + eps.to_string() + " outside ]0, 1/2[");
    }
    if (u > D) {
        fail(ErrorCode::Range, "threshold u=" + std::to_string(u) + " exceeds D=" + std::to_string(D));
    }
    const BigInt a = eps.num();
    const BigInt b_minus_a = eps.den() - eps.num();
    // Term i: C(D,i) a^i (b-a)^(D-i); walk i upward from u+1.
    BigInt sum = 0;
    if (u < D) {
        BigInt binom = 1;
        for (std::uint64_t i = 0; i < u + 1; ++i) {
            binom = binom * (D - i) / (i + 1);
        }
        BigInt pa = boost::multiprecision::pow(a, static_cast<unsigned>(u + 1));
        std::vector<BigInt> pq(D - u);  // (b-a)^(D-i) for i = u+1..D
        pq.back() = 1;
        for (std::size_t j = pq.size() - 1; j-- > 0;) {
            pq[j] = pq[j + 1] * b_minus_a;
        }
        for (std::uint64_t i = u + 1; i <= D; ++i) {
            sum += binom * pa * pq[i - u - 1];
            binom = binom * (D - i) / (i + 1);
            pa *= a;
        }
    }
    BigInt den = boost::multiprecision::pow(BigInt(eps.den()), static_cast<unsigned>(D));
    return finish(std::move(sum), std::move(den));
}

LengthSearch find_min_length(const Rational& eps, const Rational& epsp, double pfa_log2, double pfr_log2,
                             std::uint64_t cap) {
    if (!eps.in_open_half() || !epsp.in_open_half() || !(eps < epsp)) {
        fail(ErrorCode::Range, "need 0 < eps < eps' < 1/2");
    }
    if (pfa_log2 > 0 || pfr_log2 > 0) {
        fail(ErrorCode::Range, "log2 targets must be <= 0");
    }
    const double margin = 1e-3;
    const double e = eps.to_double();
    LengthSearch out;
    double prev_fa = 0;
    double prev_fr = 0;
    for (std::uint64_t D = 1; D <= cap; ++D) {
        const std::uint64_t u = epsp.floor_times(D);
        const double fa = approx_false_accept(D, u);
        const double fr = approx_false_reject(D, e, u);
        ++out.scanned;
        if (D > 1) {
            if (fa > prev_fa + 1e-9) {
                out.pfa_increases.push_back(D);
            }
            if (fr > prev_fr + 1e-9) {
                out.pfr_increases.push_back(D);
            }
        }
        prev_fa = fa;
        prev_fr = fr;
        if (fa > pfa_log2 + margin || fr > pfr_log2 + margin) {
            continue;
        }
        ++out.exact_checks;
        TailProbability pfa = false_accept(D, u);
        TailProbability pfr = false_reject(D, eps, u);
        if (pfa.log2_value <= pfa_log2 && pfr.log2_value <= pfr_log2) {
            out.D = D;
            out.u = u;
            out.pfa = std::move(pfa);
            out.pfr = std::move(pfr);
            return out;
        }
    }
    fail(ErrorCode::Range, "no response length up to " + std::to_string(cap) + " meets the targets");
}

}  // namespace nlhb
