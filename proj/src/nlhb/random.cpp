// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/random.hpp"

#include <charconv>
#include <limits>
#include <numeric>

#include "nlhb/error.hpp"

namespace nlhb {

namespace {

using u128 = unsigned __int128;

std::uint64_t parse_u64(std::string_view text) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        fail(ErrorCode::Parse, "not an unsigned integer: '" + std::string(text) + "'");
    }
    return value;
}

Rational reduce128(u128 num, u128 den) {
    u128 a = num;
    u128 b = den;
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    if (num > std::numeric_limits<std::uint64_t>::max() || den > std::numeric_limits<std::uint64_t>::max()) {
        fail(ErrorCode::Range, "rational overflow");
    }
    return Rational(static_cast<std::uint64_t>(num), static_cast<std::uint64_t>(den));
}

}  // namespace

Rational::Rational(std::uint64_t num, std::uint64_t den) {
    require(den != 0, ErrorCode::Argument, "rational with zero denominator");
    std::uint64_t g = std::gcd(num, den);
    if (g == 0) {
        g = 1;
    }
    num_ = num / g;
    den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_u64(text), 1);
    }
    return Rational(parse_u64(text.substr(0, slash)), parse_u64(text.substr(slash + 1)));
}

std::uint64_t Rational::floor_times(std::uint64_t count) const {
    u128 product = static_cast<u128>(num_) * count;
    return static_cast<std::uint64_t>(product / den_);
}

std::string Rational::to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rational operator+(const Rational& a, const Rational& b) {
    return reduce128(static_cast<u128>(a.num_) * b.den_ + static_cast<u128>(b.num_) * a.den_,
                     static_cast<u128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    u128 lhs = static_cast<u128>(a.num_) * b.den_;
    u128 rhs = static_cast<u128>(b.num_) * a.den_;
    require(lhs >= rhs, ErrorCode::Range, "negative rational");
    return reduce128(lhs - rhs, static_cast<u128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return reduce128(static_cast<u128>(a.num_) * b.num_, static_cast<u128>(a.den_) * b.den_);
}

std::uint64_t RandomSource::uniform_below(std::uint64_t bound) {
    require(bound > 0, ErrorCode::Argument, "uniform_below(0)");
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
    for (;;) {
        std::uint64_t draw = next_u64();
        if (draw < limit) {
            return draw % bound;
        }
    }
}

bool RandomSource::bernoulli(const Rational& p) {
    // Compare a 64-bit uniform against floor(p * 2^64); on a tie, the
    // fractional remainder is resolved by the next draw, and so on.
    u128 num = p.num();
    const u128 den = p.den();
    if (num >= den) {
        return true;
    }
    while (num != 0) {
        u128 scaled_hi = (num << 64) / den;
        u128 remainder = (num << 64) % den;
        auto threshold = static_cast<std::uint64_t>(scaled_hi);
        std::uint64_t draw = next_u64();
        if (draw < threshold) {
            return true;
        }
        if (draw > threshold) {
            return false;
        }
        num = remainder;
    }
    return false;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace nlhb
