// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace nlhb {

/// Exact non-negative fraction num/den, kept in lowest terms.
class Rational {
  public:
    Rational() = default;
    Rational(std::uint64_t num, std::uint64_t den);

    /// Accepts "a/b" or a bare integer "a".
    static Rational parse(std::string_view text);

    std::uint64_t num() const noexcept { return num_; }
    std::uint64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// floor(this * count), computed without rounding.
    std::uint64_t floor_times(std::uint64_t count) const;

    /// True iff 0 < value < 1/2.
    bool in_open_half() const noexcept { return num_ > 0 && 2 * static_cast<unsigned __int128>(num_) < den_; }

    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<unsigned __int128>(a.num_) * b.den_ < static_cast<unsigned __int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);  // requires a >= b
    friend Rational operator*(const Rational& a, const Rational& b);

  private:
    std::uint64_t num_ = 0;
    std::uint64_t den_ = 1;
};

/// Deterministic 64-bit stream. Single owner; copy it to fork an identical stream.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draws() const noexcept { return draws_; }

    std::uint64_t next_u64() {
        ++draws_;
        return engine_();
    }

    /// Uniform integer in [0, bound); bound > 0.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// One bit equal to 1 with probability exactly p (0 <= p <= 1).
    bool bernoulli(const Rational& p);

  private:
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive per-session or per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace nlhb
