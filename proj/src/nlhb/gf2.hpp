// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense GF(2) vectors and matrices. Public indices are 1-based (bit 1 is the
// first bit); storage is packed little-endian into 64-bit words.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlhb/random.hpp"

namespace nlhb {

class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t len);

    static BitVector random(std::size_t len, RandomSource& rng);
    /// "1011" -> bits 1..4 = 1,0,1,1.
    static BitVector from_string(std::string_view bits);
    /// All-ones vector of length len.
    static BitVector ones(std::size_t len);

    std::size_t size() const noexcept { return len_; }
    bool empty() const noexcept { return len_ == 0; }

    bool get(std::size_t i) const;
    void set(std::size_t i, bool value);
    void flip(std::size_t i);

    std::size_t weight() const noexcept;
    bool is_zero() const noexcept;

    /// GF(2) inner product; lengths must match.
    bool dot(const BitVector& other) const;

    /// Bits first..first+count-1.
    BitVector slice(std::size_t first, std::size_t count) const;

    BitVector& operator^=(const BitVector& other);
    BitVector& operator&=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend bool operator==(const BitVector&, const BitVector&) = default;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words_mut() noexcept { return words_; }
    /// Re-zero any bits beyond size() after raw word edits.
    void clear_tail() noexcept;

    std::string to_string() const;

    // 0-based raw access for hot loops.
    bool test0(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set0(std::size_t i, bool v) noexcept {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }

  private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix random(std::size_t rows, std::size_t cols, RandomSource& rng);
    static BitMatrix identity(std::size_t k);
    /// Builds a matrix whose j-th column is columns[j-1].
    static BitMatrix from_columns(std::span<const BitVector> columns, std::size_t rows);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);

    const BitVector& row(std::size_t r) const;
    BitVector& row_mut(std::size_t r);
    void set_row(std::size_t r, const BitVector& value);

    BitVector column(std::size_t j) const;
    void set_column(std::size_t j, const BitVector& value);

    BitMatrix transpose() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

/// i.i.d. noise: each bit is 1 with probability exactly epsilon, 0 < epsilon < 1/2.
BitVector bernoulli_vector(std::size_t len, const Rational& epsilon, RandomSource& rng);

/// LPN-definition noise: i.i.d. Bernoulli(epsilon) conditioned on
/// weight <= floor(epsilon * len), by rejection.
BitVector bounded_weight_vector(std::size_t len, const Rational& epsilon, RandomSource& rng);

/// s * A over GF(2): bit j is the dot product of s with column j.
BitVector mat_vec_mul(const BitVector& s, const BitMatrix& a);

std::size_t hamming(const BitVector& a, const BitVector& b);

std::size_t rank(const BitMatrix& a);

enum class SolveStatus { Solved, RankDeficient, Inconsistent };

struct SolveResult {
    SolveStatus status = SolveStatus::RankDeficient;
    BitVector solution;  // valid iff status == Solved
    std::size_t rank = 0;

    bool ok() const noexcept { return status == SolveStatus::Solved; }
};

/// Solves s * A = z for s (A is k x m, m >= k). A must have rank k.
SolveResult gaussian_solve(const BitMatrix& a, const BitVector& z);

const char* to_string(SolveStatus status);

// Hex text form: "bits <len>" or "mat <rows> <cols>" header, then one
// lowercase hex line per row, bit 1 in the most significant nibble position.
std::string to_hex(const BitVector& v);
std::string to_hex(const BitMatrix& m);
std::string hex_digits(const BitVector& v);
BitVector bits_from_hex_digits(std::string_view digits, std::size_t len);
BitVector read_bitvector(std::istream& in);
BitMatrix read_bitmatrix(std::istream& in);
BitVector parse_bitvector(std::string_view text);
BitMatrix parse_bitmatrix(std::string_view text);

}  // namespace nlhb
