// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/gf2.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <sstream>
#include <utility>

#include "nlhb/error.hpp"

namespace nlhb {

namespace {

constexpr std::size_t word_count(std::size_t len) { return (len + 63) / 64; }

void check_index(std::size_t i, std::size_t len) {
    if (i == 0 || i > len) {
        fail(ErrorCode::Dimension, "bit index " + std::to_string(i) + " outside 1.." + std::to_string(len));
    }
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
        return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'F') {
        return c - 'A' + 10;
    }
    return -1;
}

std::string next_nonempty_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            return line;
        }
    }
    fail(ErrorCode::Parse, "unexpected end of input");
}

std::string next_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorCode::Parse, "unexpected end of input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

}  // namespace

BitVector::BitVector(std::size_t len) : len_(len), words_(word_count(len), 0) {}

BitVector BitVector::random(std::size_t len, RandomSource& rng) {
    BitVector v(len);
    for (auto& w : v.words_) {
        w = rng.next_u64();
    }
    v.clear_tail();
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set0(i, true);
        } else if (bits[i] != '0') {
            fail(ErrorCode::Parse, "bit string may only contain 0 and 1");
        }
    }
    return v;
}

BitVector BitVector::ones(std::size_t len) {
    BitVector v(len);
    std::fill(v.words_.begin(), v.words_.end(), ~std::uint64_t{0});
    v.clear_tail();
    return v;
}

bool BitVector::get(std::size_t i) const {
    check_index(i, len_);
    return test0(i - 1);
}

void BitVector::set(std::size_t i, bool value) {
    check_index(i, len_);
    set0(i - 1, value);
}

void BitVector::flip(std::size_t i) {
    check_index(i, len_);
    words_[(i - 1) >> 6] ^= std::uint64_t{1} << ((i - 1) & 63);
}

std::size_t BitVector::weight() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

bool BitVector::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool BitVector::dot(const BitVector& other) const {
    require(len_ == other.len_, ErrorCode::Dimension, "dot product of vectors with different lengths");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        acc ^= words_[w] & other.words_[w];
    }
    return std::popcount(acc) & 1;
}

BitVector BitVector::slice(std::size_t first, std::size_t count) const {
    if (count == 0) {
        return BitVector(0);
    }
    require(first >= 1 && first + count - 1 <= len_, ErrorCode::Dimension, "slice outside vector");
    BitVector out(count);
    const std::size_t offset = first - 1;
    const std::size_t shift = offset & 63;
    const std::size_t base = offset >> 6;
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
        std::uint64_t lo = base + w < words_.size() ? words_[base + w] : 0;
        std::uint64_t value = lo >> shift;
        if (shift != 0 && base + w + 1 < words_.size()) {
            value |= words_[base + w + 1] << (64 - shift);
        }
        out.words_[w] = value;
    }
    out.clear_tail();
    return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    require(len_ == other.len_, ErrorCode::Dimension, "xor of vectors with different lengths");
    for (std::size_t w = 0; w < words_.size(); ++w) {
        words_[w] ^= other.words_[w];
    }
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
    require(len_ == other.len_, ErrorCode::Dimension, "and of vectors with different lengths");
    for (std::size_t w = 0; w < words_.size(); ++w) {
        words_[w] &= other.words_[w];
    }
    return *this;
}

void BitVector::clear_tail() noexcept {
    if (len_ % 64 != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << (len_ % 64)) - 1;
    }
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) {
        if (test0(i)) {
            s[i] = '1';
        }
    }
    return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::random(std::size_t rows, std::size_t cols, RandomSource& rng) {
    BitMatrix m(rows, cols);
    for (auto& r : m.rows_) {
        r = BitVector::random(cols, rng);
    }
    return m;
}

BitMatrix BitMatrix::identity(std::size_t k) {
    BitMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        m.rows_[i].set0(i, true);
    }
    return m;
}

BitMatrix BitMatrix::from_columns(std::span<const BitVector> columns, std::size_t rows) {
    BitMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        require(columns[j].size() == rows, ErrorCode::Dimension, "column length does not match row count");
        for (std::size_t r = 0; r < rows; ++r) {
            if (columns[j].test0(r)) {
                m.rows_[r].set0(j, true);
            }
        }
    }
    return m;
}

bool BitMatrix::get(std::size_t r, std::size_t c) const { return row(r).get(c); }

void BitMatrix::set(std::size_t r, std::size_t c, bool value) { row_mut(r).set(c, value); }

const BitVector& BitMatrix::row(std::size_t r) const {
    check_index(r, rows_.size());
    return rows_[r - 1];
}

BitVector& BitMatrix::row_mut(std::size_t r) {
    check_index(r, rows_.size());
    return rows_[r - 1];
}

void BitMatrix::set_row(std::size_t r, const BitVector& value) {
    require(value.size() == cols_, ErrorCode::Dimension, "row length does not match column count");
    row_mut(r) = value;
}

BitVector BitMatrix::column(std::size_t j) const {
    check_index(j, cols_);
    BitVector c(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        c.set0(r, rows_[r].test0(j - 1));
    }
    return c;
}

void BitMatrix::set_column(std::size_t j, const BitVector& value) {
    check_index(j, cols_);
    require(value.size() == rows_.size(), ErrorCode::Dimension, "column length does not match row count");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        rows_[r].set0(j - 1, value.test0(r));
    }
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if (rows_[r].test0(c)) {
                t.rows_[c].set0(r, true);
            }
        }
    }
    return t;
}

BitVector bernoulli_vector(std::size_t len, const Rational& epsilon, RandomSource& rng) {
    if (!epsilon.in_open_half()) {
        fail(ErrorCode::Range, "noise rate " + epsilon.to_string() + " outside ]0, 1/2[");
    }
    BitVector v(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (rng.bernoulli(epsilon)) {
            v.set0(i, true);
        }
    }
    return v;
}

BitVector bounded_weight_vector(std::size_t len, const Rational& epsilon, RandomSource& rng) {
    const std::size_t bound = epsilon.floor_times(len);
    for (;;) {
        BitVector v = bernoulli_vector(len, epsilon, rng);
        if (v.weight() <= bound) {
            return v;
        }
    }
}

BitVector mat_vec_mul(const BitVector& s, const BitMatrix& a) {
    if (s.size() != a.rows()) {
        fail(ErrorCode::Dimension, "vector length " + std::to_string(s.size()) + " does not match matrix rows " +
                                       std::to_string(a.rows()));
    }
    BitVector out(a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (s.test0(r)) {
            out ^= a.row(r + 1);
        }
    }
    return out;
}

std::size_t hamming(const BitVector& a, const BitVector& b) {
    require(a.size() == b.size(), ErrorCode::Dimension, "hamming distance of vectors with different lengths");
    std::size_t total = 0;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t w = 0; w < wa.size(); ++w) {
        total += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
    }
    return total;
}

namespace {

// Row-reduces rows in place over the first `cols` columns with a
// first-nonzero pivot rule. Returns pivot rows used.
std::size_t reduce_rows(std::vector<BitVector>& rows, std::size_t cols) {
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
        std::size_t found = pivot_row;
        while (found < rows.size() && !rows[found].test0(c)) {
            ++found;
        }
        if (found == rows.size()) {
            continue;
        }
        std::swap(rows[pivot_row], rows[found]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != pivot_row && rows[r].test0(c)) {
                rows[r] ^= rows[pivot_row];
            }
        }
        ++pivot_row;
    }
    return pivot_row;
}

}  // namespace

std::size_t rank(const BitMatrix& a) {
    std::vector<BitVector> rows;
    rows.reserve(a.rows());
    for (std::size_t r = 1; r <= a.rows(); ++r) {
        rows.push_back(a.row(r));
    }
    return reduce_rows(rows, a.cols());
}

SolveResult gaussian_solve(const BitMatrix& a, const BitVector& z) {
    const std::size_t k = a.rows();
    const std::size_t m = a.cols();
    require(z.size() == m, ErrorCode::Dimension, "right-hand side length does not match matrix columns");
    require(m >= k, ErrorCode::Dimension, "gaussian_solve needs at least as many equations as unknowns");

    // One equation per column j: sum_i s_i A[i][j] = z_j, with z_j appended.
    std::vector<BitVector> eq(m, BitVector(k + 1));
    for (std::size_t r = 0; r < k; ++r) {
        const BitVector& row = a.row(r + 1);
        for (std::size_t j = 0; j < m; ++j) {
            if (row.test0(j)) {
                eq[j].set0(r, true);
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        eq[j].set0(k, z.test0(j));
    }

    SolveResult result;
    std::vector<std::size_t> pivot_col;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < k && pivot_row < m; ++c) {
        std::size_t found = pivot_row;
        while (found < m && !eq[found].test0(c)) {
            ++found;
        }
        if (found == m) {
            continue;
        }
        std::swap(eq[pivot_row], eq[found]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r != pivot_row && eq[r].test0(c)) {
                eq[r] ^= eq[pivot_row];
            }
        }
        pivot_col.push_back(c);
        ++pivot_row;
    }
    result.rank = pivot_row;
    for (std::size_t r = pivot_row; r < m; ++r) {
        if (eq[r].test0(k)) {
            result.status = SolveStatus::Inconsistent;
            return result;
        }
    }
    if (pivot_row < k) {
        result.status = SolveStatus::RankDeficient;
        return result;
    }
    result.solution = BitVector(k);
    for (std::size_t r = 0; r < k; ++r) {
        result.solution.set0(pivot_col[r], eq[r].test0(k));
    }
    result.status = SolveStatus::Solved;
    return result;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Solved:
            return "solved";
        case SolveStatus::RankDeficient:
            return "rank-deficient";
        case SolveStatus::Inconsistent:
            return "inconsistent";
    }
    return "unknown";
}

std::string hex_digits(const BitVector& v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out((v.size() + 3) / 4, '0');
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.test0(i)) {
            auto nibble = static_cast<unsigned>(hex_value(out[i / 4]));
            nibble |= 8U >> (i % 4);
            out[i / 4] = digits[nibble];
        }
    }
    return out;
}

BitVector bits_from_hex_digits(std::string_view text, std::size_t len) {
    if (text.size() != (len + 3) / 4) {
        fail(ErrorCode::Parse, "expected " + std::to_string((len + 3) / 4) + " hex digits, got " +
                                   std::to_string(text.size()));
    }
    BitVector v(len);
    for (std::size_t d = 0; d < text.size(); ++d) {
        int nibble = hex_value(text[d]);
        if (nibble < 0) {
            fail(ErrorCode::Parse, "invalid hex digit");
        }
        for (std::size_t b = 0; b < 4; ++b) {
            if (nibble & (8 >> b)) {
                std::size_t i = d * 4 + b;
                if (i >= len) {
                    fail(ErrorCode::Parse, "nonzero padding bits in hex row");
                }
                v.set0(i, true);
            }
        }
    }
    return v;
}

std::string to_hex(const BitVector& v) { return "bits " + std::to_string(v.size()) + "\n" + hex_digits(v) + "\n"; }

std::string to_hex(const BitMatrix& m) {
    std::string out = "mat " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (std::size_t r = 1; r <= m.rows(); ++r) {
        out += hex_digits(m.row(r));
        out += '\n';
    }
    return out;
}

BitVector read_bitvector(std::istream& in) {
    std::istringstream header(next_nonempty_line(in));
    std::string tag;
    std::size_t len = 0;
    if (!(header >> tag >> len) || tag != "bits") {
        fail(ErrorCode::Parse, "expected 'bits <len>' header");
    }
    return bits_from_hex_digits(next_line(in), len);
}

BitMatrix read_bitmatrix(std::istream& in) {
    std::istringstream header(next_nonempty_line(in));
    std::string tag;
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(header >> tag >> rows >> cols) || tag != "mat") {
        fail(ErrorCode::Parse, "expected 'mat <rows> <cols>' header");
    }
    BitMatrix m(rows, cols);
    for (std::size_t r = 1; r <= rows; ++r) {
        m.set_row(r, bits_from_hex_digits(next_line(in), cols));
    }
    return m;
}

BitVector parse_bitvector(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_bitvector(in);
}

BitMatrix parse_bitmatrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_bitmatrix(in);
}

}  // namespace nlhb
