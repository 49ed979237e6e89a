// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/attacks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "nlhb/error.hpp"
#include "nlhb/tails.hpp"

namespace nlhb {

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

std::uint64_t column_word(const BitMatrix& a, std::size_t j) {
    std::uint64_t w = 0;
    for (std::size_t r = 1; r <= a.rows(); ++r) {
        if (a.row(r).test0(j - 1)) {
            w |= std::uint64_t{1} << (r - 1);
        }
    }
    return w;
}

BitVector word_to_key(std::uint64_t w, std::size_t k) {
    BitVector v(k);
    if (k > 0) {
        v.words_mut()[0] = w;
        v.clear_tail();
    }
    return v;
}

bool parity(std::uint64_t x) { return std::popcount(x) & 1; }

struct Samples {
    std::vector<std::uint64_t> cols;
    std::vector<std::uint8_t> bits;
};

// bucket key = bits [lo, hi) of each column (0-based)
struct WordMerge {
    Samples out;
    std::vector<std::pair<std::size_t, std::size_t>> log;
    std::size_t buckets_used = 0;
    std::size_t singletons = 0;
};

WordMerge merge_words(const Samples& in, unsigned lo, unsigned hi) {
    const std::uint64_t mask = hi - lo >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (hi - lo)) - 1);
    std::unordered_map<std::uint64_t, std::size_t> first;
    std::unordered_map<std::uint64_t, std::size_t> sizes;
    WordMerge m;
    for (std::size_t idx = 0; idx < in.cols.size(); ++idx) {
        const std::uint64_t key = (in.cols[idx] >> lo) & mask;
        auto [it, inserted] = first.try_emplace(key, idx);
        ++sizes[key];
        if (inserted) {
            continue;
        }
        const std::size_t piv = it->second;
        m.out.cols.push_back(in.cols[idx] ^ in.cols[piv]);
        m.out.bits.push_back(in.bits[idx] ^ in.bits[piv]);
        m.log.emplace_back(piv + 1, idx + 1);
    }
    m.buckets_used = first.size();
    for (const auto& [key, count] : sizes) {
        m.singletons += count == 1;
    }
    return m;
}

struct BlockSearch {
    std::uint64_t best = 0;
    double best_bias = 0;
    double runner_up_bias = -1;
};

BlockSearch search_block(const Samples& s, unsigned lo, unsigned width) {
    const std::uint64_t patterns = std::uint64_t{1} << width;
    std::vector<std::int64_t> balance(patterns, 0);  // #(bit==0) - #(bit==1) per pattern
    for (std::size_t i = 0; i < s.cols.size(); ++i) {
        const std::uint64_t c = (s.cols[i] >> lo) & (patterns - 1);
        balance[c] += s.bits[i] ? -1 : 1;
    }
    BlockSearch out;
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::int64_t second = std::numeric_limits<std::int64_t>::min();
    for (std::uint64_t x = 0; x < patterns; ++x) {
        std::int64_t corr = 0;
        for (std::uint64_t c = 0; c < patterns; ++c) {
            corr += parity(x & c) ? -balance[c] : balance[c];
        }
        if (corr > best) {
            second = best;
            best = corr;
            out.best = x;
        } else if (corr > second) {
            second = corr;
        }
    }
    const double m = static_cast<double>(std::max<std::size_t>(1, s.cols.size()));
    out.best_bias = static_cast<double>(best) / m;
    out.runner_up_bias = patterns > 1 ? static_cast<double>(second) / m : -1;
    return out;
}

// Incremental GF(2) basis over k <= 64 bit columns.
class WordBasis {
  public:
    bool insert(std::uint64_t v) {
        for (auto b : basis_) {
            v = std::min(v, v ^ b);
        }
        if (v == 0) {
            return false;
        }
        basis_.push_back(v);
        std::sort(basis_.rbegin(), basis_.rend());
        return true;
    }
    std::size_t size() const { return basis_.size(); }

  private:
    std::vector<std::uint64_t> basis_;
};

void require_key_width(std::size_t k, std::size_t limit, const char* what) {
    if (k == 0 || k > limit) {
        fail(ErrorCode::Unsupported, std::string(what) + " supports 1 <= k <= " + std::to_string(limit));
    }
}

}  // namespace

std::optional<double> AttackReport::find_stat(std::string_view key) const {
    for (const auto& [k, v] : statistics) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::string AttackReport::tsv() const {
    std::ostringstream out;
    out << "attack\t" << attack << '\n' << "target\t" << to_string(target) << '\n';
    for (const auto& [k, v] : parameters) {
        out << "param." << k << '\t' << v << '\n';
    }
    out << "queries\t" << queries << '\n' << "success\t" << (success ? 1 : 0) << '\n';
    out << "recovered_key\t" << (recovered_key ? hex_digits(*recovered_key) : "-") << '\n';
    for (const auto& [k, v] : statistics) {
        out << "stat." << k << '\t' << fmt(v) << '\n';
    }
    return out.str();
}

ProverOracle honest_prover(const Scheme& scheme, const SecretKey& key, RandomSource& rng) {
    if (is_plus(scheme.params.proto)) {
        fail(ErrorCode::Unsupported, "prover oracle covers the single-secret variants");
    }
    return [scheme, key, &rng](const BitMatrix& a) { return respond(scheme, key, nullptr, a, rng); };
}

unsigned default_majority_reps(const Rational& eps) {
    for (unsigned r = 1; r < 100001; r += 2) {
        if (false_reject(r, eps, (r - 1) / 2).at_most_pow2(-20)) {
            return r;
        }
    }
    fail(ErrorCode::Range, "no repetition count reaches 2^-20");
}

BruteForceResult brute_force_key(const NonlinearFunctionSpec& spec, const std::vector<const BitMatrix*>& challenges,
                                 const std::vector<const BitVector*>& targets, std::size_t k) {
    require(challenges.size() == targets.size() && !challenges.empty(), ErrorCode::Argument,
            "brute force needs matching challenge/target lists");
    require_key_width(k, 30, "exhaustive key search");
    std::vector<BitVector> x;
    for (const auto* a : challenges) {
        require(a->rows() == k, ErrorCode::Dimension, "challenge rows must equal k");
        x.emplace_back(a->cols());
    }
    BruteForceResult out;
    out.distance = std::numeric_limits<std::size_t>::max();
    std::uint64_t code = 0;
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t step = 0; step < total; ++step) {
        if (step != 0) {
            const unsigned bit = static_cast<unsigned>(std::countr_zero(step));
            code ^= std::uint64_t{1} << bit;
            for (std::size_t t = 0; t < x.size(); ++t) {
                x[t] ^= challenges[t]->row(bit + 1);
            }
        }
        std::size_t d = 0;
        for (std::size_t t = 0; t < x.size() && d <= out.distance; ++t) {
            d += hamming(apply_f(spec, x[t]), *targets[t]);
        }
        ++out.evaluations;
        if (d < out.distance) {
            out.distance = d;
            out.key = word_to_key(code, k);
            out.unique = true;
        } else if (d == out.distance) {
            out.unique = false;
        }
    }
    return out;
}

AttackReport majority_vote_attack(const ProverOracle& oracle, const Scheme& scheme, RandomSource& rng,
                                  const MajorityOptions& options) {
    const ProtocolParams& params = scheme.params;
    if (is_plus(params.proto)) {
        fail(ErrorCode::Unsupported, "majority vote targets hb or nlhb");
    }
    const unsigned reps = options.reps == 0 ? default_majority_reps(params.eps) : options.reps;
    if (reps % 2 == 0) {
        fail(ErrorCode::Argument, "majority vote needs an odd repetition count");
    }
    AttackReport report;
    report.attack = "majority";
    report.target = params.proto;
    report.param("k", std::to_string(params.k));
    report.param("n", std::to_string(params.n));
    report.param("eps", params.eps.to_string());
    report.param("reps", std::to_string(reps));

    auto denoise = [&](const BitMatrix& a) {
        std::vector<unsigned> ones(params.D, 0);
        for (unsigned r = 0; r < reps; ++r) {
            BitVector z = oracle(a);
            ++report.queries;
            require(z.size() == params.D, ErrorCode::MalformedResponse, "oracle response has the wrong length");
            for (std::size_t i = 0; i < params.D; ++i) {
                ones[i] += z.test0(i);
            }
        }
        BitVector y(params.D);
        for (std::size_t i = 0; i < params.D; ++i) {
            y.set0(i, 2 * ones[i] > reps);
        }
        return y;
    };

    std::vector<BitMatrix> challenges;
    std::vector<BitVector> images;
    std::optional<BitVector> candidate;
    unsigned rounds = 0;
    for (; rounds < options.max_rounds && !candidate; ++rounds) {
        challenges.push_back(draw_challenge(params, rng));
        images.push_back(denoise(challenges.back()));
        if (!is_nonlinear(params.proto)) {
            auto solved = gaussian_solve(challenges.back(), images.back());
            report.stat("round" + std::to_string(rounds + 1) + "_rank", static_cast<double>(solved.rank));
            if (solved.ok()) {
                candidate = solved.solution;
            }
            continue;
        }
        require_key_width(params.k, options.brute_force_limit, "nonlinear majority vote brute force");
        std::vector<const BitMatrix*> cs;
        std::vector<const BitVector*> ys;
        for (std::size_t i = 0; i < challenges.size(); ++i) {
            cs.push_back(&challenges[i]);
            ys.push_back(&images[i]);
        }
        auto bf = brute_force_key(scheme.spec, cs, ys, params.k);
        report.stat("round" + std::to_string(rounds + 1) + "_best_distance", static_cast<double>(bf.distance));
        report.stat("brute_force_evaluations", static_cast<double>(bf.evaluations));
        if (bf.unique && bf.distance == 0) {
            candidate = bf.key;
        }
    }
    report.stat("rounds", rounds);
    if (!candidate) {
        report.summary = "majority vote: no consistent key after " + std::to_string(rounds) + " challenge(s)";
        return report;
    }
    // Confirm against fresh noisy answers.
    SecretKey guess{*candidate, std::nullopt};
    std::vector<SessionTranscript> fresh;
    for (int t = 0; t < 4; ++t) {
        BitMatrix a = draw_challenge(params, rng);
        BitVector z = oracle(a);
        ++report.queries;
        fresh.push_back(make_transcript(scheme, std::nullopt, a, z, Verdict{}));
    }
    const bool confirmed = verifies_on(scheme, *candidate, fresh);
    report.success = confirmed;
    report.recovered_key = *candidate;
    std::ostringstream s;
    s << "majority vote on " << to_string(params.proto) << ": " << (confirmed ? "recovered" : "candidate rejected")
      << " k=" << params.k << " key with " << report.queries << " queries (" << reps << " reps, " << rounds
      << " challenge(s))";
    report.summary = s.str();
    return report;
}

MergeResult lf2_merge_rows(const BitMatrix& a, const BitVector& z, std::size_t first_row, std::size_t last_row) {
    require(a.cols() == z.size(), ErrorCode::Dimension, "merge inputs disagree on column count");
    require_key_width(a.rows(), 64, "column merging");
    require(first_row >= 1 && first_row <= last_row + 1 && last_row <= a.rows(), ErrorCode::Argument,
            "bad merge row range");
    require(last_row + 1 - first_row <= 30, ErrorCode::Unsupported, "at most 30 bucket rows");
    Samples in;
    for (std::size_t j = 1; j <= a.cols(); ++j) {
        in.cols.push_back(column_word(a, j));
        in.bits.push_back(z.test0(j - 1));
    }
    WordMerge m = merge_words(in, static_cast<unsigned>(first_row - 1), static_cast<unsigned>(last_row));
    MergeResult out;
    out.reduced = BitMatrix(a.rows(), m.out.cols.size());
    out.merged = BitVector(m.out.cols.size());
    for (std::size_t t = 0; t < m.out.cols.size(); ++t) {
        for (std::size_t r = 1; r <= a.rows(); ++r) {
            if ((m.out.cols[t] >> (r - 1)) & 1U) {
                out.reduced.row_mut(r).set0(t, true);
            }
        }
        out.merged.set0(t, m.out.bits[t]);
    }
    out.log = std::move(m.log);
    out.buckets_used = m.buckets_used;
    out.singleton_buckets = m.singletons;
    out.empty_buckets = (std::size_t{1} << (last_row + 1 - first_row)) - m.buckets_used;
    return out;
}

MergeResult lf2_merge(const BitMatrix& a, const BitVector& z, std::size_t b) {
    require(b < a.rows(), ErrorCode::Argument, "merge block b must be smaller than k");
    return lf2_merge_rows(a, z, b + 1, a.rows());
}

double lf2_required_samples(std::size_t b, double beta) {
    return 8.0 * static_cast<double>(b) * std::log(2.0) / (beta * beta);
}

bool verifies_on(const Scheme& scheme, const BitVector& candidate, const std::vector<SessionTranscript>& ts) {
    if (ts.empty()) {
        return false;
    }
    SecretKey guess{candidate, std::nullopt};
    std::size_t total = 0;
    for (const auto& t : ts) {
        total += hamming(t.response, expected_response(scheme, guess, nullptr, t.challenge));
    }
    return total <= aggregate_threshold(scheme.params, ts.size());
}

std::size_t aggregate_threshold(const ProtocolParams& params, std::size_t count) {
    // Midpoint between the honest mean eps*D and the D/2 of a wrong key.
    const Rational mid = (params.eps + Rational(1, 2)) * Rational(1, 2);
    return std::max(params.u * count, static_cast<std::size_t>(mid.floor_times(params.D * count)));
}

AttackReport lf2_attack(const std::vector<SessionTranscript>& transcripts, const Scheme& scheme,
                        const Lf2Options& options) {
    const ProtocolParams& params = scheme.params;
    if (is_plus(params.proto)) {
        fail(ErrorCode::Unsupported, "lf2 targets hb or nlhb");
    }
    require_key_width(params.k, 24, "lf2");
    require(options.b >= 1 && options.b <= params.k, ErrorCode::Argument, "block size must lie in 1..k");
    if (transcripts.size() <= options.holdout) {
        fail(ErrorCode::InsufficientSamples, "need more transcripts than the " + std::to_string(options.holdout) +
                                                 " held out for verification");
    }
    const std::size_t use = transcripts.size() - options.holdout;
    const std::vector<SessionTranscript> holdout(transcripts.begin() + static_cast<std::ptrdiff_t>(use),
                                                 transcripts.end());
    Samples base;
    for (std::size_t t = 0; t < use; ++t) {
        const auto& tr = transcripts[t];
        for (std::size_t i = 1; i <= params.D; ++i) {
            base.cols.push_back(column_word(tr.challenge, i));
            base.bits.push_back(tr.response.test0(i - 1));
        }
    }
    const double e = options.noise ? options.noise->to_double() : params.eps.to_double();

    AttackReport report;
    report.attack = "lf2";
    report.target = params.proto;
    report.param("k", std::to_string(params.k));
    report.param("b", std::to_string(options.b));
    report.param("eps", params.eps.to_string());
    report.param("samples", std::to_string(base.cols.size()));
    report.param("holdout", std::to_string(options.holdout));
    report.queries = use;
    report.stat("expected_merged_bias", (1 - 2 * e) * (1 - 2 * e));

    std::uint64_t known = 0;
    const auto k = static_cast<unsigned>(params.k);
    unsigned block = 0;
    for (unsigned lo = 0; lo < k; lo += static_cast<unsigned>(options.b), ++block) {
        const unsigned hi = std::min<unsigned>(k, lo + static_cast<unsigned>(options.b));
        const std::string tag = "block" + std::to_string(block + 1) + "_";
        Samples adjusted = base;
        for (std::size_t i = 0; i < adjusted.cols.size(); ++i) {
            adjusted.bits[i] ^= parity(adjusted.cols[i] & known);
            adjusted.cols[i] &= ~known;
        }
        double beta = 1 - 2 * e;
        Samples work;
        if (hi < k) {
            WordMerge m = merge_words(adjusted, hi, k);
            work = std::move(m.out);
            beta *= beta;
            report.stat(tag + "buckets_used", static_cast<double>(m.buckets_used));
            report.stat(tag + "empty_buckets", std::ldexp(1.0, static_cast<int>(k - hi)) - static_cast<double>(m.buckets_used));
            report.stat(tag + "singleton_buckets", static_cast<double>(m.singletons));
        } else {
            work = std::move(adjusted);
        }
        const double need = lf2_required_samples(hi - lo, beta);
        report.stat(tag + "samples", static_cast<double>(work.cols.size()));
        report.stat(tag + "samples_needed", need);
        if (static_cast<double>(work.cols.size()) < need) {
            fail(ErrorCode::InsufficientSamples,
                 "lf2 block " + std::to_string(block + 1) + " has " + std::to_string(work.cols.size()) +
                     " merged samples; need more samples (estimate " + fmt(std::ceil(need)) + " at bias " + fmt(beta) + ")");
        }
        BlockSearch found = search_block(work, lo, hi - lo);
        report.stat(tag + "bias", found.best_bias);
        report.stat(tag + "runner_up_bias", found.runner_up_bias);
        known |= found.best << lo;
    }
    const BitVector candidate = word_to_key(known, params.k);
    report.recovered_key = candidate;
    report.success = verifies_on(scheme, candidate, holdout);
    report.stat("residual_bias", report.find_stat("block1_bias").value_or(0));
    std::ostringstream s;
    s << "lf2 on " << to_string(params.proto) << " (k=" << params.k << ", b=" << options.b << ", "
      << base.cols.size() << " samples): candidate " << (report.success ? "verifies" : "fails verification")
      << "; first-block bias " << fmt(report.find_stat("block1_bias").value_or(0)) << " vs "
      << fmt((1 - 2 * e) * (1 - 2 * e)) << " expected for a linear response";
    report.summary = s.str();
    return report;
}

AttackReport noise_free_selection_attack(const std::vector<SessionTranscript>& transcripts, const Scheme& scheme,
                                         RandomSource& rng, const NoiseFreeOptions& options) {
    const ProtocolParams& params = scheme.params;
    if (is_plus(params.proto)) {
        fail(ErrorCode::Unsupported, "noise-free selection targets hb or nlhb");
    }
    require_key_width(params.k, 64, "noise-free selection");
    if (transcripts.size() <= options.holdout) {
        fail(ErrorCode::InsufficientSamples, "need more transcripts than the held-out set");
    }
    const std::size_t use = transcripts.size() - options.holdout;
    const std::vector<SessionTranscript> holdout(transcripts.begin() + static_cast<std::ptrdiff_t>(use),
                                                 transcripts.end());
    AttackReport report;
    report.attack = "noisefree";
    report.target = params.proto;
    report.param("k", std::to_string(params.k));
    report.param("eps", params.eps.to_string());
    report.param("transcripts", std::to_string(transcripts.size()));
    report.queries = transcripts.size();
    const double per_trial = std::pow(1 - params.eps.to_double(), static_cast<double>(params.k));
    report.stat("per_trial_success", per_trial);
    report.stat("expected_trials", 1 / per_trial);

    if (is_nonlinear(params.proto)) {
        report.stat("linear_solve_applicable", 0);
        if (params.k > options.brute_force_limit) {
            report.stat("brute_force_evaluations", std::ldexp(1.0, static_cast<int>(params.k)));
            report.summary = "noise-free selection on nlhb: f blocks the linear solve; brute force over 2^" +
                             std::to_string(params.k) + " keys exceeds the desk limit";
            return report;
        }
        std::vector<const BitMatrix*> cs;
        std::vector<const BitVector*> ys;
        for (std::size_t t = 0; t < std::min<std::size_t>(use, 4); ++t) {
            cs.push_back(&transcripts[t].challenge);
            ys.push_back(&transcripts[t].response);
        }
        auto bf = brute_force_key(scheme.spec, cs, ys, params.k);
        report.stat("brute_force_evaluations", static_cast<double>(bf.evaluations));
        report.recovered_key = bf.key;
        report.success = verifies_on(scheme, bf.key, holdout);
        report.summary = std::string("noise-free selection on nlhb: linear solve inapplicable; brute force over 2^") +
                         std::to_string(params.k) + " keys " + (report.success ? "recovers" : "misses") + " the key";
        return report;
    }

    report.stat("linear_solve_applicable", 1);
    std::size_t trial = 0;
    while (trial < options.trials) {
        ++trial;
        const auto& tr = transcripts[rng.uniform_below(use)];
        std::vector<std::size_t> order(params.n);
        std::iota(order.begin(), order.end(), 1);
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_below(i)]);
        }
        WordBasis basis;
        std::vector<BitVector> cols;
        BitVector rhs(params.k);
        for (std::size_t j : order) {
            if (basis.size() == params.k) {
                break;
            }
            if (basis.insert(column_word(tr.challenge, j))) {
                rhs.set(cols.size() + 1, tr.response.get(j));
                cols.push_back(tr.challenge.column(j));
            }
        }
        if (cols.size() < params.k) {
            continue;  // this transcript's challenge is rank deficient
        }
        auto solved = gaussian_solve(BitMatrix::from_columns(cols, params.k), rhs);
        if (solved.ok() && verifies_on(scheme, solved.solution, holdout)) {
            report.success = true;
            report.recovered_key = solved.solution;
            break;
        }
    }
    report.stat("trials", static_cast<double>(trial));
    std::ostringstream s;
    s << "noise-free selection on hb: " << (report.success ? "recovered key after " : "failed after ") << trial
      << " trial(s); per-trial success (1-eps)^k = " << fmt(per_trial);
    report.summary = s.str();
    return report;
}

std::vector<std::uint64_t> measure_merge_errors(const NonlinearFunctionSpec& spec, std::size_t k, std::size_t n,
                                                std::size_t samples, RandomSource& rng) {
    const std::size_t p = spec.window();
    require(n >= 4 * p + 4, ErrorCode::Argument, "need n >= 4p + 4 to merge from outside the window");
    BitVector s(k);
    while (s.is_zero()) {
        s = BitVector::random(k, rng);
    }
    std::vector<std::uint64_t> counts(std::size_t{1} << (p + 1), 0);
    const std::size_t D = n - p;
    for (std::size_t t = 0; t < samples; ++t) {
        BitMatrix a = BitMatrix::random(k, n, rng);
        const std::size_t j = p + 1 + rng.uniform_below(D - p);  // p < j <= D
        std::size_t other = 0;
        do {
            other = 1 + rng.uniform_below(n);
        } while (other + p >= j && other <= j + p);
        BitMatrix merged = a;
        merged.set_column(j, a.column(j) ^ a.column(other));
        BitVector diff = apply_f(spec, mat_vec_mul(s, a)) ^ apply_f(spec, mat_vec_mul(s, merged));
        std::uint64_t pattern = 0;
        for (std::size_t q = 0; q <= p; ++q) {
            if (diff.get(j - p + q)) {
                pattern |= std::uint64_t{1} << q;
            }
        }
        ++counts[pattern];
    }
    return counts;
}

double total_variation(const std::vector<std::uint64_t>& counts_a, std::uint64_t total_a,
                       const std::vector<std::uint64_t>& counts_b, std::uint64_t total_b) {
    require(counts_a.size() == counts_b.size() && total_a > 0 && total_b > 0, ErrorCode::Argument,
            "total variation needs matching supports");
    double tv = 0;
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        tv += std::abs(static_cast<double>(counts_a[i]) / static_cast<double>(total_a) -
                       static_cast<double>(counts_b[i]) / static_cast<double>(total_b));
    }
    return tv / 2;
}

}  // namespace nlhb
