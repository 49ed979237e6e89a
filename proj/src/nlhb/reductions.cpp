// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/reductions.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "nlhb/attacks.hpp"
#include "nlhb/error.hpp"

namespace nlhb {

namespace {

using u128 = unsigned __int128;

BitVector f_of(const NonlinearFunctionSpec& spec, const BitVector& s, const BitMatrix& a) {
    return apply_f(spec, mat_vec_mul(s, a));
}

void require_matrix(const BitMatrix& m, std::size_t rows, std::size_t cols, const char* what) {
    require(m.rows() == rows && m.cols() == cols, ErrorCode::Dimension, what);
}

std::uint64_t hash_matrix(std::uint64_t seed, const BitMatrix& a) {
    std::uint64_t h = mix_seed(seed, a.rows() * 131 + a.cols());
    for (std::size_t r = 1; r <= a.rows(); ++r) {
        for (std::uint64_t w : a.row(r).words()) {
            h = mix_seed(h ^ w, r);
        }
    }
    return h;
}

}  // namespace

BitstringSource honest_source(const Scheme& scheme, const BitVector& s, RandomSource& rng) {
    const ProtocolParams& params = scheme.params;
    require(s.size() == params.k, ErrorCode::Dimension, "secret length must equal k");
    return [scheme, s, &rng]() {
        const ProtocolParams& pp = scheme.params;
        Bitstring x{BitMatrix::random(pp.k, pp.n, rng), BitVector()};
        x.z = f_of(scheme.spec, s, x.a) ^ bernoulli_vector(pp.D, pp.eps, rng);
        return x;
    };
}

BitstringSource uniform_source(const ProtocolParams& params, RandomSource& rng) {
    return [params, &rng]() {
        Bitstring x{BitMatrix::random(params.k, params.n, rng), BitVector()};
        x.z = BitVector::random(params.D, rng);
        return x;
    };
}

// ---------------------------------------------------------------- embedding

bool embedding_feasible(std::size_t n, std::size_t n_prime, std::size_t p) {
    return n_prime >= 1 && p >= 1 && n_prime * p + 1 <= n;
}

bool EmbeddingLayout::valid() const {
    if (n_prime == 0 || n <= p || gaps.size() + 1 != n_prime || positions.size() != n_prime) {
        return false;
    }
    std::size_t sum = std::accumulate(gaps.begin(), gaps.end(), std::size_t{0});
    if (sum + p + n_prime != n) {
        return false;
    }
    std::size_t pos = 1;
    for (std::size_t i = 0; i < n_prime; ++i) {
        if (positions[i] != pos) {
            return false;
        }
        if (i + 1 < n_prime) {
            if (p >= 1 && gaps[i] + 1 < p) {
                return false;
            }
            pos += gaps[i] + 1;
        }
    }
    return positions.back() == n - p;
}

EmbeddingLayout default_layout(std::size_t n, std::size_t n_prime, std::size_t p) {
    require(p >= 1, ErrorCode::Argument, "embedding needs a window p >= 1");
    require(n_prime >= 2, ErrorCode::Argument, "embedding needs n' >= 2");
    if (!embedding_feasible(n, n_prime, p)) {
        fail(ErrorCode::Argument, "embedding infeasible: need n' * p <= n - 1 (n=" + std::to_string(n) +
                                      ", n'=" + std::to_string(n_prime) + ", p=" + std::to_string(p) + ")");
    }
    EmbeddingLayout layout;
    layout.n = n;
    layout.n_prime = n_prime;
    layout.p = p;
    layout.gaps.assign(n_prime - 1, p - 1);
    layout.gaps[0] += n - n_prime * p - 1;
    std::size_t pos = 1;
    for (std::size_t i = 0; i < n_prime; ++i) {
        layout.positions.push_back(pos);
        if (i + 1 < n_prime) {
            pos += layout.gaps[i] + 1;
        }
    }
    return layout;
}

Embedding lpn_to_unld_embed(const BitMatrix& g, const BitVector& z, const NonlinearFunctionSpec& spec,
                            std::size_t n, const Rational& eps, RandomSource& rng) {
    return lpn_to_unld_embed(g, z, spec, default_layout(n, g.cols(), spec.window()), eps, rng);
}

Embedding lpn_to_unld_embed(const BitMatrix& g, const BitVector& z, const NonlinearFunctionSpec& spec,
                            const EmbeddingLayout& layout, const Rational& eps, RandomSource& rng) {
    require(layout.valid(), ErrorCode::Argument, "embedding layout is inconsistent");
    require(spec.window() == layout.p, ErrorCode::Argument, "layout window differs from the function window");
    require(g.cols() == layout.n_prime && z.size() == layout.n_prime, ErrorCode::Dimension,
            "LPN instance width must equal n'");
    require(g.rows() < layout.n_prime, ErrorCode::Argument, "embedding requires k < n'");
    require(eps.in_open_half(), ErrorCode::Range, "filler noise rate must lie in (0, 1/2)");
    Embedding out;
    out.layout = layout;
    out.a = BitMatrix(g.rows(), layout.n);
    out.y = bernoulli_vector(layout.n - layout.p, eps, rng);
    for (std::size_t i = 1; i <= layout.n_prime; ++i) {
        const std::size_t pos = layout.positions[i - 1];
        out.a.set_column(pos, g.column(i));
        out.y.set(pos, z.get(i));
    }
    return out;
}

BitVector unld_brute_force(const BitMatrix& a, const BitVector& y, const NonlinearFunctionSpec& spec) {
    require(a.cols() == y.size() + spec.window(), ErrorCode::Dimension, "y must have n - p bits");
    return brute_force_key(spec, {&a}, {&y}, a.rows()).key;
}

BitVector lpn_brute_force(const BitMatrix& g, const BitVector& z) {
    require(g.cols() == z.size(), ErrorCode::Dimension, "z must have one bit per column of G");
    return brute_force_key(NonlinearFunctionSpec::zero(0), {&g}, {&z}, g.rows()).key;
}

// ------------------------------------------------------------------ hybrids

Bitstring hybrid_sample(const Bitstring& x, std::size_t i, const BitVector& c) {
    require(i >= 1 && i <= x.a.rows(), ErrorCode::Range, "hybrid row index out of range");
    require(c.size() == x.a.cols(), ErrorCode::Dimension, "hybrid offset must have n bits");
    Bitstring out = x;
    out.a.row_mut(i) ^= c;
    return out;
}

Bitstring hybrid_sample(const Bitstring& x, std::size_t i, RandomSource& rng) {
    return hybrid_sample(x, i, BitVector::random(x.a.cols(), rng));
}

namespace {

struct Grid {
    std::size_t k, n, D, kn;
};

Grid exact_grid(const ProtocolParams& params) {
    Grid g{params.k, params.n, params.D, params.k * params.n};
    require(g.kn + g.D <= 24 && g.n <= 24, ErrorCode::Range, "exact distribution limited to kn + D <= 24");
    return g;
}

BitMatrix matrix_from_word(std::uint64_t w, const Grid& g) {
    BitMatrix a(g.k, g.n);
    for (std::size_t r = 0; r < g.k; ++r) {
        a.row_mut(r + 1).words_mut()[0] = (w >> (r * g.n)) & ((std::uint64_t{1} << g.n) - 1);
    }
    return a;
}

std::uint64_t pack(std::uint64_t a_word, const BitVector& z, const Grid& g) {
    std::uint64_t zw = z.words().empty() ? 0 : z.words()[0];
    return a_word | (zw << g.kn);
}

std::vector<std::uint64_t> noise_masses(const Grid& g, const Rational& eps, u128& per_matrix_total) {
    const u128 a = eps.num();
    const u128 b = eps.den();
    std::vector<std::uint64_t> mass(std::size_t{1} << g.D);
    per_matrix_total = 0;
    for (std::uint64_t v = 0; v < mass.size(); ++v) {
        const auto wt = static_cast<unsigned>(std::popcount(v));
        u128 m = 1;
        for (unsigned t = 0; t < wt; ++t) {
            m *= a;
        }
        for (std::size_t t = wt; t < g.D; ++t) {
            m *= b - a;
        }
        require(m <= ~std::uint64_t{0}, ErrorCode::Range, "noise mass overflow");
        mass[v] = static_cast<std::uint64_t>(m);
        per_matrix_total += m;
    }
    return mass;
}

BitVector word_vector(std::uint64_t w, std::size_t len) {
    BitVector v(len);
    if (len > 0) {
        v.words_mut()[0] = w;
        v.clear_tail();
    }
    return v;
}

}  // namespace

ExactDistribution hybrid_distribution(const Scheme& scheme, const BitVector& s, std::size_t i) {
    const Grid g = exact_grid(scheme.params);
    require(s.size() == g.k, ErrorCode::Dimension, "secret length must equal k");
    require(i >= 1 && i <= g.k, ErrorCode::Range, "hybrid row index out of range");
    u128 per = 0;
    const auto vmass = noise_masses(g, scheme.params.eps, per);
    u128 total = per << (g.kn + g.n);
    require(total <= ~std::uint64_t{0}, ErrorCode::Range, "distribution total overflow");
    ExactDistribution out;
    out.total = static_cast<std::uint64_t>(total);
    const std::size_t shift = (i - 1) * g.n;
    for (std::uint64_t aw = 0; aw < (std::uint64_t{1} << g.kn); ++aw) {
        const BitVector fx = f_of(scheme.spec, s, matrix_from_word(aw, g));
        const std::uint64_t fw = fx.words().empty() ? 0 : fx.words()[0];
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << g.n); ++c) {
            const std::uint64_t a2 = aw ^ (c << shift);
            for (std::uint64_t v = 0; v < vmass.size(); ++v) {
                out.mass[a2 | ((fw ^ v) << g.kn)] += vmass[v];
            }
        }
    }
    return out;
}

ExactDistribution honest_distribution(const Scheme& scheme, const BitVector& s) {
    const Grid g = exact_grid(scheme.params);
    require(s.size() == g.k, ErrorCode::Dimension, "secret length must equal k");
    u128 per = 0;
    const auto vmass = noise_masses(g, scheme.params.eps, per);
    ExactDistribution out;
    out.total = static_cast<std::uint64_t>(per << (g.kn + g.n));
    const std::uint64_t scale = std::uint64_t{1} << g.n;
    for (std::uint64_t aw = 0; aw < (std::uint64_t{1} << g.kn); ++aw) {
        const BitVector fx = f_of(scheme.spec, s, matrix_from_word(aw, g));
        for (std::uint64_t v = 0; v < vmass.size(); ++v) {
            out.mass[pack(aw, fx ^ word_vector(v, g.D), g)] += vmass[v] * scale;
        }
    }
    return out;
}

ExactDistribution uniform_distribution(const ProtocolParams& params, std::uint64_t total) {
    const Grid g = exact_grid(params);
    const std::uint64_t points = std::uint64_t{1} << (g.kn + g.D);
    require(total % points == 0, ErrorCode::Argument, "total is not divisible by the number of points");
    ExactDistribution out;
    out.total = total;
    for (std::uint64_t w = 0; w < points; ++w) {
        out.mass[w] = total / points;
    }
    return out;
}

ExactDistance exact_tv(const ExactDistribution& a, const ExactDistribution& b) {
    require(a.total == b.total, ErrorCode::Argument, "distributions must share a total");
    ExactDistance d;
    auto ia = a.mass.begin();
    auto ib = b.mass.begin();
    while (ia != a.mass.end() || ib != b.mass.end()) {
        if (ib == b.mass.end() || (ia != a.mass.end() && ia->first < ib->first)) {
            d.numerator += ia->second;
            ++ia;
        } else if (ia == a.mass.end() || ib->first < ia->first) {
            d.numerator += ib->second;
            ++ib;
        } else {
            d.numerator += ia->second > ib->second ? ia->second - ib->second : ib->second - ia->second;
            ++ia;
            ++ib;
        }
    }
    d.denominator = 2 * a.total;
    return d;
}

// ----------------------------------------------------------- distinguishers

IdealDistinguisher::IdealDistinguisher(Scheme scheme, BitVector s, std::size_t q)
    : scheme_(std::move(scheme)), s_(std::move(s)), q_(q) {
    require(q_ >= 1, ErrorCode::Argument, "batch size must be positive");
    require(s_.size() == scheme_.params.k, ErrorCode::Dimension, "secret length must equal k");
}

bool IdealDistinguisher::decide(std::span<const Bitstring> batch) {
    require(batch.size() == q_, ErrorCode::Argument, "wrong batch size");
    for (const auto& x : batch) {
        require_matrix(x.a, scheme_.params.k, scheme_.params.n, "string matrix must be k x n");
        if (hamming(f_of(scheme_.spec, s_, x.a), x.z) > scheme_.params.u) {
            return false;
        }
    }
    return true;
}

std::size_t algorithm_x_rounds(double delta, std::size_t k, double c) {
    require(delta > 0 && c > 0, ErrorCode::Argument, "delta and c must be positive");
    const double lg = k > 1 ? std::log2(static_cast<double>(k)) : 1.0;
    const double n = std::ceil(c * lg / (delta * delta));
    return n < 1 ? 1 : static_cast<std::size_t>(n);
}

AlgorithmXResult algorithm_x(Distinguisher& y, const BitstringSource& source, const ProtocolParams& params,
                             std::size_t N, double delta, RandomSource& rng) {
    require(N >= 1, ErrorCode::Argument, "algorithm X needs N >= 1");
    require(delta > 0, ErrorCode::Argument, "delta must be positive");
    const std::size_t q = y.batch_size();
    require(q >= 1, ErrorCode::Argument, "distinguisher batch size must be positive");
    AlgorithmXResult out;
    out.N = N;
    std::vector<Bitstring> batch(q);

    std::size_t ones = 0;
    auto uniform = uniform_source(params, rng);
    for (std::size_t r = 0; r < N; ++r) {
        for (auto& x : batch) {
            x = uniform();
        }
        ones += y.decide(batch) ? 1 : 0;
    }
    out.p = static_cast<double>(ones) / static_cast<double>(N);

    std::vector<Bitstring> samples;
    samples.reserve(q * N);
    for (std::size_t t = 0; t < q * N; ++t) {
        samples.push_back(source());
        require_matrix(samples.back().a, params.k, params.n, "source matrix must be k x n");
        require(samples.back().z.size() == params.D, ErrorCode::Dimension, "source vector must have D bits");
    }
    out.strings_drawn = q * N;

    out.estimate = BitVector(params.k);
    for (std::size_t i = 1; i <= params.k; ++i) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t j = 0; j < q; ++j) {
                batch[j] = hybrid_sample(samples[r * q + j], i, rng);
            }
            hits += y.decide(batch) ? 1 : 0;
        }
        const double pi = static_cast<double>(hits) / static_cast<double>(N);
        out.p_i.push_back(pi);
        out.estimate.set(i, !(std::fabs(pi - out.p) >= delta / 4));
    }
    return out;
}

double acceptance_rate(Distinguisher& y, const BitstringSource& source, std::size_t trials) {
    require(trials >= 1, ErrorCode::Argument, "need at least one trial");
    std::vector<Bitstring> batch(y.batch_size());
    std::size_t ones = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        for (auto& x : batch) {
            x = source();
        }
        ones += y.decide(batch) ? 1 : 0;
    }
    return static_cast<double>(ones) / static_cast<double>(trials);
}

// ------------------------------------------------------------ passive forger

BitVector PerfectForger::respond(const BitMatrix& challenge) { return f_of(spec_, s_, challenge); }

Rational passive_threshold_lower(const ProtocolParams& params) {
    return (params.epsp + params.eps) - Rational(2, 1) * params.eps * params.epsp;
}

Rational passive_threshold_default(const ProtocolParams& params) {
    return (passive_threshold_lower(params) + Rational(1, 2)) * Rational(1, 2);
}

ForgerDistinguisher::ForgerDistinguisher(PassiveForger& forger, std::size_t q, const ProtocolParams& params,
                                         Rational eps_dd)
    : forger_(forger), q_(q), params_(params), threshold_(0) {
    if (!(passive_threshold_lower(params) < eps_dd && eps_dd.in_open_half())) {
        fail(ErrorCode::Range, "eps'' must lie in (eps' + eps - 2 eps eps', 1/2), got " + eps_dd.to_string());
    }
    threshold_ = eps_dd.floor_times(params.D);
}

bool ForgerDistinguisher::decide(std::span<const Bitstring> batch) {
    require(batch.size() == q_ + 1, ErrorCode::Argument, "wrong batch size");
    forger_.begin();
    for (std::size_t t = 0; t < q_; ++t) {
        forger_.observe(batch[t]);
    }
    const Bitstring& last = batch[q_];
    BitVector z = forger_.respond(last.a);
    require(z.size() == params_.D, ErrorCode::MalformedResponse, "forger answered with the wrong length");
    return hamming(z, last.z) <= threshold_;
}

std::unique_ptr<ForgerDistinguisher> forger_to_distinguisher(PassiveForger& forger, std::size_t q,
                                                             const ProtocolParams& params, const Rational& eps_dd) {
    return std::make_unique<ForgerDistinguisher>(forger, q, params, eps_dd);
}

// ------------------------------------------------------------- active forger

namespace {

class PlusProverBase : public ActiveForger {
  public:
    PlusProverBase(const Scheme& scheme, BitVector s1, BitVector s2, std::uint64_t seed)
        : scheme_(scheme), s1_(std::move(s1)), s2_(std::move(s2)), rng_(seed), noise_seed_(mix_seed(seed, 7)) {}

    BitMatrix query_challenge(const BitMatrix& blinding) override {
        last_blinding_ = blinding;
        return BitMatrix::random(scheme_.params.k, scheme_.params.n, rng_);
    }
    void query_response(const BitVector&) override {}

    BitMatrix blinding() override {
        b_ = BitMatrix::random(scheme_.params.k, scheme_.params.n, rng_);
        return b_;
    }

    BitVector respond(const BitMatrix& challenge) override {
        const ProtocolParams& pp = scheme_.params;
        RandomSource noise(hash_matrix(noise_seed_, challenge));
        return f_of(scheme_.spec, s1_, b_) ^ f_of(scheme_.spec, s2_, challenge) ^
               bernoulli_vector(pp.D, pp.eps, noise);
    }

  protected:
    Scheme scheme_;
    BitVector s1_;
    BitVector s2_;
    RandomSource rng_;
    std::uint64_t noise_seed_;
    BitMatrix b_;
    BitMatrix last_blinding_;
};

class HonestPlusForger final : public PlusProverBase {
  public:
    using PlusProverBase::PlusProverBase;
    std::unique_ptr<ActiveForger> clone() const override { return std::make_unique<HonestPlusForger>(*this); }
};

class LearningForger final : public PlusProverBase {
  public:
    LearningForger(const Scheme& scheme, BitVector s1, std::uint64_t seed)
        : PlusProverBase(scheme, std::move(s1), BitVector(scheme.params.k), seed) {}

    BitMatrix query_challenge(const BitMatrix& blinding) override {
        last_blinding_ = blinding;
        ++queries_;
        const ProtocolParams& pp = scheme_.params;
        if (queries_ > pp.k) {
            return BitMatrix::random(pp.k, pp.n, rng_);
        }
        probe_ = BitVector::random(pp.n, rng_);
        BitMatrix a(pp.k, pp.n);
        a.set_row(queries_, probe_);
        return a;
    }

    void query_response(const BitVector& z) override {
        if (queries_ == 0 || queries_ > scheme_.params.k || z.size() != scheme_.params.D) {
            return;
        }
        BitVector w = z ^ f_of(scheme_.spec, s1_, last_blinding_);
        const std::size_t d_one = hamming(w, apply_f(scheme_.spec, probe_));
        s2_.set(queries_, d_one < w.weight());
    }

    std::unique_ptr<ActiveForger> clone() const override { return std::make_unique<LearningForger>(*this); }

  private:
    std::size_t queries_ = 0;
    BitVector probe_;
};

class RandomActiveForger final : public ActiveForger {
  public:
    RandomActiveForger(const ProtocolParams& params, std::uint64_t seed) : params_(params), rng_(seed) {}
    BitMatrix query_challenge(const BitMatrix&) override { return BitMatrix::random(params_.k, params_.n, rng_); }
    void query_response(const BitVector&) override {}
    BitMatrix blinding() override { return BitMatrix::random(params_.k, params_.n, rng_); }
    BitVector respond(const BitMatrix& challenge) override {
        RandomSource r(hash_matrix(rng_.next_u64(), challenge));
        return BitVector::random(params_.D, r);
    }
    std::unique_ptr<ActiveForger> clone() const override { return std::make_unique<RandomActiveForger>(*this); }

  private:
    ProtocolParams params_;
    RandomSource rng_;
};

void require_plus_scheme(const Scheme& scheme) {
    require(scheme.params.proto == Protocol::NLHBPlus, ErrorCode::Argument, "active forgers target nlhb+");
}

}  // namespace

std::unique_ptr<ActiveForger> make_learning_forger(const Scheme& scheme, const BitVector& s1, std::uint64_t seed) {
    require_plus_scheme(scheme);
    require(s1.size() == scheme.params.k, ErrorCode::Dimension, "s1 length must equal k");
    return std::make_unique<LearningForger>(scheme, s1, seed);
}

std::unique_ptr<ActiveForger> make_honest_plus_forger(const Scheme& scheme, const BitVector& s1,
                                                      const BitVector& s2, std::uint64_t seed) {
    require_plus_scheme(scheme);
    require(s1.size() == scheme.params.k && s2.size() == scheme.params.k, ErrorCode::Dimension,
            "secret lengths must equal k");
    return std::make_unique<HonestPlusForger>(scheme, s1, s2, seed);
}

std::unique_ptr<ActiveForger> make_random_active_forger(const ProtocolParams& params, std::uint64_t seed) {
    return std::make_unique<RandomActiveForger>(params, seed);
}

Rational active_threshold_lower(const ProtocolParams& params) {
    return Rational(2, 1) * params.epsp * (Rational(1, 1) - params.epsp);
}

Rational active_threshold_default(const ProtocolParams& params) {
    return (active_threshold_lower(params) + Rational(1, 2)) * Rational(1, 2);
}

RewindingDistinguisher::RewindingDistinguisher(ActiveForgerFactory factory, std::size_t q, const Scheme& scheme,
                                               Rational eps_1, std::uint64_t coins, bool hand_s2_to_forger)
    : factory_(std::move(factory)), q_(q), scheme_(scheme), threshold_(0), coins_(coins), hand_s2_(hand_s2_to_forger) {
    require_plus_scheme(scheme_);
    require(q_ >= 1, ErrorCode::Argument, "batch size must be positive");
    require(static_cast<bool>(factory_), ErrorCode::Argument, "missing forger factory");
    if (!(active_threshold_lower(scheme_.params) < eps_1 && eps_1.in_open_half())) {
        fail(ErrorCode::Range, "eps_1 must lie in (2 eps'(1 - eps'), 1/2), got " + eps_1.to_string());
    }
    threshold_ = eps_1.floor_times(scheme_.params.D);
}

bool RewindingDistinguisher::decide(std::span<const Bitstring> batch) {
    require(batch.size() == q_, ErrorCode::Argument, "wrong batch size");
    const ProtocolParams& pp = scheme_.params;
    RandomSource coins(coins_);
    const BitVector s2 = BitVector::random(pp.k, coins);
    ForgerContext ctx{coins.next_u64(), hand_s2_ ? &s2 : nullptr};
    std::unique_ptr<ActiveForger> forger = factory_(ctx);
    require(forger != nullptr, ErrorCode::Protocol, "forger factory returned nothing");

    for (const auto& x : batch) {
        BitMatrix a = forger->query_challenge(x.a);
        require_matrix(a, pp.k, pp.n, "forger challenge must be k x n");
        forger->query_response(x.z ^ f_of(scheme_.spec, s2, a));
    }
    BitMatrix b = forger->blinding();
    require_matrix(b, pp.k, pp.n, "forger blinding matrix must be k x n");
    std::unique_ptr<ActiveForger> snapshot = forger->clone();
    require(snapshot != nullptr, ErrorCode::Protocol, "forger violated the rewinding contract: clone() failed");

    const BitMatrix a1 = BitMatrix::random(pp.k, pp.n, coins);
    const BitMatrix a2 = BitMatrix::random(pp.k, pp.n, coins);
    const BitVector z1 = forger->respond(a1);
    const BitVector z2 = snapshot->respond(a2);
    require(z1.size() == pp.D && z2.size() == pp.D, ErrorCode::MalformedResponse,
            "forger answered with the wrong length");
    last_distance_ = hamming(z1 ^ z2, f_of(scheme_.spec, s2, a1) ^ f_of(scheme_.spec, s2, a2));
    return last_distance_ <= threshold_;
}

std::unique_ptr<RewindingDistinguisher> active_forger_to_distinguisher(ActiveForgerFactory factory, std::size_t q,
                                                                       const Scheme& scheme, const Rational& eps_1,
                                                                       std::uint64_t coins, bool hand_s2_to_forger) {
    return std::make_unique<RewindingDistinguisher>(std::move(factory), q, scheme, eps_1, coins, hand_s2_to_forger);
}

}  // namespace nlhb
