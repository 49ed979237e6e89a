// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/experiments.hpp"

#include <algorithm>
#include <sstream>

#include "nlhb/error.hpp"
#include "nlhb/reductions.hpp"

namespace nlhb {

namespace {

constexpr std::size_t kDefaultD = 1164;

NonlinearFunctionSpec spec_for(const std::string& text, std::size_t p) {
    if (!text.empty()) {
        return NonlinearFunctionSpec::parse(text);
    }
    if (p == 3) {
        return NonlinearFunctionSpec::candidate();
    }
    fail(ErrorCode::Argument, "no default function for p=" + std::to_string(p) + "; give a spec");
}

std::string rational_text(const Rational& r) { return r.to_string(); }

template <typename T>
T pick(T value, T fallback) {
    return value == T{} ? fallback : value;
}

BitVector nonzero_key(std::size_t k, RandomSource& rng) {
    for (;;) {
        BitVector s = BitVector::random(k, rng);
        if (!s.is_zero()) {
            return s;
        }
    }
}

double rate(std::size_t hits, std::size_t trials) {
    return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
}

// Coin-flip distinguisher whose output is a fixed function of its input.
class RandomDistinguisher : public Distinguisher {
  public:
    RandomDistinguisher(std::size_t q, std::uint64_t coins) : q_(q), coins_(coins) {}
    std::size_t batch_size() const override { return q_; }
    bool decide(std::span<const Bitstring> batch) override {
        std::uint64_t h = coins_;
        for (const auto& x : batch) {
            for (std::uint64_t w : x.z.words()) {
                h = mix_seed(h ^ w, 1);
            }
        }
        return (h & 1) != 0;
    }

  private:
    std::size_t q_;
    std::uint64_t coins_;
};

void require_oracle(const std::string& mode, const std::string& oracle) {
    auto menu = reduction_oracles(mode);
    if (std::find(menu.begin(), menu.end(), oracle) == menu.end()) {
        std::string list;
        for (const auto& m : menu) {
            list += (list.empty() ? "" : ", ") + m;
        }
        fail(ErrorCode::Argument, "oracle '" + oracle + "' not available for " + mode + " (choose: " + list + ")");
    }
}

void finish_rate(AttackReport& r, std::size_t hits, std::size_t trials, double required) {
    r.stat("trials", static_cast<double>(trials));
    r.stat("recovered", static_cast<double>(hits));
    r.stat("recovery_rate", rate(hits, trials));
    r.stat("required_rate", required);
    r.success = rate(hits, trials) >= required;
}

AttackReport reduce_embed(const ReduceConfig& c) {
    const std::size_t k = pick<std::size_t>(c.k, 8);
    const std::size_t np = pick<std::size_t>(c.n_prime, 10);
    const std::size_t p = pick<std::size_t>(c.p, 3);
    const std::size_t n = pick<std::size_t>(c.n, 31);
    const Rational eps = c.eps.value_or(Rational(1, 8));
    const std::size_t trials = pick<std::size_t>(c.trials, 100);
    const auto spec = spec_for(c.spec, p);
    require(spec.window() == p, ErrorCode::Argument, "spec window differs from p");
    if (!embedding_feasible(n, np, p)) {
        fail(ErrorCode::Argument, "embedding infeasible: need n' * p <= n - 1");
    }
    require(k < np, ErrorCode::Argument, "embedding requires k < n'");

    AttackReport r;
    r.attack = "reduce.embed";
    r.target = Protocol::NLHB;
    r.param("k", std::to_string(k));
    r.param("n_prime", std::to_string(np));
    r.param("p", std::to_string(p));
    r.param("n", std::to_string(n));
    r.param("eps", rational_text(eps));
    r.param("spec", spec.to_string());
    r.param("noise", c.bounded_noise ? "bounded" : "iid");

    std::size_t recovered = 0;
    std::size_t agree = 0;
    std::size_t direct = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        RandomSource rng(mix_seed(c.seed, t));
        BitMatrix g = BitMatrix::random(k, np, rng);
        BitVector m = BitVector::random(k, rng);
        BitVector e = c.bounded_noise ? bounded_weight_vector(np, eps, rng) : bernoulli_vector(np, eps, rng);
        BitVector z = mat_vec_mul(m, g) ^ e;
        Embedding emb = lpn_to_unld_embed(g, z, spec, n, eps, rng);
        BitVector got = unld_brute_force(emb.a, emb.y, spec);
        BitVector ml = lpn_brute_force(g, z);
        recovered += got == m ? 1 : 0;
        agree += got == ml ? 1 : 0;
        direct += ml == m ? 1 : 0;
        r.queries += 1;
    }

    // Structural sweep over random feasible (n, n', p).
    RandomSource sweep(mix_seed(c.seed, 0xfeed));
    const std::size_t checks = 100;
    std::size_t layout_ok = 0;
    for (std::size_t t = 0; t < checks; ++t) {
        const std::size_t sp = 2 + sweep.uniform_below(4);
        const std::size_t snp = 2 + sweep.uniform_below(11);
        const std::size_t sn = snp * sp + 1 + sweep.uniform_below(20);
        EmbeddingLayout layout = default_layout(sn, snp, sp);
        bool ok = layout.valid();
        for (std::size_t i = 0; i + 1 < snp; ++i) {
            ok = ok && layout.gaps[i] + 1 >= sp;
        }
        NonlinearFunctionSpec sspec(static_cast<unsigned>(sp), {0b11});
        BitMatrix g = BitMatrix::random(snp - 1, snp, sweep);
        Embedding emb = lpn_to_unld_embed(g, BitVector::random(snp, sweep), sspec, layout, eps, sweep);
        std::size_t next = 0;
        for (std::size_t j = 1; j <= sn; ++j) {
            if (next < snp && layout.positions[next] == j) {
                ok = ok && emb.a.column(j) == g.column(next + 1);
                ++next;
            } else {
                ok = ok && emb.a.column(j).is_zero();
            }
        }
        BitVector s = BitVector::random(snp - 1, sweep);
        BitVector fx = apply_f(sspec, mat_vec_mul(s, emb.a));
        BitVector sg = mat_vec_mul(s, g);
        for (std::size_t i = 1; i <= snp; ++i) {
            ok = ok && fx.get(layout.positions[i - 1]) == sg.get(i);
        }
        layout_ok += ok ? 1 : 0;
    }
    finish_rate(r, recovered, trials, 0.95);
    r.stat("decoder_agreement", static_cast<double>(agree));
    r.stat("direct_lpn_recovered", static_cast<double>(direct));
    r.stat("layout_checks", static_cast<double>(checks));
    r.stat("layout_ok", static_cast<double>(layout_ok));
    r.success = r.success && layout_ok == checks;
    std::ostringstream s;
    s << "embedding: decoder recovered m in " << recovered << "/" << trials << " trials, "
      << "matched the direct LPN decoder in " << agree << "/" << trials << ", layouts " << layout_ok << "/"
      << checks << " valid";
    r.summary = s.str();
    return r;
}

AttackReport reduce_hybrid(const ReduceConfig& c) {
    const std::size_t k = pick<std::size_t>(c.k, 2);
    const std::size_t n = pick<std::size_t>(c.n, 6);
    const std::size_t p = pick<std::size_t>(c.p, 3);
    const Rational eps = c.eps.value_or(Rational(1, 4));
    const Rational epsp = c.epsp.value_or(Rational(1, 3));
    require(k <= 4, ErrorCode::Range, "hybrid enumeration limited to k <= 4");
    auto params = ProtocolParams::make(Protocol::NLHB, k, n, p, eps, epsp);
    auto scheme = Scheme::make(params, spec_for(c.spec, p));

    AttackReport r;
    r.attack = "reduce.hybrid";
    r.target = Protocol::NLHB;
    r.param("k", std::to_string(k));
    r.param("n", std::to_string(n));
    r.param("p", std::to_string(p));
    r.param("eps", rational_text(eps));
    r.param("spec", scheme.spec.to_string());

    std::uint64_t worst_uniform = 0;
    std::uint64_t worst_honest = 0;
    std::size_t one_cases = 0;
    std::size_t zero_cases = 0;
    double min_gap = 1.0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << k); ++code) {
        BitVector s(k);
        for (std::size_t i = 1; i <= k; ++i) {
            s.set(i, (code >> (i - 1)) & 1);
        }
        auto honest = honest_distribution(scheme, s);
        auto uniform = uniform_distribution(params, honest.total);
        if (!s.is_zero()) {
            auto d = exact_tv(honest, uniform);
            min_gap = std::min(min_gap, static_cast<double>(d.numerator) / static_cast<double>(d.denominator));
        }
        for (std::size_t i = 1; i <= k; ++i) {
            auto hybrid = hybrid_distribution(scheme, s, i);
            if (s.get(i)) {
                worst_uniform = std::max(worst_uniform, exact_tv(hybrid, uniform).numerator);
                ++one_cases;
            } else {
                worst_honest = std::max(worst_honest, exact_tv(hybrid, honest).numerator);
                ++zero_cases;
            }
            r.queries += 1;
        }
    }
    r.stat("cases_s_i_1", static_cast<double>(one_cases));
    r.stat("cases_s_i_0", static_cast<double>(zero_cases));
    r.stat("max_tv_to_uniform_numerator", static_cast<double>(worst_uniform));
    r.stat("max_tv_to_honest_numerator", static_cast<double>(worst_honest));
    r.stat("min_honest_uniform_tv", min_gap);
    r.success = worst_uniform == 0 && worst_honest == 0;
    r.summary = r.success ? "hybrid: exactly uniform for s_i = 1 and exactly honest for s_i = 0"
                          : "hybrid: nonzero total variation found";
    return r;
}

struct XSetup {
    ProtocolParams params;
    Scheme scheme;
    std::size_t q;
    std::size_t trials;
    std::size_t N;
};

XSetup x_setup(const ReduceConfig& c, std::size_t default_q) {
    const std::size_t k = pick<std::size_t>(c.k, 8);
    const std::size_t p = pick<std::size_t>(c.p, 3);
    const std::size_t n = pick<std::size_t>(c.n, 128 + p);
    auto params = ProtocolParams::make(Protocol::NLHB, k, n, p, c.eps.value_or(Rational(1, 8)),
                                       c.epsp.value_or(Rational(1, 4)));
    XSetup x{params, Scheme::make(params, spec_for(c.spec, p)), pick<std::size_t>(c.q, default_q),
             pick<std::size_t>(c.trials, 100), algorithm_x_rounds(c.delta, k, c.c)};
    return x;
}

void x_params(AttackReport& r, const XSetup& x, const ReduceConfig& c, const std::string& oracle) {
    r.target = Protocol::NLHB;
    r.param("oracle", oracle);
    r.param("k", std::to_string(x.params.k));
    r.param("n", std::to_string(x.params.n));
    r.param("D", std::to_string(x.params.D));
    r.param("eps", rational_text(x.params.eps));
    r.param("epsp", rational_text(x.params.epsp));
    r.param("q", std::to_string(x.q));
    std::ostringstream d;
    d << c.delta;
    r.param("delta", d.str());
    std::ostringstream cc;
    cc << c.c;
    r.param("c", cc.str());
    r.stat("N", static_cast<double>(x.N));
}

AttackReport reduce_thm2(const ReduceConfig& c) {
    const std::string oracle = c.oracle.empty() ? "ideal" : c.oracle;
    require_oracle("thm2", oracle);
    XSetup x = x_setup(c, 1);
    AttackReport r;
    r.attack = "reduce.thm2";
    x_params(r, x, c, oracle);
    std::size_t hits = 0;
    double p_sum = 0;
    for (std::size_t t = 0; t < x.trials; ++t) {
        RandomSource rng(mix_seed(c.seed, t));
        BitVector s = BitVector::random(x.params.k, rng);
        std::unique_ptr<Distinguisher> y;
        if (oracle == "ideal") {
            y = std::make_unique<IdealDistinguisher>(x.scheme, s, x.q);
        } else {
            y = std::make_unique<RandomDistinguisher>(x.q, rng.next_u64());
        }
        auto out = algorithm_x(*y, honest_source(x.scheme, s, rng), x.params, x.N, c.delta, rng);
        hits += out.estimate == s ? 1 : 0;
        p_sum += out.p;
        r.queries += out.strings_drawn;
    }
    finish_rate(r, hits, x.trials, 0.90);
    r.stat("mean_p", p_sum / static_cast<double>(x.trials));
    r.summary = "algorithm X (" + oracle + " distinguisher): " + std::to_string(hits) + "/" +
                std::to_string(x.trials) + " secrets recovered";
    return r;
}

AttackReport reduce_thm3(const ReduceConfig& c) {
    const std::string oracle = c.oracle.empty() ? "perfect" : c.oracle;
    require_oracle("thm3", oracle);
    XSetup x = x_setup(c, 2);
    const Rational eps_dd = passive_threshold_default(x.params);
    AttackReport r;
    r.attack = "reduce.thm3";
    x_params(r, x, c, oracle);
    r.param("eps_dd", rational_text(eps_dd));
    std::size_t hits = 0;
    for (std::size_t t = 0; t < x.trials; ++t) {
        RandomSource rng(mix_seed(c.seed, t));
        BitVector s = BitVector::random(x.params.k, rng);
        std::unique_ptr<PassiveForger> z;
        if (oracle == "perfect") {
            z = std::make_unique<PerfectForger>(x.scheme.spec, s);
        } else {
            z = std::make_unique<RandomForger>(x.params.D, rng.next_u64());
        }
        auto y = forger_to_distinguisher(*z, x.q, x.params, eps_dd);
        auto out = algorithm_x(*y, honest_source(x.scheme, s, rng), x.params, x.N, c.delta, rng);
        hits += out.estimate == s ? 1 : 0;
        r.queries += out.strings_drawn;
        if (t == 0) {
            r.stat("threshold", static_cast<double>(y->threshold()));
        }
    }
    finish_rate(r, hits, x.trials, 0.80);
    r.summary = "algorithm X over the " + oracle + " passive forger: " + std::to_string(hits) + "/" +
                std::to_string(x.trials) + " secrets recovered";
    return r;
}

AttackReport reduce_thm4(const ReduceConfig& c) {
    const std::string oracle = c.oracle.empty() ? "perfect" : c.oracle;
    require_oracle("thm4", oracle);
    const std::size_t k = pick<std::size_t>(c.k, 32);
    const std::size_t p = pick<std::size_t>(c.p, 3);
    const std::size_t n = pick<std::size_t>(c.n, 512 + p);
    auto params = ProtocolParams::make(Protocol::NLHBPlus, k, n, p, c.eps.value_or(Rational(1, 8)),
                                       c.epsp.value_or(Rational(5, 32)));
    auto scheme = Scheme::make(params, spec_for(c.spec, p));
    const std::size_t q = pick<std::size_t>(c.q, k);
    const std::size_t trials = pick<std::size_t>(c.trials, 100);
    const Rational eps1 = active_threshold_default(params);

    AttackReport r;
    r.attack = "reduce.thm4";
    r.target = Protocol::NLHBPlus;
    r.param("oracle", oracle);
    r.param("k", std::to_string(k));
    r.param("n", std::to_string(n));
    r.param("D", std::to_string(params.D));
    r.param("eps", rational_text(params.eps));
    r.param("epsp", rational_text(params.epsp));
    r.param("q", std::to_string(q));
    r.param("eps_1", rational_text(eps1));

    std::size_t honest_ones = 0;
    std::size_t uniform_ones = 0;
    std::size_t threshold = 0;
    std::vector<Bitstring> batch(q);
    for (std::size_t t = 0; t < trials; ++t) {
        RandomSource rng(mix_seed(c.seed, t));
        const BitVector s1 = nonzero_key(k, rng);
        ActiveForgerFactory factory;
        bool hand = false;
        if (oracle == "perfect") {
            factory = [&](const ForgerContext& ctx) { return make_learning_forger(scheme, s1, ctx.seed); };
        } else if (oracle == "honest") {
            hand = true;
            factory = [&](const ForgerContext& ctx) {
                return make_honest_plus_forger(scheme, s1, *ctx.harness_s2, ctx.seed);
            };
        } else {
            factory = [&](const ForgerContext& ctx) { return make_random_active_forger(params, ctx.seed); };
        }
        auto y = active_forger_to_distinguisher(factory, q, scheme, eps1, rng.next_u64(), hand);
        threshold = y->threshold();
        auto honest = honest_source(scheme, s1, rng);
        auto uniform = uniform_source(params, rng);
        for (auto& x : batch) {
            x = honest();
        }
        honest_ones += y->decide(batch) ? 1 : 0;
        for (auto& x : batch) {
            x = uniform();
        }
        uniform_ones += y->decide(batch) ? 1 : 0;
        r.queries += 2 * q;
    }
    const double gap = rate(honest_ones, trials) - rate(uniform_ones, trials);
    r.stat("trials", static_cast<double>(trials));
    r.stat("threshold", static_cast<double>(threshold));
    r.stat("honest_rate", rate(honest_ones, trials));
    r.stat("uniform_rate", rate(uniform_ones, trials));
    r.stat("gap", gap);
    r.stat("required_gap", 0.9);
    r.success = gap >= 0.9;
    std::ostringstream s;
    s << "rewinding distinguisher (" << oracle << " forger): honest " << honest_ones << "/" << trials
      << ", uniform " << uniform_ones << "/" << trials;
    r.summary = s.str();
    return r;
}

}  // namespace

Scheme make_scheme(Protocol proto, std::size_t k, std::size_t n, std::size_t p, const Rational& eps,
                   const Rational& epsp, const std::string& spec) {
    if (!is_nonlinear(proto)) {
        require(spec.empty(), ErrorCode::Argument, "linear protocols take no function spec");
        return Scheme::linear(ProtocolParams::make(proto, k, n, 0, eps, epsp));
    }
    auto f = spec_for(spec, p);
    return Scheme::make(ProtocolParams::make(proto, k, n, f.window(), eps, epsp), f);
}

SimulateResult simulate(const SimulateConfig& c) {
    const std::size_t p = is_nonlinear(c.proto) ? (c.spec.empty() ? c.p : NonlinearFunctionSpec::parse(c.spec).window()) : 0;
    SimulateResult out;
    out.scheme = make_scheme(c.proto, c.k, c.n == 0 ? kDefaultD + p : c.n, p, c.eps, c.epsp, c.spec);
    const ProtocolParams& pp = out.scheme.params;
    RandomSource rng(c.seed);
    out.key = SecretKey::generate(pp, rng);
    if (!c.random_responder) {
        out.transcripts = transcript_sampler(out.scheme, out.key, rng, c.sessions);
    } else {
        for (std::size_t i = 0; i < c.sessions; ++i) {
            std::optional<BitMatrix> b;
            if (is_plus(pp.proto)) {
                b = draw_blinding(pp, rng);
            }
            BitMatrix a = draw_challenge(pp, rng);
            BitVector z = BitVector::random(pp.D, rng);
            out.transcripts.push_back(
                make_transcript(out.scheme, b, a, z, verify(out.scheme, out.key, b ? &*b : nullptr, a, z)));
        }
    }
    for (const auto& t : out.transcripts) {
        out.accepted += t.decision == Decision::Accept ? 1 : 0;
    }
    return out;
}

AttackReport run_attack(const AttackConfig& c) {
    require(!is_plus(c.proto), ErrorCode::Unsupported, "attacks target the single-secret protocols");
    const std::size_t p = is_nonlinear(c.proto) ? c.p : 0;
    Scheme scheme = make_scheme(c.proto, c.k, c.n == 0 ? 64 + p : c.n, p, c.eps, c.epsp, c.spec);
    RandomSource rng(c.seed);
    SecretKey key = SecretKey::generate(scheme.params, rng);
    AttackReport r;
    if (c.attack == "majority") {
        RandomSource prover_rng(mix_seed(c.seed, 1));
        MajorityOptions opts;
        opts.reps = c.reps;
        r = majority_vote_attack(honest_prover(scheme, key, prover_rng), scheme, rng, opts);
    } else if (c.attack == "lf2") {
        Lf2Options opts;
        opts.b = c.b;
        auto ts = transcript_sampler(scheme, key, rng, c.samples == 0 ? 256 + opts.holdout : c.samples);
        r = lf2_attack(ts, scheme, opts);
    } else if (c.attack == "noisefree") {
        auto ts = transcript_sampler(scheme, key, rng, c.samples == 0 ? 40 : c.samples);
        r = noise_free_selection_attack(ts, scheme, rng);
    } else {
        fail(ErrorCode::Argument, "unknown attack '" + c.attack + "' (choose: majority, lf2, noisefree)");
    }
    r.param("seed", std::to_string(c.seed));
    r.stat("key_match", r.recovered_key && *r.recovered_key == key.s1 ? 1.0 : 0.0);
    return r;
}

std::vector<std::string> reduction_oracles(const std::string& mode) {
    if (mode == "thm2") {
        return {"ideal", "random"};
    }
    if (mode == "thm3") {
        return {"perfect", "random"};
    }
    if (mode == "thm4") {
        return {"perfect", "honest", "random"};
    }
    if (mode == "embed" || mode == "hybrid") {
        return {};
    }
    fail(ErrorCode::Argument, "unknown reduction mode '" + mode + "' (choose: embed, hybrid, thm2, thm3, thm4)");
}

AttackReport run_reduction(const ReduceConfig& c) {
    AttackReport r;
    if (c.mode == "embed") {
        r = reduce_embed(c);
    } else if (c.mode == "hybrid") {
        r = reduce_hybrid(c);
    } else if (c.mode == "thm2") {
        r = reduce_thm2(c);
    } else if (c.mode == "thm3") {
        r = reduce_thm3(c);
    } else if (c.mode == "thm4") {
        r = reduce_thm4(c);
    } else {
        reduction_oracles(c.mode);
    }
    r.param("seed", std::to_string(c.seed));
    return r;
}

}  // namespace nlhb
