// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/protocols.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "nlhb/error.hpp"

namespace nlhb {

namespace {

std::string read_record_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        fail(ErrorCode::Parse, "truncated transcript record");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

std::string expect_prefix(const std::string& line, std::string_view prefix) {
    if (line.compare(0, prefix.size(), prefix) != 0) {
        fail(ErrorCode::Parse, "expected '" + std::string(prefix) + "...' in transcript, got '" + line + "'");
    }
    return line.substr(prefix.size());
}

std::size_t parse_size(std::string_view text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos) {
        fail(ErrorCode::Parse, "not a count: '" + std::string(text) + "'");
    }
    return static_cast<std::size_t>(std::stoull(std::string(text)));
}

void check_challenge(const BitMatrix& a, const ProtocolParams& params) {
    if (a.rows() != params.k || a.cols() != params.n) {
        fail(ErrorCode::Dimension, "challenge is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                       ", expected " + std::to_string(params.k) + "x" + std::to_string(params.n));
    }
}

void check_spec(const NonlinearFunctionSpec& spec, const ProtocolParams& params) {
    if (spec.window() != params.p) {
        fail(ErrorCode::Argument, "function window p=" + std::to_string(spec.window()) +
                                      " does not match parameters p=" + std::to_string(params.p));
    }
}

Verdict threshold(const BitVector& expected, const BitVector& z, const ProtocolParams& params) {
    if (z.size() != expected.size()) {
        fail(ErrorCode::MalformedResponse, "response has " + std::to_string(z.size()) + " bits, expected " +
                                               std::to_string(expected.size()));
    }
    Verdict v;
    v.distance = hamming(z, expected);
    v.decision = v.distance <= params.u ? Decision::Accept : Decision::Reject;
    return v;
}

}  // namespace

const char* to_string(Protocol proto) {
    switch (proto) {
        case Protocol::HB:
            return "hb";
        case Protocol::HBPlus:
            return "hb+";
        case Protocol::NLHB:
            return "nlhb";
        case Protocol::NLHBPlus:
            return "nlhb+";
    }
    return "?";
}

Protocol parse_protocol(std::string_view text) {
    if (text == "hb") {
        return Protocol::HB;
    }
    if (text == "hb+" || text == "hbplus") {
        return Protocol::HBPlus;
    }
    if (text == "nlhb") {
        return Protocol::NLHB;
    }
    if (text == "nlhb+" || text == "nlhbplus") {
        return Protocol::NLHBPlus;
    }
    fail(ErrorCode::Parse, "unknown protocol '" + std::string(text) + "'");
}

const char* to_string(Decision d) { return d == Decision::Accept ? "accept" : "reject"; }

ProtocolParams ProtocolParams::make(Protocol proto, std::size_t k, std::size_t n, std::size_t p, Rational eps,
                                    Rational epsp) {
    if (k == 0) {
        fail(ErrorCode::Argument, "key length k must be positive");
    }
    if (!eps.in_open_half() || !epsp.in_open_half() || !(eps < epsp)) {
        fail(ErrorCode::Range, "need 0 < eps < eps' < 1/2 (eps=" + eps.to_string() + ", eps'=" + epsp.to_string() + ")");
    }
    if (is_nonlinear(proto)) {
        if (p < 2) {
            fail(ErrorCode::Argument, "nonlinear variants need p >= 2");
        }
    } else if (p != 0) {
        fail(ErrorCode::Argument, "linear variants take p = 0");
    }
    if (n <= p) {
        fail(ErrorCode::Argument, "need n > p");
    }
    ProtocolParams out;
    out.proto = proto;
    out.k = k;
    out.n = n;
    out.p = p;
    out.D = n - p;
    out.eps = eps;
    out.epsp = epsp;
    out.u = epsp.floor_times(out.D);
    return out;
}

std::string ProtocolParams::to_line() const {
    std::ostringstream out;
    out << "params k=" << k << " n=" << n << " p=" << p << " D=" << D << " eps=" << eps.to_string()
        << " epsp=" << epsp.to_string() << " u=" << u;
    return out.str();
}

ProtocolParams ProtocolParams::parse_line(Protocol proto, std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string word;
    in >> word;
    if (word != "params") {
        fail(ErrorCode::Parse, "expected params line");
    }
    std::map<std::string, std::string> fields;
    while (in >> word) {
        auto eq = word.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::Parse, "bad params field '" + word + "'");
        }
        fields[word.substr(0, eq)] = word.substr(eq + 1);
    }
    auto get = [&](const char* key) -> const std::string& {
        auto it = fields.find(key);
        if (it == fields.end()) {
            fail(ErrorCode::Parse, std::string("params line lacks ") + key);
        }
        return it->second;
    };
    ProtocolParams params = make(proto, parse_size(get("k")), parse_size(get("n")), parse_size(get("p")),
                                 Rational::parse(get("eps")), Rational::parse(get("epsp")));
    if (fields.count("D") && parse_size(fields["D"]) != params.D) {
        fail(ErrorCode::Parse, "params line has inconsistent D");
    }
    if (fields.count("u") && parse_size(fields["u"]) != params.u) {
        fail(ErrorCode::Parse, "params line has inconsistent u");
    }
    return params;
}

Scheme Scheme::make(const ProtocolParams& params, const NonlinearFunctionSpec& spec) {
    check_spec(spec, params);
    if (!is_nonlinear(params.proto) && !spec.monomials().empty()) {
        fail(ErrorCode::Argument, "linear variants take the zero function");
    }
    return Scheme{params, spec};
}

SecretKey SecretKey::generate(const ProtocolParams& params, RandomSource& rng) {
    SecretKey key;
    key.s1 = BitVector::random(params.k, rng);
    if (is_plus(params.proto)) {
        key.s2 = BitVector::random(params.k, rng);
    }
    return key;
}

void SecretKey::check(const ProtocolParams& params) const {
    if (s1.size() != params.k || (s2 && s2->size() != params.k)) {
        fail(ErrorCode::Dimension, "key length does not match k=" + std::to_string(params.k));
    }
    if (is_plus(params.proto) != s2.has_value()) {
        fail(ErrorCode::Argument, is_plus(params.proto) ? "second secret missing" : "unexpected second secret");
    }
}

BitVector hb_response(const BitVector& s, const BitMatrix& a, const BitVector& noise) {
    BitVector z = mat_vec_mul(s, a);
    require(noise.size() == z.size(), ErrorCode::Dimension, "noise length does not match response");
    return z ^= noise;
}

BitVector nlhb_response(const BitVector& s, const BitMatrix& a, const NonlinearFunctionSpec& spec,
                        const BitVector& noise) {
    BitVector z = apply_f(spec, mat_vec_mul(s, a));
    require(noise.size() == z.size(), ErrorCode::Dimension, "noise length does not match response");
    return z ^= noise;
}

BitVector hbplus_response(const BitVector& s1, const BitVector& s2, const BitMatrix& b, const BitMatrix& a,
                          const BitVector& noise) {
    BitVector z = mat_vec_mul(s1, b) ^ mat_vec_mul(s2, a);
    require(noise.size() == z.size(), ErrorCode::Dimension, "noise length does not match response");
    return z ^= noise;
}

BitVector nlhbplus_response(const BitVector& s1, const BitVector& s2, const BitMatrix& b, const BitMatrix& a,
                            const NonlinearFunctionSpec& spec, const BitVector& noise) {
    BitVector z = apply_f(spec, mat_vec_mul(s1, b)) ^ apply_f(spec, mat_vec_mul(s2, a));
    require(noise.size() == z.size(), ErrorCode::Dimension, "noise length does not match response");
    return z ^= noise;
}

BitVector hb_respond(const SecretKey& key, const BitMatrix& a, RandomSource& rng, const ProtocolParams& params) {
    check_challenge(a, params);
    return hb_response(key.s1, a, bernoulli_vector(params.D, params.eps, rng));
}

BitVector nlhb_respond(const SecretKey& key, const BitMatrix& a, const NonlinearFunctionSpec& spec,
                       RandomSource& rng, const ProtocolParams& params) {
    check_challenge(a, params);
    check_spec(spec, params);
    return nlhb_response(key.s1, a, spec, bernoulli_vector(params.D, params.eps, rng));
}

Verdict hb_verify(const SecretKey& key, const BitMatrix& a, const BitVector& z, const ProtocolParams& params) {
    check_challenge(a, params);
    return threshold(mat_vec_mul(key.s1, a), z, params);
}

Verdict nlhb_verify(const SecretKey& key, const BitMatrix& a, const BitVector& z, const NonlinearFunctionSpec& spec,
                    const ProtocolParams& params) {
    check_challenge(a, params);
    check_spec(spec, params);
    return threshold(apply_f(spec, mat_vec_mul(key.s1, a)), z, params);
}

BitVector expected_response(const Scheme& scheme, const SecretKey& key, const BitMatrix* b, const BitMatrix& a) {
    const ProtocolParams& params = scheme.params;
    check_challenge(a, params);
    key.check(params);
    if (!is_plus(params.proto)) {
        return apply_f(scheme.spec, mat_vec_mul(key.s1, a));
    }
    if (b == nullptr) {
        fail(ErrorCode::Protocol, "blinding matrix missing");
    }
    check_challenge(*b, params);
    return apply_f(scheme.spec, mat_vec_mul(key.s1, *b)) ^ apply_f(scheme.spec, mat_vec_mul(*key.s2, a));
}

Verdict verify(const Scheme& scheme, const SecretKey& key, const BitMatrix* b, const BitMatrix& a,
               const BitVector& z) {
    return threshold(expected_response(scheme, key, b, a), z, scheme.params);
}

BitVector respond(const Scheme& scheme, const SecretKey& key, const BitMatrix* b, const BitMatrix& a,
                  RandomSource& rng) {
    BitVector z = expected_response(scheme, key, b, a);
    return z ^= bernoulli_vector(scheme.params.D, scheme.params.eps, rng);
}

BitMatrix draw_blinding(const ProtocolParams& params, RandomSource& rng_prover) {
    return BitMatrix::random(params.k, params.n, rng_prover);
}

BitMatrix draw_challenge(const ProtocolParams& params, RandomSource& rng_verifier) {
    return BitMatrix::random(params.k, params.n, rng_verifier);
}

SessionTranscript make_transcript(const Scheme& scheme, const std::optional<BitMatrix>& b, const BitMatrix& a,
                                  const BitVector& z, const Verdict& verdict) {
    SessionTranscript t;
    t.proto = scheme.params.proto;
    t.params = scheme.params;
    if (is_nonlinear(t.proto)) {
        t.spec = scheme.spec;
    }
    t.blinding = b;
    t.challenge = a;
    t.response = z;
    t.decision = verdict.decision;
    t.distance = verdict.distance;
    return t;
}

SessionTranscript run_session(const Scheme& scheme, const SecretKey& key, RandomSource& rng_prover,
                              RandomSource& rng_verifier) {
    key.check(scheme.params);
    std::optional<BitMatrix> b;
    if (is_plus(scheme.params.proto)) {
        b = draw_blinding(scheme.params, rng_prover);
    }
    BitMatrix a = draw_challenge(scheme.params, rng_verifier);
    BitVector z = respond(scheme, key, b ? &*b : nullptr, a, rng_prover);
    Verdict v = verify(scheme, key, b ? &*b : nullptr, a, z);
    return make_transcript(scheme, b, a, z, v);
}

SessionTranscript hbplus_session(const SecretKey& key, RandomSource& rng_prover, RandomSource& rng_verifier,
                                 const ProtocolParams& params) {
    require(params.proto == Protocol::HBPlus, ErrorCode::Argument, "hbplus_session needs hb+ parameters");
    return run_session(Scheme::linear(params), key, rng_prover, rng_verifier);
}

SessionTranscript nlhbplus_session(const SecretKey& key, const NonlinearFunctionSpec& spec,
                                   RandomSource& rng_prover, RandomSource& rng_verifier,
                                   const ProtocolParams& params) {
    require(params.proto == Protocol::NLHBPlus, ErrorCode::Argument, "nlhbplus_session needs nlhb+ parameters");
    return run_session(Scheme::make(params, spec), key, rng_prover, rng_verifier);
}

std::vector<SessionTranscript> transcript_sampler(const Scheme& scheme, const SecretKey& key, RandomSource& rng,
                                                  std::size_t q) {
    std::vector<SessionTranscript> out;
    out.reserve(q);
    for (std::size_t i = 0; i < q; ++i) {
        out.push_back(run_session(scheme, key, rng, rng));
    }
    return out;
}

void write_transcript(std::ostream& out, const SessionTranscript& t) {
    out << "proto=" << to_string(t.proto) << '\n' << t.params.to_line() << '\n';
    if (t.spec) {
        out << "spec=" << t.spec->to_string() << '\n';
    }
    if (t.blinding) {
        out << to_hex(*t.blinding);
    }
    out << to_hex(t.challenge) << to_hex(t.response) << "decision=" << to_string(t.decision) << '\n'
        << "distance=" << t.distance << "\n\n";
}

std::string format_transcript(const SessionTranscript& t) {
    std::ostringstream out;
    write_transcript(out, t);
    return out.str();
}

std::optional<SessionTranscript> read_transcript(std::istream& in) {
    std::string line;
    for (;;) {
        if (!std::getline(in, line)) {
            return std::nullopt;
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            break;
        }
    }
    SessionTranscript t;
    t.proto = parse_protocol(expect_prefix(line, "proto="));
    t.params = ProtocolParams::parse_line(t.proto, read_record_line(in));
    if (is_nonlinear(t.proto)) {
        t.spec = NonlinearFunctionSpec::parse(expect_prefix(read_record_line(in), "spec="));
        check_spec(*t.spec, t.params);
    }
    if (is_plus(t.proto)) {
        t.blinding = read_bitmatrix(in);
    }
    t.challenge = read_bitmatrix(in);
    t.response = read_bitvector(in);
    const std::string decision = expect_prefix(read_record_line(in), "decision=");
    if (decision == "accept") {
        t.decision = Decision::Accept;
    } else if (decision == "reject") {
        t.decision = Decision::Reject;
    } else {
        fail(ErrorCode::Parse, "bad decision '" + decision + "'");
    }
    t.distance = parse_size(expect_prefix(read_record_line(in), "distance="));
    check_transcript(t);
    return t;
}

std::vector<SessionTranscript> read_transcripts(std::istream& in) {
    std::vector<SessionTranscript> out;
    while (auto t = read_transcript(in)) {
        out.push_back(std::move(*t));
    }
    return out;
}

void check_transcript(const SessionTranscript& t) {
    check_challenge(t.challenge, t.params);
    if (t.blinding) {
        check_challenge(*t.blinding, t.params);
    }
    if (is_plus(t.proto) != t.blinding.has_value()) {
        fail(ErrorCode::Parse, "blinding matrix presence does not match protocol");
    }
    if (t.response.size() != t.params.D) {
        fail(ErrorCode::Dimension, "response length does not match D");
    }
    if (t.distance > t.params.D) {
        fail(ErrorCode::Parse, "distance exceeds D");
    }
    if ((t.decision == Decision::Accept) != (t.distance <= t.params.u)) {
        fail(ErrorCode::Parse, "decision disagrees with distance and threshold");
    }
}

}  // namespace nlhb
