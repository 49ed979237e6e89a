// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/nlhb.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "nlhb/authsvc.hpp"
#include "nlhb/cost.hpp"
#include "nlhb/error.hpp"
#include "nlhb/experiments.hpp"
#include "nlhb/keystore.hpp"
#include "nlhb/nlfunc.hpp"
#include "nlhb/tails.hpp"

struct nlhb_spec {
    nlhb::NonlinearFunctionSpec spec;
};

struct nlhb_report {
    nlhb::AttackReport report;
};

struct nlhb_server {
    std::unique_ptr<nlhb::AuthServer> server;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
nlhb_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        fn();
        return NLHB_OK;
    } catch (const nlhb::Error& e) {
        g_last_error = e.what();
        return static_cast<nlhb_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown failure";
    }
    return NLHB_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
    if (p == nullptr) {
        nlhb::fail(nlhb::ErrorCode::Argument, std::string(what) + " must not be NULL");
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string text_or(const char* s, const char* fallback) { return s != nullptr ? std::string(s) : std::string(fallback); }

nlhb::Rational rational_or(const char* s, nlhb::Rational fallback) {
    return s != nullptr ? nlhb::Rational::parse(s) : fallback;
}

nlhb::SimulateConfig simulate_config(const nlhb_simulate_config* c) {
    nlhb::SimulateConfig sc;
    sc.proto = nlhb::parse_protocol(text_or(c->proto, "nlhb"));
    sc.k = c->k != 0 ? c->k : sc.k;
    sc.n = c->n;
    sc.p = c->p != 0 ? c->p : sc.p;
    sc.eps = rational_or(c->eps, sc.eps);
    sc.epsp = rational_or(c->epsp, sc.epsp);
    sc.spec = text_or(c->spec, "");
    sc.sessions = c->sessions != 0 ? c->sessions : sc.sessions;
    sc.seed = c->seed;
    sc.random_responder = c->random_responder != 0;
    return sc;
}

}  // namespace

extern "C" {

const char* nlhb_version(void) { return "1.0.0"; }

const char* nlhb_status_name(nlhb_status status) {
    switch (status) {
        case NLHB_OK: return "ok";
        case NLHB_ERR_ARGUMENT: return "argument";
        case NLHB_ERR_DIMENSION: return "dimension";
        case NLHB_ERR_PARSE: return "parse";
        case NLHB_ERR_RANGE: return "range";
        case NLHB_ERR_SINGULAR: return "singular";
        case NLHB_ERR_IO: return "io";
        case NLHB_ERR_NETWORK: return "network";
        case NLHB_ERR_TIMEOUT: return "timeout";
        case NLHB_ERR_PROTOCOL: return "protocol";
        case NLHB_ERR_UNKNOWN_IDENTITY: return "unknown-identity";
        case NLHB_ERR_MALFORMED_RESPONSE: return "malformed-response";
        case NLHB_ERR_INSUFFICIENT_SAMPLES: return "insufficient-samples";
        case NLHB_ERR_UNSUPPORTED: return "unsupported";
        case NLHB_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* nlhb_last_error(void) { return g_last_error.c_str(); }

void nlhb_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------- specs

nlhb_status nlhb_spec_parse(const char* text, nlhb_spec** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new nlhb_spec{nlhb::NonlinearFunctionSpec::parse(text)};
    });
}

nlhb_status nlhb_spec_candidate(nlhb_spec** out) {
    return guarded([&] {
        need(out, "out");
        *out = new nlhb_spec{nlhb::NonlinearFunctionSpec::candidate()};
    });
}

void nlhb_spec_free(nlhb_spec* spec) { delete spec; }

unsigned nlhb_spec_window(const nlhb_spec* spec) { return spec != nullptr ? spec->spec.window() : 0; }

nlhb_status nlhb_spec_describe(const nlhb_spec* spec, char** out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        *out = dup(spec->spec.to_string());
    });
}

nlhb_status nlhb_spec_apply(const nlhb_spec* spec, const char* bits, char** out) {
    return guarded([&] {
        need(spec, "spec");
        need(bits, "bits");
        need(out, "out");
        *out = dup(nlhb::apply_f(spec->spec, nlhb::BitVector::from_string(bits)).to_string());
    });
}

nlhb_status nlhb_spec_merge_entropy(const nlhb_spec* spec, double* bits, char** exact_text) {
    return guarded([&] {
        need(spec, "spec");
        need(bits, "bits");
        auto d = nlhb::merge_error_distribution(spec->spec);
        *bits = d.entropy.bits;
        if (exact_text != nullptr) {
            std::string text = d.entropy.to_string();
            if (d.entropy.dyadic) {
                text = nlhb::Rational(d.entropy.numerator, std::uint64_t{1} << d.entropy.denominator_log2).to_string();
                if (text.size() > 2 && text.compare(text.size() - 2, 2, "/1") == 0) {
                    text.resize(text.size() - 2);
                }
            }
            *exact_text = dup(text);
        }
    });
}

nlhb_status nlhb_spec_balance(const nlhb_spec* spec, unsigned n, nlhb_balance* out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        auto r = nlhb::balance_check(spec->spec, n);
        *out = nlhb_balance{r.uniform ? 1 : 0, r.expected_count, r.min_count, r.max_count, r.distinct_outputs};
    });
}

nlhb_status nlhb_analyze_enumerate(unsigned p, int all_maximizers, char** tsv) {
    return guarded([&] {
        need(tsv, "tsv");
        *tsv = dup(nlhb::enumeration_tsv(nlhb::enumerate_functions(p), all_maximizers != 0));
    });
}

// ---------------------------------------------------------------- tails

nlhb_status nlhb_false_accept(uint64_t D, uint64_t u, double* log2_value) {
    return guarded([&] {
        need(log2_value, "log2_value");
        *log2_value = nlhb::false_accept(D, u).log2_value;
    });
}

nlhb_status nlhb_false_reject(uint64_t D, const char* eps, uint64_t u, double* log2_value) {
    return guarded([&] {
        need(eps, "eps");
        need(log2_value, "log2_value");
        *log2_value = nlhb::false_reject(D, nlhb::Rational::parse(eps), u).log2_value;
    });
}

nlhb_status nlhb_threshold(const char* epsp, uint64_t D, uint64_t* u) {
    return guarded([&] {
        need(epsp, "epsp");
        need(u, "u");
        *u = nlhb::Rational::parse(epsp).floor_times(D);
    });
}

nlhb_status nlhb_rational_normalize(const char* text, char** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = dup(nlhb::Rational::parse(text).to_string());
    });
}

nlhb_status nlhb_false_accept_at_most(uint64_t D, uint64_t u, long exponent, int* holds) {
    return guarded([&] {
        need(holds, "holds");
        *holds = nlhb::false_accept(D, u).at_most_pow2(exponent) ? 1 : 0;
    });
}

nlhb_status nlhb_false_reject_at_most(uint64_t D, const char* eps, uint64_t u, long exponent, int* holds) {
    return guarded([&] {
        need(eps, "eps");
        need(holds, "holds");
        *holds = nlhb::false_reject(D, nlhb::Rational::parse(eps), u).at_most_pow2(exponent) ? 1 : 0;
    });
}

nlhb_status nlhb_find_min_length(const char* eps, const char* epsp, double pfa_log2, double pfr_log2,
                                 nlhb_length_result* out) {
    return guarded([&] {
        need(eps, "eps");
        need(epsp, "epsp");
        need(out, "out");
        auto r = nlhb::find_min_length(nlhb::Rational::parse(eps), nlhb::Rational::parse(epsp), pfa_log2, pfr_log2);
        *out = nlhb_length_result{r.D,
                                  r.u,
                                  r.pfa.log2_value,
                                  r.pfr.log2_value,
                                  r.scanned,
                                  r.exact_checks,
                                  static_cast<uint64_t>(r.pfa_increases.size()),
                                  static_cast<uint64_t>(r.pfr_increases.size())};
    });
}

// ---------------------------------------------------------------- cost

nlhb_status nlhb_count_ops(const char* proto, uint64_t k, uint64_t D, const nlhb_spec* spec, nlhb_op_count* out,
                           char** breakdown_tsv) {
    return guarded([&] {
        need(proto, "proto");
        need(out, "out");
        auto ops = nlhb::count_ops(nlhb::parse_protocol(proto), k, D, spec != nullptr ? &spec->spec : nullptr);
        *out = nlhb_op_count{ops.multiplications, ops.additions};
        if (breakdown_tsv != nullptr) {
            std::ostringstream s;
            s << "phase\tmultiplications\tadditions\n";
            for (const auto& ph : ops.breakdown) {
                s << ph.name << '\t' << ph.multiplications << '\t' << ph.additions << '\n';
            }
            *breakdown_tsv = dup(s.str());
        }
    });
}

nlhb_status nlhb_cost_table(char** tsv) {
    return guarded([&] {
        need(tsv, "tsv");
        *tsv = dup(nlhb::cost_table(nlhb::default_cost_rows()));
    });
}

// ---------------------------------------------------------------- runs

nlhb_status nlhb_simulate(const nlhb_simulate_config* config, char** transcripts, uint64_t* sessions,
                          uint64_t* accepted) {
    return guarded([&] {
        need(config, "config");
        auto r = nlhb::simulate(simulate_config(config));
        if (transcripts != nullptr) {
            std::string text;
            for (const auto& t : r.transcripts) {
                text += nlhb::format_transcript(t);
            }
            *transcripts = dup(text);
        }
        if (sessions != nullptr) {
            *sessions = r.transcripts.size();
        }
        if (accepted != nullptr) {
            *accepted = r.accepted;
        }
    });
}

nlhb_status nlhb_transcripts_check(const char* text, uint64_t* count, uint64_t* accepted) {
    return guarded([&] {
        need(text, "text");
        std::istringstream in(text);
        auto ts = nlhb::read_transcripts(in);
        uint64_t acc = 0;
        for (const auto& t : ts) {
            nlhb::check_transcript(t);
            acc += t.decision == nlhb::Decision::Accept ? 1 : 0;
        }
        if (count != nullptr) {
            *count = ts.size();
        }
        if (accepted != nullptr) {
            *accepted = acc;
        }
    });
}

nlhb_status nlhb_keygen(const nlhb_simulate_config* config, const char* identity, char** record) {
    return guarded([&] {
        need(config, "config");
        need(identity, "identity");
        need(record, "record");
        auto sc = simulate_config(config);
        const std::size_t p =
            nlhb::is_nonlinear(sc.proto) ? (sc.spec.empty() ? sc.p : nlhb::NonlinearFunctionSpec::parse(sc.spec).window())
                                         : 0;
        nlhb::KeystoreEntry e;
        e.identity = identity;
        e.scheme = nlhb::make_scheme(sc.proto, sc.k, sc.n == 0 ? 1164 + p : sc.n, p, sc.eps, sc.epsp, sc.spec);
        nlhb::RandomSource rng(sc.seed);
        e.key = nlhb::SecretKey::generate(e.scheme.params, rng);
        *record = dup(nlhb::format_entry(e));
    });
}

// ---------------------------------------------------------------- reports

nlhb_status nlhb_attack(const nlhb_attack_config* config, nlhb_report** out) {
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        nlhb::AttackConfig ac;
        ac.attack = text_or(config->attack, "majority");
        ac.proto = nlhb::parse_protocol(text_or(config->proto, "hb"));
        ac.k = config->k != 0 ? config->k : ac.k;
        ac.n = config->n;
        ac.p = config->p != 0 ? config->p : ac.p;
        ac.eps = rational_or(config->eps, ac.eps);
        ac.epsp = rational_or(config->epsp, ac.epsp);
        ac.spec = text_or(config->spec, "");
        ac.b = config->b != 0 ? config->b : ac.b;
        ac.samples = config->samples;
        ac.reps = config->reps;
        ac.seed = config->seed;
        *out = new nlhb_report{nlhb::run_attack(ac)};
    });
}

nlhb_status nlhb_reduce(const nlhb_reduce_config* config, nlhb_report** out) {
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        nlhb::ReduceConfig rc;
        rc.mode = text_or(config->mode, "embed");
        rc.oracle = text_or(config->oracle, "");
        rc.k = config->k;
        rc.n = config->n;
        rc.n_prime = config->n_prime;
        rc.p = config->p != 0 ? config->p : rc.p;
        if (config->eps != nullptr) {
            rc.eps = nlhb::Rational::parse(config->eps);
        }
        if (config->epsp != nullptr) {
            rc.epsp = nlhb::Rational::parse(config->epsp);
        }
        rc.spec = text_or(config->spec, "");
        rc.trials = config->trials;
        rc.q = config->q;
        rc.delta = config->delta != 0 ? config->delta : rc.delta;
        rc.c = config->c != 0 ? config->c : rc.c;
        rc.seed = config->seed;
        rc.bounded_noise = config->bounded_noise != 0;
        *out = new nlhb_report{nlhb::run_reduction(rc)};
    });
}

void nlhb_report_free(nlhb_report* report) { delete report; }

int nlhb_report_success(const nlhb_report* report) { return report != nullptr && report->report.success ? 1 : 0; }

const char* nlhb_report_summary(const nlhb_report* report) {
    return report != nullptr ? report->report.summary.c_str() : "";
}

int nlhb_report_stat(const nlhb_report* report, const char* key, double* value) {
    if (report == nullptr || key == nullptr) {
        return 0;
    }
    auto v = report->report.find_stat(key);
    if (!v) {
        return 0;
    }
    if (value != nullptr) {
        *value = *v;
    }
    return 1;
}

nlhb_status nlhb_report_tsv(const nlhb_report* report, char** out) {
    return guarded([&] {
        need(report, "report");
        need(out, "out");
        *out = dup(report->report.tsv());
    });
}

// ---------------------------------------------------------------- service

nlhb_status nlhb_server_start(const nlhb_server_config* config, nlhb_server** out) {
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        nlhb::Keystore ks;
        if (config->keystore_path != nullptr) {
            ks = nlhb::Keystore::load(config->keystore_path);
        } else {
            need(config->keystore_text, "keystore_path or keystore_text");
            ks = nlhb::Keystore::parse(config->keystore_text);
        }
        nlhb::ServerOptions opts;
        opts.bind = text_or(config->bind, "127.0.0.1:0");
        opts.seed = config->seed;
        opts.mute_decisions = config->mute_decisions != 0;
        opts.transcript_log = text_or(config->transcript_log, "");
        if (config->io_timeout_ms != 0) {
            opts.io_timeout = std::chrono::milliseconds(config->io_timeout_ms);
        }
        *out = new nlhb_server{nlhb::AuthServer::start(std::move(ks), std::move(opts))};
    });
}

uint16_t nlhb_server_port(const nlhb_server* server) { return server != nullptr ? server->server->port() : 0; }

nlhb_status nlhb_server_wait(nlhb_server* server) {
    return guarded([&] {
        need(server, "server");
        server->server->wait();
    });
}

nlhb_status nlhb_server_stop(nlhb_server* server) {
    return guarded([&] {
        need(server, "server");
        server->server->stop();
    });
}

nlhb_status nlhb_server_transcripts(const nlhb_server* server, char** out) {
    return guarded([&] {
        need(server, "server");
        need(out, "out");
        std::string text;
        for (const auto& t : server->server->transcripts()) {
            text += t;
        }
        *out = dup(text);
    });
}

void nlhb_server_free(nlhb_server* server) { delete server; }

nlhb_status nlhb_authenticate(const char* server, const char* identity, const char* key_text, uint64_t seed,
                              uint32_t timeout_ms, nlhb_auth_result* out) {
    return guarded([&] {
        need(server, "server");
        need(identity, "identity");
        need(key_text, "key_text");
        need(out, "out");
        auto entry = nlhb::parse_entry(key_text);
        nlhb::ClientOptions opts;
        if (timeout_ms != 0) {
            opts.timeout = std::chrono::milliseconds(timeout_ms);
        }
        nlhb::RandomSource rng(seed);
        auto r = nlhb::authenticate(server, identity, entry, rng, opts);
        *out = nlhb_auth_result{r.accepted() ? 1 : 0, r.decision.muted ? 1 : 0, r.decision.distance};
    });
}

}  // extern "C"
