// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// nlhb command-line front end. Links only the C interface.

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nlhb/nlhb.h"

namespace {

struct DomainError {
    nlhb_status status;
    std::string message;
};

struct UsageError {
    std::string message;
};

void check(nlhb_status st) {
    if (st != NLHB_OK) {
        throw DomainError{st, nlhb_last_error()};
    }
}

// Owns a string returned by the library.
class Owned {
  public:
    Owned() = default;
    ~Owned() { nlhb_string_free(p_); }
    Owned(const Owned&) = delete;
    Owned& operator=(const Owned&) = delete;
    char** out() { return &p_; }
    std::string str() const { return p_ != nullptr ? std::string(p_) : std::string(); }

  private:
    char* p_ = nullptr;
};

struct Global {
    std::string format = "tsv";
    std::string output;
    std::string config;
};

Global g;

const CLI::Validator kFraction(
    [](std::string& s) -> std::string {
        static const std::regex re("^[0-9]+(/[0-9]+)?$");
        if (std::regex_match(s, re)) {
            return {};
        }
        return "expected an exact fraction num/den, got '" + s + "'";
    },
    "FRACTION");

std::string fmt_double(double v) {
    if (std::isinf(v)) {
        return v < 0 ? "-inf" : "inf";
    }
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

// TSV -> space-aligned columns.
std::string align(const std::string& tsv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(tsv);
    std::string line;
    std::vector<std::size_t> width;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            auto tab = line.find('\t', start);
            cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) {
                break;
            }
            start = tab + 1;
        }
        if (width.size() < cells.size()) {
            width.resize(cells.size(), 0);
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            width[i] = std::max(width[i], cells[i].size());
        }
        rows.push_back(std::move(cells));
    }
    std::ostringstream out;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            out << r[i];
            if (i + 1 < r.size()) {
                out << std::string(width[i] - r[i].size() + 2, ' ');
            }
        }
        out << '\n';
    }
    return out.str();
}

void emit(const std::string& tsv) {
    const std::string text = g.format == "text" ? align(tsv) : tsv;
    if (g.output.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(g.output, std::ios::binary);
    if (!out) {
        throw DomainError{NLHB_ERR_IO, "cannot write '" + g.output + "'"};
    }
    out << text;
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) {
        return value;
    }
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << s << " (defaulted; pass --seed " << s << " to reproduce)\n";
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError{NLHB_ERR_IO, "cannot open '" + path + "'"};
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* opt_c(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::string tsv_pairs(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string out;
    for (const auto& [k, v] : rows) {
        out += k + "\t" + v + "\n";
    }
    return out;
}

std::string report_tsv(nlhb_report* r) {
    Owned tsv;
    check(nlhb_report_tsv(r, tsv.out()));
    return tsv.str() + "summary\t" + nlhb_report_summary(r) + "\n";
}

// ------------------------------------------------------------ subcommands

struct SimulateArgs {
    std::string proto = "nlhb";
    std::uint64_t k = 64;
    std::uint64_t n = 0;
    std::string eps = "1/4";
    std::string epsp = "87/250";
    std::string spec;
    std::uint64_t sessions = 10;
    std::uint64_t seed = 0;
    bool random_responder = false;
    std::string transcripts;
    CLI::Option* seed_opt = nullptr;
};

nlhb_simulate_config simulate_config(const SimulateArgs& a, std::uint64_t seed) {
    nlhb_simulate_config c{};
    c.proto = a.proto.c_str();
    c.k = a.k;
    c.n = a.n;
    c.eps = a.eps.c_str();
    c.epsp = a.epsp.c_str();
    c.spec = opt_c(a.spec);
    c.sessions = a.sessions;
    c.seed = seed;
    c.random_responder = a.random_responder ? 1 : 0;
    return c;
}

void run_simulate(const SimulateArgs& a) {
    const std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
    nlhb_simulate_config c = simulate_config(a, seed);
    Owned text;
    std::uint64_t sessions = 0;
    std::uint64_t accepted = 0;
    check(nlhb_simulate(&c, text.out(), &sessions, &accepted));
    if (!a.transcripts.empty()) {
        std::ofstream out(a.transcripts, std::ios::binary);
        if (!out) {
            throw DomainError{NLHB_ERR_IO, "cannot write '" + a.transcripts + "'"};
        }
        out << text.str();
    }
    emit(tsv_pairs({{"proto", a.proto},
                    {"seed", std::to_string(seed)},
                    {"sessions", std::to_string(sessions)},
                    {"accepted", std::to_string(accepted)},
                    {"rejected", std::to_string(sessions - accepted)}}));
}

struct KeygenArgs {
    SimulateArgs base;
    std::string identity;
};

void run_keygen(const KeygenArgs& a) {
    const std::uint64_t seed = resolve_seed(a.base.seed_opt, a.base.seed);
    nlhb_simulate_config c = simulate_config(a.base, seed);
    Owned record;
    check(nlhb_keygen(&c, a.identity.c_str(), record.out()));
    if (g.output.empty()) {
        std::cout << record.str();
    } else {
        std::ofstream out(g.output, std::ios::binary);
        out << record.str();
    }
}

struct AttackArgs {
    std::string attack = "majority";
    std::string proto = "hb";
    std::uint64_t k = 16;
    std::uint64_t n = 0;
    std::uint64_t p = 3;
    std::string eps = "1/8";
    std::string epsp = "1/4";
    std::string spec;
    std::uint64_t b = 8;
    std::uint64_t samples = 0;
    unsigned reps = 0;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void run_attack(const AttackArgs& a) {
    nlhb_attack_config c{};
    c.attack = a.attack.c_str();
    c.proto = a.proto.c_str();
    c.k = a.k;
    c.n = a.n;
    c.p = a.p;
    c.eps = a.eps.c_str();
    c.epsp = a.epsp.c_str();
    c.spec = opt_c(a.spec);
    c.b = a.b;
    c.samples = a.samples;
    c.reps = a.reps;
    c.seed = resolve_seed(a.seed_opt, a.seed);
    nlhb_report* r = nullptr;
    check(nlhb_attack(&c, &r));
    std::string out = report_tsv(r);
    nlhb_report_free(r);
    emit(out);
}

struct AnalyzeArgs {
    bool enumerate = false;
    bool all = false;
    std::vector<unsigned> windows{2, 3, 4};
    std::string spec;
    unsigned balance_n = 0;
};

void run_analyze(const AnalyzeArgs& a) {
    if (!a.enumerate && a.spec.empty()) {
        throw UsageError{"analyze needs --enumerate or --spec"};
    }
    std::string out;
    if (a.enumerate) {
        bool header = true;
        for (unsigned p : a.windows) {
            Owned tsv;
            check(nlhb_analyze_enumerate(p, a.all ? 1 : 0, tsv.out()));
            std::string body = tsv.str();
            if (!header) {
                body.erase(0, body.find('\n') + 1);
            }
            header = false;
            out += body;
        }
    }
    if (!a.spec.empty()) {
        nlhb_spec* spec = nullptr;
        check(nlhb_spec_parse(a.spec.c_str(), &spec));
        std::vector<std::pair<std::string, std::string>> rows;
        Owned desc;
        Owned exact;
        double bits = 0;
        nlhb_status st = nlhb_spec_describe(spec, desc.out());
        if (st == NLHB_OK) {
            st = nlhb_spec_merge_entropy(spec, &bits, exact.out());
        }
        nlhb_balance bal{};
        const unsigned n = a.balance_n != 0 ? a.balance_n : nlhb_spec_window(spec) + 13;
        if (st == NLHB_OK) {
            st = nlhb_spec_balance(spec, n, &bal);
        }
        nlhb_spec_free(spec);
        check(st);
        if (!out.empty()) {
            out += "\n";
        }
        rows = {{"function", desc.str()},
                {"merge_entropy_bits", fmt_double(bits)},
                {"merge_entropy_exact", exact.str()},
                {"balance_n", std::to_string(n)},
                {"balanced", bal.uniform ? "1" : "0"},
                {"expected_count", std::to_string(bal.expected_count)},
                {"min_count", std::to_string(bal.min_count)},
                {"max_count", std::to_string(bal.max_count)},
                {"distinct_outputs", std::to_string(bal.distinct_outputs)}};
        out += tsv_pairs(rows);
    }
    emit(out);
}

struct ParamsArgs {
    std::string eps = "1/4";
    std::string epsp = "87/250";
    double pfa = -80;
    double pfr = -40;
    std::uint64_t dd = 0;
};

void run_params(const ParamsArgs& a) {
    Owned eps;
    Owned epsp;
    check(nlhb_rational_normalize(a.eps.c_str(), eps.out()));
    check(nlhb_rational_normalize(a.epsp.c_str(), epsp.out()));
    std::vector<std::pair<std::string, std::string>> rows{{"eps", eps.str()}, {"epsp", epsp.str()}};
    std::uint64_t D = a.dd;
    std::uint64_t u = 0;
    double pfa = 0;
    double pfr = 0;
    if (D == 0) {
        nlhb_length_result r{};
        check(nlhb_find_min_length(a.eps.c_str(), a.epsp.c_str(), a.pfa, a.pfr, &r));
        D = r.D;
        u = r.u;
        pfa = r.pfa_log2;
        pfr = r.pfr_log2;
        rows.emplace_back("mode", "search");
        rows.emplace_back("D", std::to_string(D));
        rows.emplace_back("u", std::to_string(u));
        rows.emplace_back("pfa_log2", fmt_double(pfa));
        rows.emplace_back("pfr_log2", fmt_double(pfr));
        rows.emplace_back("scanned", std::to_string(r.scanned));
        rows.emplace_back("exact_checks", std::to_string(r.exact_checks));
        rows.emplace_back("pfa_increases", std::to_string(r.pfa_increases));
        rows.emplace_back("pfr_increases", std::to_string(r.pfr_increases));
    } else {
        check(nlhb_threshold(a.epsp.c_str(), D, &u));
        check(nlhb_false_accept(D, u, &pfa));
        check(nlhb_false_reject(D, a.eps.c_str(), u, &pfr));
        rows.emplace_back("mode", "evaluate");
        rows.emplace_back("D", std::to_string(D));
        rows.emplace_back("u", std::to_string(u));
        rows.emplace_back("pfa_log2", fmt_double(pfa));
        rows.emplace_back("pfr_log2", fmt_double(pfr));
    }
    rows.emplace_back("pfa_target_log2", fmt_double(a.pfa));
    rows.emplace_back("pfr_target_log2", fmt_double(a.pfr));
    if (a.pfa == std::floor(a.pfa) && a.pfr == std::floor(a.pfr)) {
        int fa = 0;
        int fr = 0;
        check(nlhb_false_accept_at_most(D, u, static_cast<long>(a.pfa), &fa));
        check(nlhb_false_reject_at_most(D, a.eps.c_str(), u, static_cast<long>(a.pfr), &fr));
        rows.emplace_back("pfa_certified", fa ? "1" : "0");
        rows.emplace_back("pfr_certified", fr ? "1" : "0");
    }
    emit(tsv_pairs(rows));
}

struct CostArgs {
    std::string proto;
    std::uint64_t k = 0;
    std::uint64_t dd = 1164;
    std::string spec;
    bool breakdown = false;
};

void run_cost(const CostArgs& a) {
    if (a.proto.empty()) {
        Owned tsv;
        check(nlhb_cost_table(tsv.out()));
        emit(tsv.str());
        return;
    }
    if (a.k == 0) {
        throw UsageError{"cost needs --k with --proto"};
    }
    nlhb_spec* spec = nullptr;
    if (!a.spec.empty()) {
        check(nlhb_spec_parse(a.spec.c_str(), &spec));
    } else if (a.proto.rfind("nlhb", 0) == 0) {
        check(nlhb_spec_candidate(&spec));
    }
    nlhb_op_count ops{};
    Owned breakdown;
    Owned desc;
    nlhb_status st = nlhb_count_ops(a.proto.c_str(), a.k, a.dd, spec, &ops, breakdown.out());
    if (st == NLHB_OK && spec != nullptr) {
        st = nlhb_spec_describe(spec, desc.out());
    }
    const unsigned p = nlhb_spec_window(spec);
    nlhb_spec_free(spec);
    check(st);
    std::ostringstream out;
    out << "protocol\tk\tD\tn\tfunction\tmultiplications\tadditions\n"
        << a.proto << '\t' << a.k << '\t' << a.dd << '\t' << a.dd + p << '\t' << (desc.str().empty() ? "-" : desc.str())
        << '\t' << ops.multiplications << '\t' << ops.additions << '\n';
    if (a.breakdown) {
        out << '\n' << breakdown.str();
    }
    emit(out.str());
}

struct ReduceArgs {
    std::string mode;
    std::string oracle;
    std::uint64_t k = 0;
    std::uint64_t n = 0;
    std::uint64_t n_prime = 0;
    std::uint64_t p = 3;
    std::string eps;
    std::string epsp;
    std::string spec;
    std::uint64_t trials = 0;
    std::uint64_t q = 0;
    double delta = 1.0;
    double c = 4.0;
    bool bounded_noise = false;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void run_reduce(const ReduceArgs& a) {
    nlhb_reduce_config c{};
    c.mode = a.mode.c_str();
    c.oracle = opt_c(a.oracle);
    c.k = a.k;
    c.n = a.n;
    c.n_prime = a.n_prime;
    c.p = a.p;
    c.eps = opt_c(a.eps);
    c.epsp = opt_c(a.epsp);
    c.spec = opt_c(a.spec);
    c.trials = a.trials;
    c.q = a.q;
    c.delta = a.delta;
    c.c = a.c;
    c.bounded_noise = a.bounded_noise ? 1 : 0;
    c.seed = resolve_seed(a.seed_opt, a.seed);
    nlhb_report* r = nullptr;
    check(nlhb_reduce(&c, &r));
    std::string out = report_tsv(r);
    nlhb_report_free(r);
    emit(out);
}

struct ServeArgs {
    std::string bind = "127.0.0.1:0";
    std::string keystore;
    std::uint64_t seed = 0;
    bool mute = false;
    std::string log;
    std::uint32_t timeout_ms = 10000;
    CLI::Option* seed_opt = nullptr;
};

void run_serve(const ServeArgs& a) {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    nlhb_server_config c{};
    c.bind = a.bind.c_str();
    c.keystore_path = a.keystore.c_str();
    c.seed = resolve_seed(a.seed_opt, a.seed);
    c.mute_decisions = a.mute ? 1 : 0;
    c.transcript_log = opt_c(a.log);
    c.io_timeout_ms = a.timeout_ms;
    nlhb_server* srv = nullptr;
    check(nlhb_server_start(&c, &srv));
    std::string host = a.bind.substr(0, a.bind.rfind(':'));
    if (host.empty() || host == "0.0.0.0") {
        host = "127.0.0.1";
    }
    std::cout << "listening\t" << host << ":" << nlhb_server_port(srv) << std::endl;
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        nlhb_server_stop(srv);
    });
    nlhb_status st = nlhb_server_wait(srv);
    waiter.join();
    nlhb_server_free(srv);
    check(st);
}

struct AuthArgs {
    std::string server;
    std::string identity;
    std::string key_file;
    std::uint64_t seed = 0;
    std::uint32_t timeout_ms = 10000;
    CLI::Option* seed_opt = nullptr;
};

std::string identity_from(const std::string& record) {
    std::istringstream in(record);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("identity=", 0) == 0) {
            return line.substr(9);
        }
    }
    return {};
}

void run_auth(const AuthArgs& a) {
    const std::string key = slurp(a.key_file);
    const std::string identity = a.identity.empty() ? identity_from(key) : a.identity;
    if (identity.empty()) {
        throw UsageError{"auth needs --identity (the key file has none)"};
    }
    nlhb_auth_result r{};
    check(nlhb_authenticate(a.server.c_str(), identity.c_str(), key.c_str(), resolve_seed(a.seed_opt, a.seed),
                            a.timeout_ms, &r));
    std::string decision = r.muted ? "muted" : (r.accepted ? "accept" : "reject");
    std::vector<std::pair<std::string, std::string>> rows{{"identity", identity}, {"decision", decision}};
    if (!r.muted) {
        rows.emplace_back("distance", std::to_string(r.distance));
    }
    emit(tsv_pairs(rows));
}

// ------------------------------------------------------------ config merge

std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> out;
    std::istringstream in(slurp(path));
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError{path + ":" + std::to_string(no) + ": expected key=value"};
        }
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

// Config values are spliced in right after the subcommand name so that
// explicit flags, which come later, take precedence.
std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::size_t at = args.size();
    CLI::App* sub = nullptr;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            sub = app.get_subcommand_no_throw(args[i]);
            if (sub != nullptr) {
                at = i + 1;
                break;
            }
        }
    }
    if (sub == nullptr) {
        return args;
    }
    std::vector<std::string> extra;
    for (const auto& [key, value] : read_config(path)) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw UsageError{"config key '" + key + "' is not an option of '" + sub->get_name() + "'"};
        }
        if (opt->get_expected_min() == 0) {
            if (truthy(value)) {
                extra.push_back("--" + key);
            }
        } else {
            extra.push_back("--" + key);
            extra.push_back(value);
        }
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlhb: HB-family authentication protocols, attacks and reductions", "nlhb"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"tsv", "text"}));
    app.add_option("--output,-o", g.output, "write the primary output to a file");
    app.add_option("--config", g.config, "key=value file merged under the subcommand's flags");

    const std::vector<std::string> protos{"hb", "hb+", "nlhb", "nlhb+"};

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "run seeded honest (or random-responder) sessions");
    s->add_option("--proto", sim.proto)->check(CLI::IsMember(protos));
    s->add_option("--k", sim.k, "secret length");
    s->add_option("--n", sim.n, "challenge width (default D + p with D = 1164)");
    s->add_option("--eps", sim.eps)->check(kFraction);
    s->add_option("--epsp", sim.epsp)->check(kFraction);
    s->add_option("--spec", sim.spec, "nonlinear function, e.g. \"p=3; g=x1x2+x2x3+x3x1\"");
    s->add_option("--sessions", sim.sessions);
    s->add_flag("--random-responder", sim.random_responder, "answer with uniform bits");
    s->add_option("--transcripts", sim.transcripts, "write transcript records here");
    sim.seed_opt = s->add_option("--seed", sim.seed);

    KeygenArgs kg;
    auto* kgc = app.add_subcommand("keygen", "write one keystore record with a fresh key");
    kgc->add_option("--identity", kg.identity)->required();
    kgc->add_option("--proto", kg.base.proto)->check(CLI::IsMember(protos));
    kgc->add_option("--k", kg.base.k);
    kgc->add_option("--n", kg.base.n);
    kgc->add_option("--eps", kg.base.eps)->check(kFraction);
    kgc->add_option("--epsp", kg.base.epsp)->check(kFraction);
    kgc->add_option("--spec", kg.base.spec);
    kg.base.seed_opt = kgc->add_option("--seed", kg.base.seed);

    AttackArgs at;
    auto* a = app.add_subcommand("attack", "plant a key and run a key-recovery attack");
    a->add_option("--attack", at.attack)->check(CLI::IsMember({"majority", "lf2", "noisefree"}));
    a->add_option("--proto", at.proto)->check(CLI::IsMember({"hb", "nlhb"}));
    a->add_option("--k", at.k);
    a->add_option("--n", at.n, "challenge width (default 64 + p)");
    a->add_option("--p", at.p, "window for nlhb");
    a->add_option("--b", at.b, "LF2 block size");
    a->add_option("--eps", at.eps)->check(kFraction);
    a->add_option("--epsp", at.epsp)->check(kFraction);
    a->add_option("--spec", at.spec);
    a->add_option("--samples", at.samples, "transcripts handed to passive attacks");
    a->add_option("--reps", at.reps, "majority-vote repetitions");
    at.seed_opt = a->add_option("--seed", at.seed);

    AnalyzeArgs an;
    auto* z = app.add_subcommand("analyze", "nonlinear-function analysis");
    z->add_flag("--enumerate", an.enumerate, "maximum merge-error entropy over all functions");
    z->add_flag("--all", an.all, "list every maximizer");
    z->add_option("--p", an.windows, "windows to enumerate")->check(CLI::Range(2, 4))->delimiter(',');
    z->add_option("--spec", an.spec, "describe one function");
    z->add_option("--balance-n", an.balance_n, "input width for the balance check (default p + 13)");

    ParamsArgs pa;
    auto* p = app.add_subcommand("params", "exact false-accept / false-reject tails");
    p->add_option("--eps", pa.eps)->check(kFraction);
    p->add_option("--epsp", pa.epsp)->check(kFraction);
    p->add_option("--pfa", pa.pfa, "log2 false-accept target");
    p->add_option("--pfr", pa.pfr, "log2 false-reject target");
    p->add_option("--dd", pa.dd, "evaluate at this D instead of searching");

    CostArgs co;
    auto* c = app.add_subcommand("cost", "prover operation counts");
    c->add_option("--proto", co.proto)->check(CLI::IsMember(protos));
    c->add_option("--k", co.k);
    c->add_option("--dd", co.dd, "response length D");
    c->add_option("--spec", co.spec);
    c->add_flag("--breakdown", co.breakdown, "per-phase counts");

    ReduceArgs re;
    auto* r = app.add_subcommand("reduce", "executable reductions");
    r->add_option("mode", re.mode)->required()->check(CLI::IsMember({"embed", "hybrid", "thm2", "thm3", "thm4"}));
    r->add_option("--oracle", re.oracle, "thm2: ideal|random; thm3: perfect|random; thm4: perfect|honest|random");
    r->add_option("--k", re.k);
    r->add_option("--n", re.n);
    r->add_option("--n-prime", re.n_prime, "LPN width for embed");
    r->add_option("--p", re.p);
    r->add_option("--eps", re.eps)->check(kFraction);
    r->add_option("--epsp", re.epsp)->check(kFraction);
    r->add_option("--spec", re.spec);
    r->add_option("--trials", re.trials);
    r->add_option("--q", re.q, "distinguisher batch / forger query count");
    r->add_option("--delta", re.delta, "assumed distinguisher advantage");
    r->add_option("--c", re.c, "round-count constant in N = c delta^-2 log2 k");
    r->add_flag("--bounded-noise", re.bounded_noise, "LPN noise with weight <= floor(eps n')");
    re.seed_opt = r->add_option("--seed", re.seed);

    ServeArgs sv;
    auto* v = app.add_subcommand("serve", "run the verifier service");
    v->add_option("--bind", sv.bind, "host:port (port 0 picks one)");
    v->add_option("--keystore", sv.keystore)->required();
    v->add_flag("--mute-decisions", sv.mute, "send \"muted\" instead of the verdict");
    v->add_option("--log", sv.log, "append-only transcript log");
    v->add_option("--timeout-ms", sv.timeout_ms);
    sv.seed_opt = v->add_option("--seed", sv.seed, "challenge seed; session i uses mix(seed, i)");

    AuthArgs au;
    auto* u = app.add_subcommand("auth", "authenticate against a running service");
    u->add_option("--server", au.server)->required();
    u->add_option("--identity", au.identity, "defaults to the key file's identity");
    u->add_option("--key-file", au.key_file)->required();
    u->add_option("--timeout-ms", au.timeout_ms);
    au.seed_opt = u->add_option("--seed", au.seed);

    try {
        std::vector<std::string> args = merge_config(app, std::vector<std::string>(argv + 1, argv + argc));
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
                return app.exit(e);
            }
            std::cerr << "error: " << e.what() << "\n\n" << app.help();
            return 2;
        }
        if (s->parsed()) {
            run_simulate(sim);
        } else if (kgc->parsed()) {
            run_keygen(kg);
        } else if (a->parsed()) {
            run_attack(at);
        } else if (z->parsed()) {
            run_analyze(an);
        } else if (p->parsed()) {
            run_params(pa);
        } else if (c->parsed()) {
            run_cost(co);
        } else if (r->parsed()) {
            run_reduce(re);
        } else if (v->parsed()) {
            run_serve(sv);
        } else if (u->parsed()) {
            run_auth(au);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << "\n\n" << app.help();
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error (" << nlhb_status_name(e.status) << "): " << e.message << "\n";
        return 1;
    }
    return 0;
}
