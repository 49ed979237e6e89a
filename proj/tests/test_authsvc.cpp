// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "nlhb/authsvc.hpp"
#include "nlhb/error.hpp"

using namespace nlhb;
using namespace std::chrono_literals;

namespace {

ServerOptions options_at(std::string bind, std::uint64_t seed = 0) {
    ServerOptions o;
    o.bind = std::move(bind);
    o.seed = seed;
    return o;
}

KeystoreEntry make_entry(const std::string& id, Protocol proto, std::size_t k, std::uint64_t seed) {
    const bool nl = is_nonlinear(proto);
    const std::size_t n = nl ? 259 : 256;
    auto params = ProtocolParams::make(proto, k, n, nl ? 3 : 0, Rational(1, 8), Rational(1, 4));
    KeystoreEntry e;
    e.identity = id;
    e.scheme = nl ? Scheme::make(params, NonlinearFunctionSpec::candidate()) : Scheme::linear(params);
    RandomSource rng(seed);
    e.key = SecretKey::generate(params, rng);
    return e;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

// Reads frames until the peer closes; returns what arrived.
std::vector<Frame> drain(int fd) {
    std::string buf;
    char chunk[4096];
    for (;;) {
        ssize_t got = ::recv(fd, chunk, sizeof chunk, 0);
        if (got <= 0) {
            break;
        }
        buf.append(chunk, static_cast<std::size_t>(got));
    }
    std::vector<Frame> out;
    std::string_view view(buf);
    for (;;) {
        auto r = decode_frame(view);
        if (r.status != DecodeStatus::Complete) {
            break;
        }
        out.push_back(r.frame);
        view.remove_prefix(r.consumed);
    }
    return out;
}

}  // namespace

TEST_CASE("frame codec round trip and header layout") {
    Frame f{FrameType::Challenge, std::string(300, 'x')};
    std::string bytes = encode_frame(f);
    REQUIRE(bytes.size() == 305);
    CHECK(static_cast<unsigned char>(bytes[0]) == 3);
    CHECK(static_cast<unsigned char>(bytes[1]) == 0);
    CHECK(static_cast<unsigned char>(bytes[2]) == 0);
    CHECK(static_cast<unsigned char>(bytes[3]) == 1);
    CHECK(static_cast<unsigned char>(bytes[4]) == 44);
    auto r = decode_frame(bytes);
    CHECK(r.status == DecodeStatus::Complete);
    CHECK(r.frame == f);
    CHECK(r.consumed == 305);
    CHECK(decode_frame(std::string_view(bytes).substr(0, 100)).status == DecodeStatus::NeedMore);
    CHECK(decode_frame(std::string("\x07\x00\x00\x00\x00", 5)).status == DecodeStatus::UnknownTag);
    CHECK(decode_frame(std::string("\x00", 1)).status == DecodeStatus::UnknownTag);
    CHECK(decode_frame(std::string("\x01\x01\x00\x00\x01", 5)).status == DecodeStatus::Oversize);
    CHECK(decode_frame(std::string("\x01\x01\x00\x00\x00", 5)).status == DecodeStatus::NeedMore);
}

TEST_CASE("decision payloads") {
    CHECK(format_decision({false, Decision::Accept, 12}) == "accept 12");
    CHECK(format_decision({false, Decision::Reject, 300}) == "reject 300");
    CHECK(format_decision({true, Decision::Accept, 3}) == "muted");
    auto d = parse_decision("reject 301");
    CHECK_FALSE(d.muted);
    CHECK(d.decision == Decision::Reject);
    CHECK(d.distance == 301);
    CHECK(parse_decision("muted").muted);
    CHECK_THROWS_AS(parse_decision("maybe 3"), Error);
    CHECK_THROWS_AS(parse_decision("accept x"), Error);
}

TEST_CASE("keystore round trip and validation") {
    Keystore ks({make_entry("alice", Protocol::NLHB, 16, 1), make_entry("bob", Protocol::NLHBPlus, 16, 2),
                 make_entry("carol", Protocol::HB, 16, 3), make_entry("dave", Protocol::HBPlus, 16, 4)});
    Keystore back = Keystore::parse(ks.format());
    REQUIRE(back.entries().size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(back.entries()[i] == ks.entries()[i]);
    }
    CHECK(back.find("bob") != nullptr);
    CHECK(back.find("eve") == nullptr);
    CHECK(parse_entry(format_entry(ks.entries()[0])) == ks.entries()[0]);

    std::string text = format_entry(ks.entries()[0]);
    CHECK_THROWS_AS(Keystore::parse(text + "\n" + text), Error);
    CHECK_THROWS_AS(Keystore::parse(text + "colour=blue\n"), Error);
    std::string no_s1 = text.substr(0, text.find("s1="));
    CHECK_THROWS_AS(Keystore::parse(no_s1), Error);
    std::string bad_spec = text;
    bad_spec.replace(bad_spec.find("spec="), 5, "spec=p=3; g=x1+");
    CHECK_THROWS_AS(Keystore::parse(bad_spec), Error);
    CHECK_THROWS_AS(parse_entry(ks.format()), Error);
    CHECK(Keystore::parse("# empty\n\n").entries().empty());
}

TEST_CASE("loopback session accepts the right key and rejects a wrong one") {
    auto alice = make_entry("alice", Protocol::NLHB, 32, 10);
    auto server = AuthServer::start(Keystore({alice}), options_at("127.0.0.1:0", 5));
    RandomSource rng(1);
    auto ok = authenticate(server->address(), "alice", alice, rng);
    CHECK(ok.accepted());
    CHECK(ok.decision.distance <= alice.scheme.params.u);

    auto wrong = alice;
    RandomSource other(99);
    wrong.key = SecretKey::generate(alice.scheme.params, other);
    auto bad = authenticate(server->address(), "alice", wrong, rng);
    CHECK_FALSE(bad.accepted());
    CHECK(bad.decision.distance > alice.scheme.params.u);
    CHECK(server->wait_for_transcripts(2, 2s));
}

TEST_CASE("logged transcript is byte-identical to an in-process session") {
    for (Protocol proto : {Protocol::HB, Protocol::HBPlus, Protocol::NLHB, Protocol::NLHBPlus}) {
        auto entry = make_entry("id", proto, 24, 20);
        char path[] = "/tmp/nlhb_log_XXXXXX";
        int tmp = ::mkstemp(path);
        REQUIRE(tmp >= 0);
        ::close(tmp);
        ServerOptions opts;
        opts.seed = 777;
        opts.transcript_log = path;
        auto server = AuthServer::start(Keystore({entry}), opts);
        for (std::uint64_t i = 0; i < 3; ++i) {
            RandomSource client(1000 + i);
            authenticate(server->address(), "id", entry, client);
        }
        REQUIRE(server->wait_for_transcripts(3, 2s));
        server->stop();
        std::string expected;
        for (std::uint64_t i = 0; i < 3; ++i) {
            RandomSource prover(1000 + i);
            RandomSource verifier(mix_seed(777, i));
            expected += format_transcript(run_session(entry.scheme, entry.key, prover, verifier));
        }
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == expected);
        std::remove(path);
    }
}

TEST_CASE("frames never carry the secret or the noise") {
    auto entry = make_entry("plus", Protocol::NLHBPlus, 32, 30);
    std::mutex mu;
    std::vector<Frame> seen;
    ServerOptions opts;
    opts.observer = [&](FrameDirection, const Frame& f) {
        std::lock_guard<std::mutex> lock(mu);
        seen.push_back(f);
    };
    auto server = AuthServer::start(Keystore({entry}), opts);
    ClientOptions copts;
    copts.observer = opts.observer;
    RandomSource rng(3);
    auto out = authenticate(server->address(), "plus", entry, rng, copts);
    CHECK(out.accepted());
    server->stop();
    BitVector noise = out.response ^ expected_response(entry.scheme, entry.key, &*out.blinding, out.challenge);
    const std::string s1 = hex_digits(entry.key.s1);
    const std::string s2 = hex_digits(*entry.key.s2);
    const std::string v = hex_digits(noise);
    REQUIRE(seen.size() == 10);
    for (const auto& f : seen) {
        CHECK(f.payload.find(s1) == std::string::npos);
        CHECK(f.payload.find(s2) == std::string::npos);
        CHECK(f.payload.find(v) == std::string::npos);
    }
}

TEST_CASE("unknown identity is a distinct failure") {
    auto alice = make_entry("alice", Protocol::NLHBPlus, 16, 40);
    auto server = AuthServer::start(Keystore({alice}), ServerOptions{});
    RandomSource rng(4);
    CHECK(code_of([&] { authenticate(server->address(), "mallory", alice, rng); }) == ErrorCode::UnknownIdentity);
    CHECK(server->transcripts().empty());
}

TEST_CASE("muted decisions hide the verdict but still log it") {
    auto alice = make_entry("alice", Protocol::NLHB, 16, 41);
    ServerOptions opts;
    opts.mute_decisions = true;
    auto server = AuthServer::start(Keystore({alice}), opts);
    RandomSource rng(5);
    auto out = authenticate(server->address(), "alice", alice, rng);
    CHECK(out.decision.muted);
    CHECK_FALSE(out.accepted());
    REQUIRE(server->wait_for_transcripts(1, 2s));
    CHECK(server->transcripts()[0].find("decision=accept") != std::string::npos);
}

TEST_CASE("malformed and truncated input gets ERROR, a close and no log") {
    auto alice = make_entry("alice", Protocol::NLHB, 16, 42);
    auto server = AuthServer::start(Keystore({alice}), ServerOptions{});

    SUBCASE("truncated frame") {
        int fd = connect_to(server->address(), 2s);
        std::string hello = encode_frame(Frame{FrameType::Hello, "alice"});
        send_all(fd, std::string_view(hello).substr(0, 7));
        ::shutdown(fd, SHUT_WR);
        auto frames = drain(fd);
        ::close(fd);
        REQUIRE(frames.size() == 1);
        CHECK(frames[0].type == FrameType::Error);
    }
    SUBCASE("unknown tag") {
        int fd = connect_to(server->address(), 2s);
        send_all(fd, std::string("\x09\x00\x00\x00\x00", 5));
        auto frames = drain(fd);
        ::close(fd);
        REQUIRE(frames.size() == 1);
        CHECK(frames[0].type == FrameType::Error);
    }
    SUBCASE("wrong-length response") {
        int fd = connect_to(server->address(), 2s);
        send_all(fd, encode_frame(Frame{FrameType::Hello, "alice"}));
        send_all(fd, encode_frame(Frame{FrameType::Response, to_hex(BitVector(10))}));
        auto frames = drain(fd);
        ::close(fd);
        REQUIRE(frames.size() == 2);
        CHECK(frames[0].type == FrameType::Challenge);
        CHECK(frames[1].type == FrameType::Error);
        CHECK(frames[1].payload.rfind("malformed", 0) == 0);
    }
    SUBCASE("out-of-order frame") {
        int fd = connect_to(server->address(), 2s);
        send_all(fd, encode_frame(Frame{FrameType::Response, "x"}));
        auto frames = drain(fd);
        ::close(fd);
        REQUIRE(frames.size() == 1);
        CHECK(frames[0].payload.rfind("protocol", 0) == 0);
    }
    SUBCASE("oversize payload closes without a frame") {
        int fd = connect_to(server->address(), 2s);
        send_all(fd, std::string("\x01\x01\x00\x00\x01", 5));
        auto frames = drain(fd);
        ::close(fd);
        CHECK(frames.empty());
    }
    server->stop();
    CHECK(server->transcripts().empty());
}

TEST_CASE("absent or silent servers") {
    auto alice = make_entry("alice", Protocol::NLHB, 16, 43);
    RandomSource rng(6);

    // Bind then close to find a port nobody listens on.
    int probe = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(probe, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(probe, reinterpret_cast<sockaddr*>(&addr), &len);
    const int port = ntohs(addr.sin_port);
    ::close(probe);
    CHECK(code_of([&] { authenticate("127.0.0.1:" + std::to_string(port), "alice", alice, rng); }) ==
          ErrorCode::Network);

    // A listener that accepts but never speaks.
    int silent = ::socket(AF_INET, SOCK_STREAM, 0);
    addr.sin_port = 0;
    ::bind(silent, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    ::listen(silent, 4);
    len = sizeof addr;
    ::getsockname(silent, reinterpret_cast<sockaddr*>(&addr), &len);
    ClientOptions opts;
    opts.timeout = 300ms;
    auto t0 = std::chrono::steady_clock::now();
    CHECK(code_of([&] {
              authenticate("127.0.0.1:" + std::to_string(ntohs(addr.sin_port)), "alice", alice, rng, opts);
          }) == ErrorCode::Timeout);
    CHECK(std::chrono::steady_clock::now() - t0 < 3s);
    ::close(silent);
}

TEST_CASE("concurrent clients each get their own session") {
    auto alice = make_entry("alice", Protocol::NLHBPlus, 32, 44);
    auto bob = make_entry("bob", Protocol::NLHB, 32, 45);
    auto server = AuthServer::start(Keystore({alice, bob}), ServerOptions{});
    std::vector<std::thread> threads;
    std::atomic<int> accepted{0};
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([&, i] {
            RandomSource rng(100 + static_cast<std::uint64_t>(i));
            const auto& who = i % 2 ? alice : bob;
            if (authenticate(server->address(), who.identity, who, rng).accepted()) {
                ++accepted;
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    CHECK(accepted.load() == 8);
    CHECK(server->wait_for_transcripts(8, 2s));
    CHECK(server->connections() == 8);
    for (const auto& record : server->transcripts()) {
        std::istringstream in(record);
        auto t = read_transcript(in);
        REQUIRE(t.has_value());
        CHECK_NOTHROW(check_transcript(*t));
    }
}

TEST_CASE("server rejects an unusable bind address") {
    CHECK(code_of([] { AuthServer::start(Keystore{}, options_at("127.0.0.1")); }) == ErrorCode::Argument);
    CHECK(code_of([] { AuthServer::start(Keystore{}, options_at("256.1.1.1:0")); }) == ErrorCode::Network);
}
