// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Networked verifier service and prover client.
//
// Frame: 1-byte tag, 4-byte big-endian payload length, payload.
// Session: HELLO(identity) -> [BLIND(B) for "+" variants] -> CHALLENGE(A)
//          -> RESPONSE(z) -> DECISION("accept <d>" | "reject <d>" | "muted").
// Matrices and vectors travel in the gf2 hex text form.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlhb/keystore.hpp"
#include "nlhb/protocols.hpp"

namespace nlhb {

enum class FrameType : std::uint8_t { Hello = 1, Blind = 2, Challenge = 3, Response = 4, Decision = 5, Error = 6 };
const char* to_string(FrameType type);

struct Frame {
    FrameType type = FrameType::Error;
    std::string payload;

    friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr std::size_t kMaxFramePayload = std::size_t{16} << 20;
inline constexpr std::size_t kFrameHeaderBytes = 5;

std::string encode_frame(const Frame& frame);

enum class DecodeStatus { Complete, NeedMore, UnknownTag, Oversize };
struct DecodeResult {
    DecodeStatus status = DecodeStatus::NeedMore;
    Frame frame;
    std::size_t consumed = 0;
};
DecodeResult decode_frame(std::string_view buffer);

enum class FrameDirection { Sent, Received };
using FrameObserver = std::function<void(FrameDirection, const Frame&)>;

struct DecisionMessage {
    bool muted = false;
    Decision decision = Decision::Reject;
    std::size_t distance = 0;
};
std::string format_decision(const DecisionMessage& d);
DecisionMessage parse_decision(std::string_view payload);

inline constexpr std::chrono::milliseconds kDefaultIoTimeout{10000};

struct ServerOptions {
    /// "host:port"; port 0 picks a free port.
    std::string bind = "127.0.0.1:0";
    /// Session i draws its challenge from RandomSource(mix_seed(seed, i)).
    std::uint64_t seed = 0;
    /// Send "muted" instead of the verdict (the decision is still logged).
    bool mute_decisions = false;
    /// Append-only transcript file; empty keeps the log in memory only.
    std::string transcript_log;
    std::chrono::milliseconds io_timeout = kDefaultIoTimeout;
    /// Called from session threads for every frame.
    FrameObserver observer;
};

class AuthServer {
  public:
    static std::unique_ptr<AuthServer> start(Keystore keystore, ServerOptions options);
    ~AuthServer();
    AuthServer(const AuthServer&) = delete;
    AuthServer& operator=(const AuthServer&) = delete;

    std::uint16_t port() const;
    /// "127.0.0.1:<port>" style address clients can dial.
    std::string address() const;

    /// Blocks until stop() is called from another thread.
    void wait();
    /// Idempotent; joins every session thread.
    void stop();

    std::size_t connections() const;
    /// Records in completion order, each in the transcript text format.
    std::vector<std::string> transcripts() const;
    /// Waits until at least `count` records exist; false on timeout.
    bool wait_for_transcripts(std::size_t count, std::chrono::milliseconds timeout) const;

    struct Impl;

  private:
    explicit AuthServer(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

struct ClientOptions {
    std::chrono::milliseconds timeout = kDefaultIoTimeout;
    FrameObserver observer;
};

struct AuthOutcome {
    DecisionMessage decision;
    std::optional<BitMatrix> blinding;
    BitMatrix challenge;
    BitVector response;

    bool accepted() const noexcept { return !decision.muted && decision.decision == Decision::Accept; }
};

/// Prover side of one handshake. Throws Network (refused or reset),
/// Timeout, UnknownIdentity, MalformedResponse or Protocol.
AuthOutcome authenticate(const std::string& server, const std::string& identity, const KeystoreEntry& key,
                         RandomSource& rng, const ClientOptions& options = {});

/// Connected TCP socket to "host:port"; the caller owns the descriptor.
int connect_to(const std::string& address, std::chrono::milliseconds timeout);
/// Writes all bytes; false if the peer went away.
bool send_all(int fd, std::string_view bytes);

}  // namespace nlhb
