// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/authsvc.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <condition_variable>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "nlhb/error.hpp"

namespace nlhb {

using Clock = std::chrono::steady_clock;

const char* to_string(FrameType type) {
    switch (type) {
        case FrameType::Hello: return "HELLO";
        case FrameType::Blind: return "BLIND";
        case FrameType::Challenge: return "CHALLENGE";
        case FrameType::Response: return "RESPONSE";
        case FrameType::Decision: return "DECISION";
        case FrameType::Error: return "ERROR";
    }
    return "?";
}

std::string encode_frame(const Frame& frame) {
    require(frame.payload.size() <= kMaxFramePayload, ErrorCode::Range, "frame payload exceeds 16 MiB");
    std::string out;
    out.reserve(kFrameHeaderBytes + frame.payload.size());
    const auto len = static_cast<std::uint32_t>(frame.payload.size());
    out.push_back(static_cast<char>(frame.type));
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<char>((len >> shift) & 0xff));
    }
    out += frame.payload;
    return out;
}

DecodeResult decode_frame(std::string_view buffer) {
    DecodeResult r;
    if (buffer.empty()) {
        return r;
    }
    const auto tag = static_cast<std::uint8_t>(buffer[0]);
    if (tag < 1 || tag > 6) {
        r.status = DecodeStatus::UnknownTag;
        return r;
    }
    if (buffer.size() < kFrameHeaderBytes) {
        return r;
    }
    std::uint32_t len = 0;
    for (int i = 1; i <= 4; ++i) {
        len = (len << 8) | static_cast<std::uint8_t>(buffer[i]);
    }
    if (len > kMaxFramePayload) {
        r.status = DecodeStatus::Oversize;
        return r;
    }
    if (buffer.size() < kFrameHeaderBytes + len) {
        return r;
    }
    r.status = DecodeStatus::Complete;
    r.frame.type = static_cast<FrameType>(tag);
    r.frame.payload = std::string(buffer.substr(kFrameHeaderBytes, len));
    r.consumed = kFrameHeaderBytes + len;
    return r;
}

std::string format_decision(const DecisionMessage& d) {
    if (d.muted) {
        return "muted";
    }
    return std::string(d.decision == Decision::Accept ? "accept " : "reject ") + std::to_string(d.distance);
}

DecisionMessage parse_decision(std::string_view payload) {
    DecisionMessage d;
    if (payload == "muted") {
        d.muted = true;
        return d;
    }
    auto sp = payload.find(' ');
    require(sp != std::string_view::npos, ErrorCode::Protocol, "malformed DECISION payload");
    auto word = payload.substr(0, sp);
    if (word == "accept") {
        d.decision = Decision::Accept;
    } else if (word == "reject") {
        d.decision = Decision::Reject;
    } else {
        fail(ErrorCode::Protocol, "malformed DECISION payload");
    }
    auto num = payload.substr(sp + 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), d.distance);
    require(ec == std::errc() && ptr == num.data() + num.size() && !num.empty(), ErrorCode::Protocol,
            "malformed DECISION distance");
    return d;
}

// ------------------------------------------------------------------ sockets

namespace {

struct HostPort {
    std::string host;
    std::string port;
};

HostPort split_address(const std::string& address) {
    auto colon = address.rfind(':');
    require(colon != std::string::npos && colon + 1 < address.size(), ErrorCode::Argument,
            "address must be host:port");
    HostPort hp{address.substr(0, colon), address.substr(colon + 1)};
    if (hp.host.empty()) {
        hp.host = "0.0.0.0";
    }
    return hp;
}

addrinfo* resolve(const HostPort& hp, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = passive ? AI_PASSIVE : 0;
    addrinfo* res = nullptr;
    int rc = getaddrinfo(hp.host.c_str(), hp.port.c_str(), &hints, &res);
    if (rc != 0 || res == nullptr) {
        fail(ErrorCode::Network, "cannot resolve '" + hp.host + ":" + hp.port + "': " + gai_strerror(rc));
    }
    return res;
}

class Fd {
  public:
    explicit Fd(int fd = -1) : fd_(fd) {}
    ~Fd() { reset(); }
    Fd(Fd&& o) noexcept : fd_(o.release()) {}
    Fd& operator=(Fd&& o) noexcept {
        if (this != &o) {
            reset(o.release());
        }
        return *this;
    }
    int get() const { return fd_; }
    int release() {
        int f = fd_;
        fd_ = -1;
        return f;
    }
    void reset(int fd = -1) {
        if (fd_ >= 0) {
            ::close(fd_);
        }
        fd_ = fd;
    }

  private:
    int fd_;
};

int remaining_ms(Clock::time_point deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return left < 0 ? 0 : static_cast<int>(left);
}

enum class ReadStatus { Ok, Closed, Truncated, UnknownTag, Oversize, Timeout, Failed };

// Buffered frame reader over a blocking socket with poll deadlines.
class FrameReader {
  public:
    explicit FrameReader(int fd) : fd_(fd) {}

    ReadStatus read(Frame& out, Clock::time_point deadline) {
        for (;;) {
            DecodeResult r = decode_frame(buffer_);
            if (r.status == DecodeStatus::Complete) {
                out = std::move(r.frame);
                buffer_.erase(0, r.consumed);
                return ReadStatus::Ok;
            }
            if (r.status == DecodeStatus::UnknownTag) {
                return ReadStatus::UnknownTag;
            }
            if (r.status == DecodeStatus::Oversize) {
                return ReadStatus::Oversize;
            }
            pollfd p{fd_, POLLIN, 0};
            int rc = ::poll(&p, 1, remaining_ms(deadline));
            if (rc < 0 && errno == EINTR) {
                continue;
            }
            if (rc == 0) {
                return ReadStatus::Timeout;
            }
            if (rc < 0) {
                return ReadStatus::Failed;
            }
            char chunk[65536];
            ssize_t got = ::recv(fd_, chunk, sizeof chunk, 0);
            if (got < 0 && errno == EINTR) {
                continue;
            }
            if (got < 0) {
                return ReadStatus::Failed;
            }
            if (got == 0) {
                return buffer_.empty() ? ReadStatus::Closed : ReadStatus::Truncated;
            }
            buffer_.append(chunk, static_cast<std::size_t>(got));
        }
    }

  private:
    int fd_;
    std::string buffer_;
};

const char* describe(ReadStatus s) {
    switch (s) {
        case ReadStatus::Ok: return "ok";
        case ReadStatus::Closed: return "connection closed";
        case ReadStatus::Truncated: return "truncated frame";
        case ReadStatus::UnknownTag: return "unknown frame tag";
        case ReadStatus::Oversize: return "frame payload exceeds 16 MiB";
        case ReadStatus::Timeout: return "timed out";
        case ReadStatus::Failed: return "socket error";
    }
    return "?";
}

bool send_frame(int fd, const Frame& f, const FrameObserver& observer) {
    if (observer) {
        observer(FrameDirection::Sent, f);
    }
    return send_all(fd, encode_frame(f));
}

}  // namespace

bool send_all(int fd, std::string_view bytes) {
    while (!bytes.empty()) {
        ssize_t put = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
        if (put < 0 && errno == EINTR) {
            continue;
        }
        if (put <= 0) {
            return false;
        }
        bytes.remove_prefix(static_cast<std::size_t>(put));
    }
    return true;
}

int connect_to(const std::string& address, std::chrono::milliseconds timeout) {
    HostPort hp = split_address(address);
    addrinfo* res = resolve(hp, false);
    Fd fd(::socket(res->ai_family, res->ai_socktype, res->ai_protocol));
    if (fd.get() < 0) {
        freeaddrinfo(res);
        fail(ErrorCode::Network, std::string("socket: ") + std::strerror(errno));
    }
    const int flags = ::fcntl(fd.get(), F_GETFL, 0);
    ::fcntl(fd.get(), F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd.get(), res->ai_addr, res->ai_addrlen);
    freeaddrinfo(res);
    if (rc < 0 && errno != EINPROGRESS) {
        fail(ErrorCode::Network, "connect to " + address + ": " + std::strerror(errno));
    }
    if (rc < 0) {
        pollfd p{fd.get(), POLLOUT, 0};
        int ready = ::poll(&p, 1, static_cast<int>(timeout.count()));
        if (ready == 0) {
            fail(ErrorCode::Timeout, "connect to " + address + " timed out");
        }
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
        if (ready < 0 || err != 0) {
            fail(ErrorCode::Network, "connect to " + address + ": " + std::strerror(err != 0 ? err : errno));
        }
    }
    ::fcntl(fd.get(), F_SETFL, flags);
    int one = 1;
    ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return fd.release();
}

// ------------------------------------------------------------------ server

struct AuthServer::Impl {
    Keystore keystore;
    ServerOptions options;
    Fd listener;
    std::uint16_t port = 0;
    std::atomic<bool> stopping{false};
    std::thread acceptor;

    mutable std::mutex mu;
    mutable std::condition_variable cv;
    std::vector<std::thread> sessions;
    std::set<int> live;
    std::vector<std::string> log;
    std::size_t accepted = 0;
    bool stopped = false;

    void accept_loop();
    void run_session(int fd, std::size_t index);
    void handle(int fd, std::size_t index);
    void append_log(const std::string& record);
};

namespace {

void send_error(int fd, const std::string& kind, const std::string& message, const FrameObserver& observer) {
    send_frame(fd, Frame{FrameType::Error, kind + ": " + message}, observer);
}

// Half-close and drain so a queued ERROR is not lost to a reset.
void linger_close(int fd) {
    ::shutdown(fd, SHUT_WR);
    char sink[4096];
    auto deadline = Clock::now() + std::chrono::milliseconds(200);
    for (;;) {
        pollfd p{fd, POLLIN, 0};
        if (::poll(&p, 1, remaining_ms(deadline)) <= 0) {
            break;
        }
        if (::recv(fd, sink, sizeof sink, 0) <= 0) {
            break;
        }
    }
}

}  // namespace

void AuthServer::Impl::append_log(const std::string& record) {
    std::lock_guard<std::mutex> lock(mu);
    if (!options.transcript_log.empty()) {
        std::ofstream out(options.transcript_log, std::ios::app | std::ios::binary);
        out << record;
    }
    log.push_back(record);
    cv.notify_all();
}

void AuthServer::Impl::handle(int fd, std::size_t index) {
    const FrameObserver& obs = options.observer;
    const auto deadline = Clock::now() + options.io_timeout;
    FrameReader reader(fd);
    Frame f;

    auto expect = [&](FrameType type) -> bool {
        ReadStatus st = reader.read(f, deadline);
        if (st == ReadStatus::Oversize || st == ReadStatus::Closed || st == ReadStatus::Failed) {
            return false;
        }
        if (st != ReadStatus::Ok) {
            send_error(fd, st == ReadStatus::Timeout ? "timeout" : "malformed", describe(st), obs);
            linger_close(fd);
            return false;
        }
        if (obs) {
            obs(FrameDirection::Received, f);
        }
        if (f.type != type) {
            send_error(fd, "protocol", std::string("expected ") + to_string(type) + ", got " + to_string(f.type), obs);
            linger_close(fd);
            return false;
        }
        return true;
    };

    if (!expect(FrameType::Hello)) {
        return;
    }
    const KeystoreEntry* entry = keystore.find(f.payload);
    if (entry == nullptr) {
        send_error(fd, "unknown_identity", "no key for identity '" + f.payload + "'", obs);
        linger_close(fd);
        return;
    }
    const Scheme& scheme = entry->scheme;
    const ProtocolParams& pp = scheme.params;
    RandomSource rng(mix_seed(options.seed, index));

    std::optional<BitMatrix> b;
    if (is_plus(pp.proto)) {
        if (!expect(FrameType::Blind)) {
            return;
        }
        try {
            b = parse_bitmatrix(f.payload);
            require(b->rows() == pp.k && b->cols() == pp.n, ErrorCode::Dimension, "blinding matrix must be k x n");
        } catch (const Error& e) {
            send_error(fd, "malformed", e.what(), obs);
            linger_close(fd);
            return;
        }
    }
    const BitMatrix a = draw_challenge(pp, rng);
    if (!send_frame(fd, Frame{FrameType::Challenge, to_hex(a)}, obs)) {
        return;
    }
    if (!expect(FrameType::Response)) {
        return;
    }
    BitVector z;
    Verdict v;
    try {
        z = parse_bitvector(f.payload);
        v = verify(scheme, entry->key, b ? &*b : nullptr, a, z);
    } catch (const Error& e) {
        send_error(fd, "malformed", e.what(), obs);
        linger_close(fd);
        return;
    }
    append_log(format_transcript(make_transcript(scheme, b, a, z, v)));
    DecisionMessage d{options.mute_decisions, v.decision, v.distance};
    send_frame(fd, Frame{FrameType::Decision, format_decision(d)}, obs);
    linger_close(fd);
}

void AuthServer::Impl::run_session(int fd, std::size_t index) {
    try {
        handle(fd, index);
    } catch (...) {
        // A session failure never takes the service down.
    }
    std::lock_guard<std::mutex> lock(mu);
    live.erase(fd);
    ::close(fd);
}

void AuthServer::Impl::accept_loop() {
    while (!stopping.load()) {
        pollfd p{listener.get(), POLLIN, 0};
        int rc = ::poll(&p, 1, 50);
        if (rc <= 0) {
            continue;
        }
        int fd = ::accept(listener.get(), nullptr, nullptr);
        if (fd < 0) {
            continue;
        }
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        std::lock_guard<std::mutex> lock(mu);
        if (stopping.load()) {
            ::close(fd);
            break;
        }
        const std::size_t index = accepted++;
        live.insert(fd);
        sessions.emplace_back([this, fd, index] { run_session(fd, index); });
    }
}

AuthServer::AuthServer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

std::unique_ptr<AuthServer> AuthServer::start(Keystore keystore, ServerOptions options) {
    auto impl = std::make_unique<Impl>();
    impl->keystore = std::move(keystore);
    impl->options = std::move(options);
    require(impl->options.io_timeout.count() > 0, ErrorCode::Argument, "io timeout must be positive");
    HostPort hp = split_address(impl->options.bind);
    addrinfo* res = resolve(hp, true);
    impl->listener.reset(::socket(res->ai_family, res->ai_socktype, res->ai_protocol));
    if (impl->listener.get() < 0) {
        freeaddrinfo(res);
        fail(ErrorCode::Network, std::string("socket: ") + std::strerror(errno));
    }
    int one = 1;
    ::setsockopt(impl->listener.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(impl->listener.get(), res->ai_addr, res->ai_addrlen) < 0) {
        int err = errno;
        freeaddrinfo(res);
        fail(ErrorCode::Network, "bind " + impl->options.bind + ": " + std::strerror(err));
    }
    freeaddrinfo(res);
    if (::listen(impl->listener.get(), 64) < 0) {
        fail(ErrorCode::Network, std::string("listen: ") + std::strerror(errno));
    }
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    ::getsockname(impl->listener.get(), reinterpret_cast<sockaddr*>(&addr), &len);
    impl->port = ntohs(addr.sin_port);
    Impl* raw = impl.get();
    impl->acceptor = std::thread([raw] { raw->accept_loop(); });
    return std::unique_ptr<AuthServer>(new AuthServer(std::move(impl)));
}

AuthServer::~AuthServer() { stop(); }

std::uint16_t AuthServer::port() const { return impl_->port; }

std::string AuthServer::address() const {
    HostPort hp = split_address(impl_->options.bind);
    std::string host = hp.host == "0.0.0.0" ? "127.0.0.1" : hp.host;
    return host + ":" + std::to_string(impl_->port);
}

void AuthServer::wait() {
    std::unique_lock<std::mutex> lock(impl_->mu);
    impl_->cv.wait(lock, [this] { return impl_->stopped; });
}

void AuthServer::stop() {
    if (impl_->stopping.exchange(true)) {
        std::unique_lock<std::mutex> lock(impl_->mu);
        impl_->cv.wait(lock, [this] { return impl_->stopped; });
        return;
    }
    if (impl_->acceptor.joinable()) {
        impl_->acceptor.join();
    }
    std::vector<std::thread> threads;
    {
        std::lock_guard<std::mutex> lock(impl_->mu);
        for (int fd : impl_->live) {
            ::shutdown(fd, SHUT_RDWR);
        }
        threads.swap(impl_->sessions);
    }
    for (auto& t : threads) {
        t.join();
    }
    impl_->listener.reset();
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->stopped = true;
    impl_->cv.notify_all();
}

std::size_t AuthServer::connections() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->accepted;
}

std::vector<std::string> AuthServer::transcripts() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->log;
}

bool AuthServer::wait_for_transcripts(std::size_t count, std::chrono::milliseconds timeout) const {
    std::unique_lock<std::mutex> lock(impl_->mu);
    return impl_->cv.wait_for(lock, timeout, [&] { return impl_->log.size() >= count; });
}

// ------------------------------------------------------------------ client

namespace {

[[noreturn]] void raise_server_error(const std::string& payload) {
    auto colon = payload.find(':');
    std::string kind = payload.substr(0, colon);
    std::string message = "server: " + payload;
    if (kind == "unknown_identity") {
        fail(ErrorCode::UnknownIdentity, message);
    }
    if (kind == "malformed") {
        fail(ErrorCode::MalformedResponse, message);
    }
    if (kind == "timeout") {
        fail(ErrorCode::Timeout, message);
    }
    fail(ErrorCode::Protocol, message);
}

}  // namespace

AuthOutcome authenticate(const std::string& server, const std::string& identity, const KeystoreEntry& key,
                         RandomSource& rng, const ClientOptions& options) {
    const Scheme& scheme = key.scheme;
    const ProtocolParams& pp = scheme.params;
    key.key.check(pp);
    require(options.timeout.count() > 0, ErrorCode::Argument, "timeout must be positive");
    Fd fd(connect_to(server, options.timeout));
    const auto deadline = Clock::now() + options.timeout;
    FrameReader reader(fd.get());
    const FrameObserver& obs = options.observer;

    auto receive = [&](FrameType want) -> Frame {
        Frame f;
        ReadStatus st = reader.read(f, deadline);
        if (st == ReadStatus::Timeout) {
            fail(ErrorCode::Timeout, "no " + std::string(to_string(want)) + " from " + server + " within " +
                                         std::to_string(options.timeout.count()) + " ms");
        }
        if (st == ReadStatus::Closed || st == ReadStatus::Failed) {
            fail(ErrorCode::Network, std::string("server closed the connection: ") + describe(st));
        }
        if (st != ReadStatus::Ok) {
            fail(ErrorCode::Protocol, std::string("bad frame from server: ") + describe(st));
        }
        if (obs) {
            obs(FrameDirection::Received, f);
        }
        if (f.type == FrameType::Error) {
            raise_server_error(f.payload);
        }
        if (f.type != want) {
            fail(ErrorCode::Protocol, std::string("expected ") + to_string(want) + ", got " + to_string(f.type));
        }
        return f;
    };

    AuthOutcome out;
    bool sent = send_frame(fd.get(), Frame{FrameType::Hello, identity}, obs);
    if (is_plus(pp.proto)) {
        out.blinding = draw_blinding(pp, rng);
        sent = sent && send_frame(fd.get(), Frame{FrameType::Blind, to_hex(*out.blinding)}, obs);
    }
    // A failed write still leaves any ERROR the server queued readable.
    Frame challenge = receive(FrameType::Challenge);
    if (!sent) {
        fail(ErrorCode::Network, "connection lost while sending");
    }
    try {
        out.challenge = parse_bitmatrix(challenge.payload);
    } catch (const Error& e) {
        fail(ErrorCode::Protocol, std::string("malformed CHALLENGE: ") + e.what());
    }
    require(out.challenge.rows() == pp.k && out.challenge.cols() == pp.n, ErrorCode::Protocol,
            "CHALLENGE dimensions disagree with the key parameters");
    out.response = respond(scheme, key.key, out.blinding ? &*out.blinding : nullptr, out.challenge, rng);
    if (!send_frame(fd.get(), Frame{FrameType::Response, to_hex(out.response)}, obs)) {
        fail(ErrorCode::Network, "connection lost while sending RESPONSE");
    }
    out.decision = parse_decision(receive(FrameType::Decision).payload);
    return out;
}

}  // namespace nlhb
