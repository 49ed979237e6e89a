// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlhb/keystore.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "nlhb/error.hpp"

namespace nlhb {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        fail(ErrorCode::Parse, "keystore: " + key + " is not an unsigned integer: '" + value + "'");
    }
    return out;
}

using Record = std::map<std::string, std::string>;

const std::string& field(const Record& r, const std::string& key) {
    auto it = r.find(key);
    if (it == r.end()) {
        fail(ErrorCode::Parse, "keystore: record is missing '" + key + "'");
    }
    return it->second;
}

KeystoreEntry entry_from_record(const Record& r) {
    static const char* known[] = {"identity", "proto", "k", "n", "p", "eps", "epsp", "spec", "s1", "s2"};
    for (const auto& [key, value] : r) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            fail(ErrorCode::Parse, "keystore: unknown field '" + key + "'");
        }
    }
    KeystoreEntry e;
    e.identity = field(r, "identity");
    require(!e.identity.empty(), ErrorCode::Parse, "keystore: empty identity");
    const Protocol proto = parse_protocol(field(r, "proto"));
    const std::size_t k = parse_size("k", field(r, "k"));
    const std::size_t n = parse_size("n", field(r, "n"));
    const std::size_t p = r.count("p") ? parse_size("p", r.at("p")) : 0;
    auto params = ProtocolParams::make(proto, k, n, p, Rational::parse(field(r, "eps")),
                                       Rational::parse(field(r, "epsp")));
    NonlinearFunctionSpec spec = NonlinearFunctionSpec::zero(0);
    if (is_nonlinear(proto)) {
        spec = NonlinearFunctionSpec::parse(field(r, "spec"));
    }
    e.scheme = Scheme::make(params, spec);
    e.key.s1 = bits_from_hex_digits(field(r, "s1"), k);
    if (is_plus(proto)) {
        e.key.s2 = bits_from_hex_digits(field(r, "s2"), k);
    } else {
        require(r.count("s2") == 0, ErrorCode::Parse, "keystore: s2 given for a single-secret protocol");
    }
    e.key.check(params);
    return e;
}

std::vector<Record> split_records(std::string_view text) {
    std::vector<Record> out;
    Record current;
    std::size_t line_no = 0;
    auto flush = [&] {
        if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    };
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) {
            flush();
            continue;
        }
        if (line.front() == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorCode::Parse, "keystore line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (!current.emplace(key, value).second) {
            fail(ErrorCode::Parse, "keystore line " + std::to_string(line_no) + ": duplicate field '" + key + "'");
        }
    }
    flush();
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Keystore::Keystore(std::vector<KeystoreEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (entries_[i].identity == entries_[j].identity) {
                fail(ErrorCode::Parse, "keystore: duplicate identity '" + entries_[i].identity + "'");
            }
        }
    }
}

Keystore Keystore::parse(std::string_view text) {
    std::vector<KeystoreEntry> entries;
    for (const auto& r : split_records(text)) {
        entries.push_back(entry_from_record(r));
    }
    return Keystore(std::move(entries));
}

Keystore Keystore::load(const std::string& path) { return parse(slurp(path)); }

const KeystoreEntry* Keystore::find(std::string_view identity) const {
    for (const auto& e : entries_) {
        if (e.identity == identity) {
            return &e;
        }
    }
    return nullptr;
}

std::string Keystore::format() const {
    std::string out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i != 0) {
            out += '\n';
        }
        out += format_entry(entries_[i]);
    }
    return out;
}

std::string format_entry(const KeystoreEntry& e) {
    const ProtocolParams& pp = e.scheme.params;
    std::ostringstream out;
    out << "identity=" << e.identity << '\n'
        << "proto=" << to_string(pp.proto) << '\n'
        << "k=" << pp.k << '\n'
        << "n=" << pp.n << '\n'
        << "p=" << pp.p << '\n'
        << "eps=" << pp.eps.to_string() << '\n'
        << "epsp=" << pp.epsp.to_string() << '\n';
    if (is_nonlinear(pp.proto)) {
        out << "spec=" << e.scheme.spec.to_string() << '\n';
    }
    out << "s1=" << hex_digits(e.key.s1) << '\n';
    if (e.key.s2) {
        out << "s2=" << hex_digits(*e.key.s2) << '\n';
    }
    return out.str();
}

KeystoreEntry parse_entry(std::string_view text) {
    auto records = split_records(text);
    require(records.size() == 1, ErrorCode::Parse, "key file must hold exactly one record");
    return entry_from_record(records.front());
}

KeystoreEntry load_entry(const std::string& path) { return parse_entry(slurp(path)); }

}  // namespace nlhb
