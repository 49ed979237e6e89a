// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
//
// Keystore files: key=value lines, one record per identity, records
// separated by blank lines. Lines starting with '#' are comments.
//
//   identity=alice
//   proto=nlhb
//   k=64
//   n=1167
//   p=3
//   eps=1/4
//   epsp=87/250
//   spec=p=3; g=x1x2+x1x3+x2x3
//   s1=<hex digits, k bits>
//   s2=<hex digits>            ("+" variants only)
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlhb/protocols.hpp"

namespace nlhb {

struct KeystoreEntry {
    std::string identity;
    Scheme scheme;
    SecretKey key;

    friend bool operator==(const KeystoreEntry& a, const KeystoreEntry& b) {
        return a.identity == b.identity && a.scheme.params == b.scheme.params && a.scheme.spec == b.scheme.spec &&
               a.key == b.key;
    }
};

class Keystore {
  public:
    Keystore() = default;
    explicit Keystore(std::vector<KeystoreEntry> entries);

    static Keystore parse(std::string_view text);
    static Keystore load(const std::string& path);

    const KeystoreEntry* find(std::string_view identity) const;
    const std::vector<KeystoreEntry>& entries() const noexcept { return entries_; }

    std::string format() const;

  private:
    std::vector<KeystoreEntry> entries_;
};

std::string format_entry(const KeystoreEntry& entry);
/// Exactly one record; used for client key files.
KeystoreEntry parse_entry(std::string_view text);
KeystoreEntry load_entry(const std::string& path);

}  // namespace nlhb
