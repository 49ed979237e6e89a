// Copyright 2026 The nlhb Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nlhb {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
    Argument = 1,
    Dimension,
    Parse,
    Range,
    Singular,
    Io,
    Network,
    Timeout,
    Protocol,
    UnknownIdentity,
    MalformedResponse,
    InsufficientSamples,
    Unsupported,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const char* what) {
    if (!condition) {
        throw Error(code, what);
    }
}

}  // namespace nlhb
