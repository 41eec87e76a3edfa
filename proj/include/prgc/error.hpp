// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_ERROR_HPP
#define PRGC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace prgc {

/// All toolkit failures carry a stable machine-readable code ("state-space",
/// "kind", "explosion", ...) next to the human-readable message. The CLI maps
/// codes to exit status 2.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace prgc

#endif
