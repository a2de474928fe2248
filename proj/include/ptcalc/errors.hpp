#pragma once

#include <stdexcept>
#include <string>

namespace ptcalc {

// Three failure families, matching the CLI exit-code contract:
//   InputError   -> bad scenario data / malformed query / contract violation (exit 1)
//   ConfigError  -> scenario parsed fine but is incomplete or inconsistent for
//                   the requested computation (missing weight entry, window too
//                   small, ...) (exit 1)
//   CertifyError -> an internal certification step failed: a fit did not
//                   reproduce held-out samples, an annihilator check failed,
//                   a primitivity check failed, ... (exit 2)
// All carry a free-form message; where we have one, we append a witness
// (offending n, field path, ...) into the message itself so it always reaches
// the user.

struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CertifyError : std::runtime_error {
  explicit CertifyError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ptcalc
