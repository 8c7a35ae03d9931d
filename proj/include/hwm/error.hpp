#pragma once

#include <stdexcept>
#include <string>

namespace hwm {

enum class ErrorCode {
  invalid_argument,
  dimension,       // fields or grids do not match
  domain,          // parameter outside the operator's admissible range
  config,          // config syntax, unknown key or invariant violation
  io,              // file cannot be opened, read or written
  format,          // bad magic, version mismatch, truncation
  blow_up,         // non-finite values during time stepping
  stability,       // dt outside the integrator's stability region
  non_contraction, // Picard iteration failed to contract
  internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace hwm
