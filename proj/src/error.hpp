#pragma once

#include <stdexcept>
#include <string>

namespace powertail {

// Failure classes, kept coarse on purpose: they map 1:1 onto the C API status
// codes and the CLI exit codes.
enum class ErrorCode {
  invalid = 1,     // bad argument / bad config
  data = 2,        // malformed input data
  numeric = 3,     // numerical failure (no root, no convergence, overflow)
  degenerate = 4,  // zero-variance input where a scale is required
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace powertail
