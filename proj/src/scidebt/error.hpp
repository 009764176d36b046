#pragma once

#include <stdexcept>
#include <string>

namespace scidebt {

enum class ErrorCode {
  invalid_argument = 1,
  io = 2,
  parse = 3,
  unsupported = 4,
  conflict = 5,
  not_found = 6,
};

// Every failure raised by the core carries a code so the C boundary can map
// it onto a status value without string matching.
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

}  // namespace scidebt
