#pragma once

#include <stdexcept>
#include <string>

namespace nscorn {

// Domain error with a stable machine-readable code ("InvalidInvolution",
// "Disconnected", ...). The CLI maps any Error to exit code 1; malformed
// command lines exit 2 before library code runs.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& what) {
  throw Error(std::move(code), what);
}

inline void require(bool ok, const char* code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace nscorn
