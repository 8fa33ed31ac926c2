#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtwnn {

enum class ErrorKind {
  invalid_argument,  // caller broke a precondition
  domain,            // input data makes the operation undefined (zero variance etc.)
  io,                // filesystem / stream failure
  parse,             // malformed file contents
  internal,          // should-not-happen states
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Shortest round-trip decimal form of a double; locale-independent and
// byte-stable, which the deterministic-output contract depends on.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw Error(ErrorKind::internal, "double formatting failed");
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw Error(ErrorKind::internal, "integer formatting failed");
  return std::string(buf, res.ptr);
}

}  // namespace gtwnn
