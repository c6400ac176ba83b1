#pragma once

#include <stdexcept>
#include <string>

namespace homkit {

// Error taxonomy mirrored by the CLI exit codes: precondition -> 2, budget -> 3.
enum class ErrorKind { Precondition, Budget, Parse, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_precondition(const std::string& msg) {
  throw Error(ErrorKind::Precondition, msg);
}
[[noreturn]] inline void throw_budget(const std::string& msg) {
  throw Error(ErrorKind::Budget, msg);
}
[[noreturn]] inline void throw_parse(const std::string& msg) {
  throw Error(ErrorKind::Parse, msg);
}
[[noreturn]] inline void throw_internal(const std::string& msg) {
  throw Error(ErrorKind::Internal, msg);
}

}  // namespace homkit
