#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fdmimo {

enum class ErrorKind {
  InvalidSpec,
  InvalidInput,
  InsufficientData,
  Alignment,
  InvalidEdge,
  Shape,
  DegenerateInput,
  Numeric,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace fdmimo
