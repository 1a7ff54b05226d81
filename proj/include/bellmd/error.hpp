#pragma once

#include <stdexcept>
#include <string>

namespace bellmd {

enum class ErrorKind {
  Validation,  // input violates a type invariant
  Dimension,   // mismatched sizes
  Domain,      // argument outside the mathematical domain
  Infeasible,  // combination of arguments no local model can realize
  Resource,    // input exceeds a configured size cap
  Invariant,   // internal guarantee failed; indicates a bug
  Parse,       // malformed model or record document
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

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

}  // namespace bellmd
