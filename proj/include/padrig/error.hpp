#pragma once

#include <stdexcept>
#include <string>

namespace padrig {

enum class ErrorKind {
  input,          // malformed data, schema violations, unmet preconditions on inputs
  precision,      // not enough p-adic or x-adic precision to continue soundly
  convergence,    // a series is not known to converge under the given data
  condition,      // a mathematical hypothesis fails (ramified denominators, ...)
  inconsistency,  // data contradicts a theorem the computation relies on
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace padrig
