#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "padrig/error.hpp"
#include "padrig/frobenius.hpp"

namespace padrig {

struct RunOptions {
  bool json = false;
  bool strict = false;
  std::optional<std::int64_t> x_window;  // --precision X:M overrides the document
  std::optional<std::int64_t> p_digits;
  Method method = Method::exp;
  std::optional<std::string> point;      // --point LOC
};

/// Exit codes of the command-line contract.
enum ExitCode : int {
  kExitOk = 0,
  kExitCondition = 1,
  kExitInput = 2,
  kExitPrecision = 3,
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;       // report (JSON or text), empty on hard errors
  std::string diagnostics;  // messages for stderr
};

/// Maps an error kind to its exit code.
int exit_code_for(ErrorKind kind);

CommandResult cmd_analyze(const std::string& document_text, const RunOptions& opts);
CommandResult cmd_conditions(const std::string& document_text, const RunOptions& opts);
CommandResult cmd_frobenius(const std::string& document_text, const RunOptions& opts);

}  // namespace padrig
