#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padrig/fuchsian.hpp"
#include "padrig/rational.hpp"

namespace padrig {

/// Frobenius data of a document: optional f or q and the terms of h.
struct LiftSpec {
  std::optional<std::int64_t> f;
  std::optional<std::int64_t> q;
  /// (exponent, coefficient) of h; exponent 0 defaults to coefficient 1 when absent.
  std::vector<std::pair<std::int64_t, Rational>> h_terms;
};

struct SystemDocument {
  FuchsianSystem system;
  Prime prime{2};
  std::optional<std::int64_t> x_window;
  std::optional<std::int64_t> p_digits;
  std::optional<LiftSpec> frobenius;
};

/// Strict parse: unknown fields, wrong types and malformed rationals fail with
/// ErrorKind::input and a JSON path such as $.points[1].exponents[0].value.
/// Does not validate the system itself (see validate_system).
SystemDocument parse_document(std::string_view json_text);

/// Reads a file, or a shipped example when the path is "builtin:NAME".
std::string read_document_text(const std::string& path);

/// Shipped example documents: (name, JSON text), in a fixed order.
const std::vector<std::pair<std::string, std::string>>& builtin_documents();

}  // namespace padrig
