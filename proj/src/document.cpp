#include "padrig/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "padrig/error.hpp"

namespace padrig {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) { fail(ErrorKind::input, path + ": " + msg); }

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed,
                   std::initializer_list<const char*> required) {
  if (!j.is_object()) bad(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(path + "." + it.key(), "unknown field");
  for (const char* r : required)
    if (!j.contains(r)) bad(path + "." + r, "missing required field");
}

std::int64_t integer_field(const json& j, const std::string& path, std::int64_t min_value) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < min_value) bad(path, "must be >= " + std::to_string(min_value));
  return v;
}

bool bool_field(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected true or false");
  return j.get<bool>();
}

Rational rational_field(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a rational string such as \"1/2\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

const json& array_field(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  return j;
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace

SystemDocument parse_document(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::input, std::string("$: malformed JSON: ") + e.what());
  }
  expect_object(root, "$", {"rank", "prime", "precision", "points", "residues", "assertions", "frobenius"},
                {"rank", "prime", "points", "assertions"});
  SystemDocument doc;
  doc.system.rank = static_cast<std::size_t>(integer_field(root["rank"], "$.rank", 1));
  const auto p = integer_field(root["prime"], "$.prime", 2);
  if (!is_prime(p)) bad("$.prime", std::to_string(p) + " is not prime");
  doc.prime = Prime(p);

  if (root.contains("precision")) {
    const auto& pr = root["precision"];
    expect_object(pr, "$.precision", {"x_window", "p_digits"}, {});
    if (pr.contains("x_window")) doc.x_window = integer_field(pr["x_window"], "$.precision.x_window", 1);
    if (pr.contains("p_digits")) doc.p_digits = integer_field(pr["p_digits"], "$.precision.p_digits", 1);
  }

  const auto& pts = array_field(root["points"], "$.points");
  if (pts.empty()) bad("$.points", "at least one singular point is required");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string path = idx("$.points", i);
    expect_object(pts[i], path, {"location", "exponents"}, {"location", "exponents"});
    if (!pts[i]["location"].is_string()) bad(path + ".location", "expected a rational string or \"inf\"");
    SingularPoint pt = SingularPoint::infinity();
    try {
      pt = SingularPoint::parse(pts[i]["location"].get<std::string>());
    } catch (const Error& e) {
      bad(path + ".location", e.what());
    }
    const auto& ex = array_field(pts[i]["exponents"], path + ".exponents");
    if (ex.empty()) bad(path + ".exponents", "at least one exponent is required");
    std::vector<JordanBlock> blocks;
    for (std::size_t k = 0; k < ex.size(); ++k) {
      const std::string ep = idx(path + ".exponents", k);
      expect_object(ex[k], ep, {"value", "block"}, {"value", "block"});
      blocks.push_back({rational_field(ex[k]["value"], ep + ".value"),
                        static_cast<std::size_t>(integer_field(ex[k]["block"], ep + ".block", 1))});
    }
    doc.system.locals.push_back({pt, JordanType(std::move(blocks))});
  }

  if (root.contains("residues")) {
    const auto& rs = array_field(root["residues"], "$.residues");
    std::vector<MatrixQ> residues;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const std::string rp = idx("$.residues", i);
      const auto& rows = array_field(rs[i], rp);
      const std::size_t n = rows.size();
      if (n == 0) bad(rp, "empty matrix");
      std::vector<Rational> entries;
      for (std::size_t r = 0; r < n; ++r) {
        const auto& row = array_field(rows[r], idx(rp, r));
        if (row.size() != n) bad(idx(rp, r), "matrix must be square");
        for (std::size_t c = 0; c < n; ++c) entries.push_back(rational_field(row[c], idx(idx(rp, r), c)));
      }
      residues.emplace_back(n, std::move(entries));
    }
    doc.system.residues = std::move(residues);
  }

  const auto& as = root["assertions"];
  expect_object(as, "$.assertions", {"irreducible", "overconvergent"}, {"irreducible", "overconvergent"});
  doc.system.irreducible = bool_field(as["irreducible"], "$.assertions.irreducible");
  doc.system.overconvergent_asserted = bool_field(as["overconvergent"], "$.assertions.overconvergent");

  if (root.contains("frobenius")) {
    const auto& fr = root["frobenius"];
    expect_object(fr, "$.frobenius", {"f", "q", "lift_h"}, {});
    LiftSpec spec;
    if (fr.contains("f") && fr.contains("q")) bad("$.frobenius", "give f or q, not both");
    if (fr.contains("f")) spec.f = integer_field(fr["f"], "$.frobenius.f", 1);
    if (fr.contains("q")) spec.q = integer_field(fr["q"], "$.frobenius.q", 2);
    if (fr.contains("lift_h")) {
      const auto& terms = array_field(fr["lift_h"], "$.frobenius.lift_h");
      std::set<std::int64_t> seen;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = idx("$.frobenius.lift_h", i);
        expect_object(terms[i], tp, {"exponent", "value"}, {"exponent", "value"});
        const auto e = integer_field(terms[i]["exponent"], tp + ".exponent", 0);
        if (!seen.insert(e).second) bad(tp + ".exponent", "duplicate exponent " + std::to_string(e));
        spec.h_terms.emplace_back(e, rational_field(terms[i]["value"], tp + ".value"));
      }
    }
    doc.frobenius = std::move(spec);
  }
  return doc;
}

std::string read_document_text(const std::string& path) {
  constexpr std::string_view kBuiltin = "builtin:";
  if (path.rfind(kBuiltin, 0) == 0) {
    const std::string name = path.substr(kBuiltin.size());
    for (const auto& [n, text] : builtin_documents())
      if (n == name) return text;
    fail(ErrorKind::input, "no built-in document named '" + name + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::input, "cannot read document '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace padrig
