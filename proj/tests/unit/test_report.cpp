#include <string>

#include "doctest.h"
#include "json.hpp"
#include "padrig/document.hpp"
#include "padrig/error.hpp"
#include "padrig/report.hpp"

using namespace padrig;
using nlohmann::json;

namespace {

const char* kRank1 = R"({
  "rank": 1, "prime": 5,
  "points": [
    {"location": "0", "exponents": [{"value": "1/2", "block": 1}]},
    {"location": "inf", "exponents": [{"value": "-1/2", "block": 1}]}
  ],
  "residues": [[["1/2"]]],
  "assertions": {"irreducible": true, "overconvergent": true}
})";

std::string message_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    return e.what();
  }
  return "";
}

std::string with(const std::string& from, const std::string& to) {
  std::string s = kRank1;
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

json analyze_json(const std::string& text, RunOptions opts = {}) {
  opts.json = true;
  const auto r = cmd_analyze(text, opts);
  REQUIRE(!r.output.empty());
  return json::parse(r.output);
}

}  // namespace

TEST_CASE("document parsing") {
  const auto doc = parse_document(kRank1);
  CHECK(doc.system.rank == 1);
  CHECK(doc.prime.value() == 5);
  CHECK(doc.system.locals.size() == 2);
  CHECK(doc.system.locals[1].point.is_infinity());
  CHECK(doc.system.residues->size() == 1);
  CHECK(!doc.frobenius);
  CHECK(!doc.x_window);
}

TEST_CASE("document strictness") {
  CHECK(message_of(with("\"rank\": 1,", "\"rank\": 1, \"colour\": 2,")) == "$.colour: unknown field");
  CHECK(message_of(with("\"value\": \"1/2\"", "\"value\": \"1/0\"")).find("$.points[0].exponents[0].value") == 0);
  CHECK(message_of(with("\"value\": \"1/2\"", "\"value\": 0.5")).find("$.points[0].exponents[0].value") == 0);
  CHECK(message_of(with("\"value\": \"-1/2\"", "\"value\": \"-1/2x\"")).find("$.points[1].exponents[0].value") == 0);
  CHECK(message_of(with("\"block\": 1}]},", "\"block\": 1, \"extra\": 0}]},")) == "$.points[0].exponents[0].extra: unknown field");
  CHECK(message_of(with("\"prime\": 5", "\"prime\": 6")).find("$.prime") == 0);
  CHECK(message_of(with("\"overconvergent\": true", "\"overconvergent\": 1")) == "$.assertions.overconvergent: expected true or false");
  CHECK(message_of(with(",\n  \"assertions\": {\"irreducible\": true, \"overconvergent\": true}", "")) ==
        "$.assertions: missing required field");
  CHECK(message_of(with("\"rank\": 1,", "\"rank\": 1, \"frobenius\": {\"f\": 1, \"q\": 5},")).find("$.frobenius") == 0);
  CHECK(message_of(with("\"rank\": 1,", "\"rank\": 1, \"frobenius\": {\"lift_h\": [{\"exponent\": -1, \"value\": \"5\"}]},"))
            .find("$.frobenius.lift_h[0].exponent") == 0);
  CHECK(message_of("{not json").find("$") == 0);
  CHECK(message_of("[]") == "$: expected an object");
}

TEST_CASE("builtin corpus") {
  const auto& docs = builtin_documents();
  REQUIRE(docs.size() == 6);
  for (const auto& [name, text] : docs) {
    CAPTURE(name);
    CHECK_NOTHROW(parse_document(text));
    CHECK(read_document_text("builtin:" + name) == text);
  }
  CHECK_THROWS_AS(read_document_text("builtin:nope"), Error);
  CHECK_THROWS_AS(read_document_text("/nonexistent/doc.json"), Error);
}

TEST_CASE("analyze verdicts and exit codes") {
  auto text = [](const char* n) { return read_document_text(std::string("builtin:") + n); };
  const auto hyp = analyze_json(text("hypergeometric"));
  CHECK(hyp["verdict"] == "rigid-with-frobenius-structure");
  CHECK(hyp["conditions"]["q"] == 5);
  CHECK(hyp["conditions"]["N"] == 4);
  CHECK(hyp["cohomology"]["h1p_end"] == 0);
  for (const auto& pt : hyp["frobenius"]["points"]) CHECK(pt["status"] == "verified");

  const auto heun = analyze_json(text("heun"));
  CHECK(heun["verdict"] == "not-rigid");
  CHECK(heun["cohomology"]["h1p_end"] == 2);
  CHECK(heun["frobenius"]["performed"] == false);

  const auto c1 = analyze_json(text("c1_fail"));
  CHECK(c1["verdict"] == "rigid-conditions-failed");
  CHECK(c1["conditions"]["c1"] == "fail");
  REQUIRE(c1["conditions"]["witnesses"].size() == 1);
  CHECK(c1["conditions"]["witnesses"][0]["points"] == json::array({"0", "5"}));
  CHECK(c1["conditions"]["q"].is_null());

  const auto c3 = analyze_json(text("c3_fail"));
  CHECK(c3["verdict"] == "rigid-conditions-failed");
  CHECK(c3["conditions"]["c3"] == "fail");

  RunOptions strict;
  strict.strict = true;
  CHECK(cmd_analyze(text("c1_fail"), strict).exit_code == kExitCondition);
  CHECK(cmd_analyze(text("c1_fail"), {}).exit_code == kExitOk);
  CHECK(cmd_conditions(text("c3_fail"), strict).exit_code == kExitCondition);
  CHECK(cmd_conditions(text("hypergeometric"), strict).exit_code == kExitOk);

  const auto p2 = cmd_analyze(text("p2"), {});
  CHECK(p2.exit_code == kExitPrecision);
  CHECK(p2.diagnostics.find("lifting") != std::string::npos);
  RunOptions lifting;
  lifting.method = Method::lifting;
  CHECK(cmd_analyze(text("p2"), lifting).exit_code == kExitOk);

  CHECK(cmd_analyze("{", {}).exit_code == kExitInput);
  // structurally invalid system: rank mismatch
  CHECK(cmd_analyze(with("\"value\": \"1/2\", \"block\": 1}", "\"value\": \"1/2\", \"block\": 2}"), {}).exit_code == kExitInput);
}

TEST_CASE("precision defaults are announced") {
  const auto j = analyze_json(kRank1);
  CHECK(j["precision"]["x_window"] == 10);
  CHECK(j["precision"]["p_digits_source"] == "default");
  RunOptions o;
  o.x_window = 12;
  o.p_digits = 15;
  const auto k = analyze_json(kRank1, o);
  CHECK(k["precision"]["x_window"] == 12);
  CHECK(k["precision"]["x_window_source"] == "flag");
  const auto doc = with("\"rank\": 1,", "\"rank\": 1, \"precision\": {\"x_window\": 14},");
  const auto d = analyze_json(doc);
  CHECK(d["precision"]["x_window"] == 14);
  CHECK(d["precision"]["x_window_source"] == "document");
}

TEST_CASE("frobenius command") {
  RunOptions o;
  o.json = true;
  o.point = "0";
  // h = 1: the gauge at 0 is x^2 with an exactly vanishing residual
  const auto r = cmd_frobenius(kRank1, o);
  REQUIRE(r.exit_code == kExitOk);
  const auto j = json::parse(r.output);
  REQUIRE(j["points"].size() == 1);
  const auto& res = j["points"][0]["result"];
  CHECK(res["residual_valuation"] == "exact");
  const auto& terms = res["gauge"][0][0]["terms"];
  REQUIRE(terms.size() == 1);
  CHECK(terms[0]["exponent"] == 2);
  CHECK(terms[0]["value"] == "1");

  // lifting against the standard lift with h = 1: identity first step
  o.method = Method::lifting;
  const auto l = json::parse(cmd_frobenius(kRank1, o).output);
  const auto& first = l["points"][0]["first_step"]["gauge"][0][0]["terms"];
  REQUIRE(first.size() == 1);
  CHECK(first[0]["exponent"] == 0);
  CHECK(first[0]["value"] == "1");

  o.point = "3";
  CHECK(cmd_frobenius(kRank1, o).exit_code == kExitInput);
  o.point = "inf";
  CHECK(cmd_frobenius(kRank1, o).exit_code == kExitOk);

  const auto p2 = read_document_text("builtin:p2");
  RunOptions e;
  const auto pe = cmd_frobenius(p2, e);
  CHECK(pe.exit_code == kExitPrecision);
  CHECK(pe.diagnostics.find("method lifting") != std::string::npos);

  // no q: conditions fail and the document names none
  CHECK(cmd_frobenius(read_document_text("builtin:c3_fail"), e).exit_code == kExitCondition);
}

TEST_CASE("reports are deterministic") {
  RunOptions o;
  o.json = true;
  for (const auto& [name, text] : builtin_documents()) {
    CAPTURE(name);
    CHECK(cmd_analyze(text, o).output == cmd_analyze(text, o).output);
  }
}
