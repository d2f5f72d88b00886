// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "padrig.h"

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { padrig_string_free(s); }
};

void emit(const char* out, const char* diag) {
  if (out) std::fputs(out, stdout);
  if (diag) std::fputs(diag, stderr);
}

using Command = int (*)(const padrig_document*, const padrig_options*, char**, char**);

int run_document(Command cmd, const std::string& path, const padrig_options& opts) {
  padrig_document* doc = nullptr;
  Owned err;
  const padrig_status st = padrig_document_load(path.c_str(), &doc, &err.s);
  if (st != PADRIG_OK) {
    std::cerr << "error: " << (err.s ? err.s : "cannot load document") << "\n";
    return st;
  }
  Owned out, diag;
  const int code = cmd(doc, &opts, &out.s, &diag.s);
  padrig_document_free(doc);
  emit(out.s, diag.s);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic rigidity and Frobenius structure checker for Fuchsian systems"};
  app.set_version_flag("--version", std::string(padrig_version()));
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false, strict = false;
  std::string precision, method = "exp", point;
  app.add_flag("--json", json, "JSON report instead of aligned text");
  app.add_flag("--strict", strict, "exit 1 when a condition fails");
  app.add_option("--precision", precision, "X:M, x-window bound and p-adic digits (either part may be empty)");
  app.add_option("--method", method, "Frobenius construction: exp or lifting")
      ->check(CLI::IsMember({"exp", "lifting"}));
  app.add_option("--point", point, "restrict frobenius to one singular point (a rational or inf)");

  std::string doc_path;
  auto* analyze = app.add_subcommand("analyze", "cohomology, conditions, local Frobenius gauges and a verdict");
  auto* conditions = app.add_subcommand("conditions", "conditions C1-C4 and the Frobenius power");
  auto* frobenius = app.add_subcommand("frobenius", "local Frobenius gauges with residual certificates");
  auto* selftest = app.add_subcommand("selftest", "run the bundled invariant suites");
  auto* list = app.add_subcommand("list", "names of the shipped example documents (use as builtin:NAME)");
  for (auto* sub : {analyze, conditions, frobenius})
    sub->add_option("document", doc_path, "document path or builtin:NAME")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return PADRIG_INPUT;
  }

  padrig_options opts;
  padrig_options_init(&opts);
  opts.json = json;
  opts.strict = strict;
  opts.method = method == "lifting" ? PADRIG_METHOD_LIFTING : PADRIG_METHOD_EXP;
  if (!point.empty()) opts.point = point.c_str();
  if (!precision.empty()) {
    static const std::regex form(R"(^(\d*):(\d*)$)");
    std::smatch m;
    if (!std::regex_match(precision, m, form) || (m[1].length() == 0 && m[2].length() == 0)) {
      std::cerr << "error: --precision expects X:M with positive integers, got '" << precision << "'\n";
      return PADRIG_INPUT;
    }
    try {
      if (m[1].length()) opts.x_window = std::stoll(m[1]);
      if (m[2].length()) opts.p_digits = std::stoll(m[2]);
    } catch (const std::exception&) {
      std::cerr << "error: --precision value out of range\n";
      return PADRIG_INPUT;
    }
    if ((m[1].length() && opts.x_window < 1) || (m[2].length() && opts.p_digits < 1)) {
      std::cerr << "error: --precision parts must be positive\n";
      return PADRIG_INPUT;
    }
  }

  if (*selftest) {
    Owned out;
    const int code = padrig_selftest(&out.s);
    emit(out.s, nullptr);
    return code;
  }
  if (*list) {
    for (size_t i = 0; i < padrig_builtin_count(); ++i) std::cout << padrig_builtin_name(i) << "\n";
    return PADRIG_OK;
  }
  if (*analyze) return run_document(padrig_analyze, doc_path, opts);
  if (*conditions) return run_document(padrig_conditions, doc_path, opts);
  return run_document(padrig_frobenius, doc_path, opts);
}
