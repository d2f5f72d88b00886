#include "padrig.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "padrig/document.hpp"
#include "padrig/error.hpp"
#include "padrig/fuchsian.hpp"
#include "padrig/report.hpp"
#include "padrig/selftest.hpp"

struct padrig_document {
  std::string text;
  padrig::SystemDocument parsed;
};

namespace {

char* dup(const std::string& s) {
  if (s.empty()) return nullptr;
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** slot, const std::string& s) {
  if (slot) *slot = dup(s);
}

padrig_status status_of(const padrig::Error& e) { return static_cast<padrig_status>(padrig::exit_code_for(e.kind())); }

padrig::RunOptions convert(const padrig_options* o) {
  padrig::RunOptions r;
  if (!o) return r;
  r.json = o->json != 0;
  r.strict = o->strict != 0;
  if (o->x_window > 0) r.x_window = o->x_window;
  if (o->p_digits > 0) r.p_digits = o->p_digits;
  r.method = o->method == PADRIG_METHOD_LIFTING ? padrig::Method::lifting : padrig::Method::exp;
  if (o->point) r.point = std::string(o->point);
  return r;
}

template <class F>
padrig_status guard(char** error, F&& body) {
  if (error) *error = nullptr;
  try {
    body();
    return PADRIG_OK;
  } catch (const padrig::Error& e) {
    put(error, e.what());
    return status_of(e);
  } catch (const std::bad_alloc&) {
    put(error, "out of memory");
    return PADRIG_INTERNAL;
  } catch (const std::exception& e) {
    put(error, e.what());
    return PADRIG_INTERNAL;
  }
}

using Command = padrig::CommandResult (*)(const std::string&, const padrig::RunOptions&);

int run(Command cmd, const padrig_document* doc, const padrig_options* opts, char** output, char** diagnostics) {
  if (output) *output = nullptr;
  if (diagnostics) *diagnostics = nullptr;
  if (!doc) {
    put(diagnostics, "error: null document");
    return PADRIG_INPUT;
  }
  try {
    const auto r = cmd(doc->text, convert(opts));
    put(output, r.output);
    put(diagnostics, r.diagnostics);
    return r.exit_code;
  } catch (const std::exception& e) {
    put(diagnostics, std::string("error: ") + e.what());
    return PADRIG_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* padrig_version(void) { return "1.0.0"; }

void padrig_options_init(padrig_options* opts) {
  if (!opts) return;
  *opts = padrig_options{0, 0, 0, 0, PADRIG_METHOD_EXP, nullptr};
}

void padrig_string_free(char* s) { std::free(s); }

padrig_status padrig_document_parse(const char* text, size_t length, padrig_document** out, char** error) {
  if (out) *out = nullptr;
  return guard(error, [&] {
    if (!text || !out) padrig::fail(padrig::ErrorKind::input, "null argument");
    auto doc = std::make_unique<padrig_document>();
    doc->text.assign(text, length);
    doc->parsed = padrig::parse_document(doc->text);
    *out = doc.release();
  });
}

padrig_status padrig_document_load(const char* path, padrig_document** out, char** error) {
  if (out) *out = nullptr;
  std::string text;
  const auto st = guard(error, [&] {
    if (!path) padrig::fail(padrig::ErrorKind::input, "null path");
    text = padrig::read_document_text(path);
  });
  if (st != PADRIG_OK) return st;
  return padrig_document_parse(text.data(), text.size(), out, error);
}

void padrig_document_free(padrig_document* doc) { delete doc; }

padrig_status padrig_document_rigidity_index(const padrig_document* doc, int64_t* out, char** error) {
  return guard(error, [&] {
    if (!doc || !out) padrig::fail(padrig::ErrorKind::input, "null argument");
    padrig::require_valid(doc->parsed.system);
    *out = padrig::rigidity_index(doc->parsed.system);
  });
}

int padrig_analyze(const padrig_document* doc, const padrig_options* opts, char** output, char** diagnostics) {
  return run(padrig::cmd_analyze, doc, opts, output, diagnostics);
}

int padrig_conditions(const padrig_document* doc, const padrig_options* opts, char** output, char** diagnostics) {
  return run(padrig::cmd_conditions, doc, opts, output, diagnostics);
}

int padrig_frobenius(const padrig_document* doc, const padrig_options* opts, char** output, char** diagnostics) {
  return run(padrig::cmd_frobenius, doc, opts, output, diagnostics);
}

int padrig_selftest(char** output) {
  if (output) *output = nullptr;
  try {
    const auto results = padrig::run_selftest();
    put(output, padrig::format_selftest(results));
    for (const auto& r : results)
      if (!r.pass) return PADRIG_CONDITION;
    return PADRIG_OK;
  } catch (const std::exception& e) {
    put(output, std::string("selftest aborted: ") + e.what() + "\n");
    return PADRIG_CONDITION;
  }
}

size_t padrig_builtin_count(void) { return padrig::builtin_documents().size(); }

const char* padrig_builtin_name(size_t index) {
  const auto& docs = padrig::builtin_documents();
  return index < docs.size() ? docs[index].first.c_str() : nullptr;
}

}  // extern "C"
